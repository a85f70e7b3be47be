#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace flowaug {

using Vertex = int;
using ArcId = int;

enum class Cap : std::uint8_t { One = 1, Inf = 2 };

struct Arc {
  Vertex tail = -1;
  Vertex head = -1;
  Cap cap = Cap::One;
  bool alive = true;
};

// Directed multigraph over integer vertex ids with {1, inf} capacities.
// Arc ids are stable: additions append, deletions only clear the alive flag.
// Parallel arcs and self-loops are representable.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int n) : vertex_alive_(n, true) {}

  int vertex_bound() const { return static_cast<int>(vertex_alive_.size()); }
  bool has_vertex(Vertex v) const {
    return v >= 0 && v < vertex_bound() && vertex_alive_[v];
  }
  int num_vertices() const {
    int c = 0;
    for (bool b : vertex_alive_) c += b ? 1 : 0;
    return c;
  }
  std::vector<Vertex> vertices() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < vertex_bound(); ++v)
      if (vertex_alive_[v]) out.push_back(v);
    return out;
  }

  ArcId add_arc(Vertex tail, Vertex head, Cap cap) {
    if (!has_vertex(tail) || !has_vertex(head))
      throw std::invalid_argument("add_arc: unknown vertex id");
    arcs_.push_back(Arc{tail, head, cap, true});
    return static_cast<ArcId>(arcs_.size()) - 1;
  }

  // Mirrors an arc table slot verbatim (dead slots keep ids aligned across
  // contraction). Callers are responsible for endpoint validity.
  ArcId add_arc_raw(const Arc& a) {
    arcs_.push_back(a);
    return static_cast<ArcId>(arcs_.size()) - 1;
  }

  void remove_arc(ArcId id) {
    if (!arc_alive(id)) throw std::invalid_argument("remove_arc: dead or bad arc id");
    arcs_[id].alive = false;
  }

  void set_capacity(ArcId id, Cap cap) {
    if (!arc_alive(id)) throw std::invalid_argument("set_capacity: dead or bad arc id");
    arcs_[id].cap = cap;
  }

  void remove_vertex(Vertex v) {
    if (!has_vertex(v)) throw std::invalid_argument("remove_vertex: unknown id");
    for (auto& a : arcs_)
      if (a.alive && (a.tail == v || a.head == v)) a.alive = false;
    vertex_alive_[v] = false;
  }

  int arc_bound() const { return static_cast<int>(arcs_.size()); }
  bool arc_alive(ArcId id) const {
    return id >= 0 && id < arc_bound() && arcs_[id].alive;
  }
  const Arc& arc(ArcId id) const { return arcs_[id]; }

  int num_arcs() const {
    int c = 0;
    for (const auto& a : arcs_) c += a.alive ? 1 : 0;
    return c;
  }
  int num_unit_arcs() const {
    int c = 0;
    for (const auto& a : arcs_) c += (a.alive && a.cap == Cap::One) ? 1 : 0;
    return c;
  }
  std::vector<ArcId> unit_arcs() const {
    std::vector<ArcId> out;
    for (ArcId i = 0; i < arc_bound(); ++i)
      if (arcs_[i].alive && arcs_[i].cap == Cap::One) out.push_back(i);
    return out;
  }
  std::vector<ArcId> alive_arcs() const {
    std::vector<ArcId> out;
    for (ArcId i = 0; i < arc_bound(); ++i)
      if (arcs_[i].alive) out.push_back(i);
    return out;
  }

  // Out-adjacency (head, arc id), arcs in ascending id order per vertex.
  std::vector<std::vector<std::pair<Vertex, ArcId>>> out_adjacency() const;
  std::vector<std::vector<std::pair<Vertex, ArcId>>> in_adjacency() const;

 private:
  std::vector<Arc> arcs_;
  std::vector<bool> vertex_alive_;
};

// Maps pre-operation vertex ids to post-operation ids (contractions send a
// whole set to s or t). Total on the pre-operation vertex set.
struct VertexMap {
  std::vector<Vertex> to;  // indexed by old id; -1 for ids absent before the op

  Vertex operator()(Vertex old) const {
    if (old < 0 || old >= static_cast<int>(to.size()) || to[old] < 0)
      throw std::invalid_argument("VertexMap: id not in pre-operation set");
    return to[old];
  }
};

// G+A: every ordered pair added as a fresh infinity-capacity arc.
Digraph add_arcs(const Digraph& g, const std::vector<std::pair<Vertex, Vertex>>& pairs);

// Merge X into `target` (which must be in X). Arcs inside X die, others
// re-attach; surviving arc ids are preserved.
std::pair<Digraph, VertexMap> contract(const Digraph& g, const std::vector<Vertex>& x,
                                       Vertex target, Vertex opposite_terminal);

struct Bundle {
  std::int64_t weight = 1;
  std::vector<ArcId> arcs;
};

// Parsed instance: graph plus the bundled-cut extension fields, all optional
// beyond the graph itself.
struct Instance {
  Digraph g;
  Vertex s = -1;
  Vertex t = -1;
  bool has_k = false;
  int k = 0;
  bool has_w = false;
  std::int64_t w = 0;
  std::vector<Bundle> bundles;
  std::vector<std::pair<Vertex, std::int64_t>> vertex_weights;  // vw lines
  std::vector<std::pair<Vertex, Vertex>> pairs;                 // q lines (skew)
};

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);

bool same_structure(const Instance& a, const Instance& b);

}  // namespace flowaug
