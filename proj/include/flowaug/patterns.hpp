#pragma once

#include <optional>
#include <vector>

#include "flowaug/flow.hpp"
#include "flowaug/graph.hpp"

namespace flowaug {

enum class ResReachClass { MincutBoundary, TReachable, Dead };

struct ResReach {
  std::vector<char> reach;  // indexed by vertex id
  ResReachClass cls;
};

// Boolean adjacency of the reachability pattern H on path indices [lambda];
// self-loop at every vertex.
using Pattern = std::vector<std::vector<char>>;

bool pattern_transitive(const Pattern& h);
int pattern_edge_count(const Pattern& h);

// Residual-reachability workspace for one (G, maxflow) pair. Reach sets are
// cached per query vertex; invalidate by rebuilding.
class PatternContext {
 public:
  PatternContext(const Digraph& g, Vertex s, Vertex t, const Flow& maxflow);

  const Digraph& graph() const { return *g_; }
  Vertex s() const { return s_; }
  Vertex t() const { return t_; }
  int lambda() const { return static_cast<int>(flow_.paths.size()); }
  const Flow& flow() const { return flow_; }
  const std::vector<Vertex>& path_verts(int i) const { return pverts_[i]; }

  // Position of v on P_i, -1 if absent.
  int pos_on_path(int i, Vertex v) const;
  // Index (into the path's arc list) of the unique arc of cut C on P_i.
  int cut_arc_index(const Cut& c, int i) const;
  // True when v sits strictly on the t-side of C along P_i.
  bool after_cut(const Cut& c, int i, Vertex v) const;

  const std::vector<char>& res_reach_set(Vertex v);
  ResReach res_reach(Vertex v);

  // Last vertex of P_i residually reachable from v; -1 when none.
  Vertex last_reach(Vertex v, int i);

  Pattern pattern();

  Vertex leader(const Pattern& h, const Cut& c, int i);
  std::optional<Cut> h_subsequent(const Pattern& h, const Cut& c);
  std::vector<Cut> h_sequence(const Pattern& h);

 private:
  const Digraph* g_;
  Vertex s_, t_;
  Flow flow_;
  std::vector<std::vector<Vertex>> pverts_;
  std::vector<std::vector<int>> pos_;  // pos_[i][v]
  std::vector<std::vector<Vertex>> radj_;
  std::vector<std::optional<std::vector<char>>> reach_cache_;
};

bool has_proper_boundaries(const Digraph& g, Vertex s, Vertex t);

// delta^+(X) over alive arcs; throws if an infinity arc leaves X.
Cut out_cut(const Digraph& g, const std::vector<char>& x);

}  // namespace flowaug
