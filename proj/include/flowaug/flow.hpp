#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "flowaug/graph.hpp"

namespace flowaug {

// An st-flow: ordered list of s->t walks (arc-id sequences), no capacity-1
// arc on two paths. Value = number of paths.
struct Flow {
  std::vector<std::vector<ArcId>> paths;
  int value() const { return static_cast<int>(paths.size()); }
  bool empty() const { return paths.empty(); }
};

using Cut = std::vector<ArcId>;  // sorted arc ids, capacity-1 only

// Augmentation output: arc pairs to add as infinity arcs plus an st-maxflow
// of G+A.
struct AugPair {
  std::vector<std::pair<Vertex, Vertex>> arcs;  // sorted, unique
  Flow flow;
};

struct MaxflowResult {
  enum class Kind { Value, Infinite, ExceedsBound } kind = Kind::Value;
  int value = 0;  // exact lambda when Kind::Value
  Flow flow;      // maxflow when Value; one all-inf path when Infinite;
                  // bound+1 disjoint paths when ExceedsBound
};

// BFS augmenting paths over {1, inf} capacities, value capped at bound+1,
// ties broken by ascending arc id; the all-inf reachability check runs first.
MaxflowResult max_flow(const Digraph& g, Vertex s, Vertex t, int bound);

// Exact lambda for small graphs (no bound); throws if infinite.
int lambda_exact(const Digraph& g, Vertex s, Vertex t);

bool flow_valid(const Digraph& g, Vertex s, Vertex t, const Flow& f);

// Vertices of a path walk, starting at s.
std::vector<Vertex> path_vertices(const Digraph& g, const std::vector<ArcId>& path, Vertex s);

// Residual network G^P: every path arc gains a reversed unit copy, unit path
// arcs are deleted, inf arcs stay.
Digraph residual(const Digraph& g, Vertex s, Vertex t, const Flow& f);

// Vertices reachable from `from` in G minus the arcs of `banned` (which must
// be sorted).
std::vector<char> reach_avoiding(const Digraph& g, Vertex from, const Cut& banned);

bool is_st_cut(const Digraph& g, Vertex s, Vertex t, const Cut& z);

enum class CutSide { S, T };
Cut mincut_closest(const Digraph& g, Vertex s, Vertex t, CutSide side);

bool is_star_cut(const Digraph& g, Vertex s, Vertex t, const Cut& z);

// core(Z): arcs of the star cut whose head still reaches t in G-Z; a minimal
// st-cut (checked when FLOWAUG_PARANOID asserts are on).
Cut core_cut(const Digraph& g, Vertex s, Vertex t, const Cut& z);

bool is_compatible(const Digraph& g, Vertex s, Vertex t, const Cut& z, const AugPair& pair);

struct BottleneckResult {
  std::vector<ArcId> arcs;
  bool lambda_infinite = false;
};
// Capacity-1 arcs lying on at least one st-mincut.
BottleneckResult bottleneck_arcs(const Digraph& g, Vertex s, Vertex t);

// Invariant-violation escape hatch: always-on checks that throw.
struct CheckError : std::logic_error {
  using std::logic_error::logic_error;
};
inline void check(bool cond, const char* msg) {
  if (!cond) throw CheckError(msg);
}

}  // namespace flowaug
