#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flowaug/flow.hpp"
#include "flowaug/graph.hpp"
#include "flowaug/solvers_types.hpp"

namespace flowaug::oracle {

struct GuardExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All star st-cuts of size <= k with their cores, ascending cardinality then
// lexicographic by arc ids. Guard on the number of capacity-1 arcs.
struct StarCut {
  Cut z;
  Cut core;
};
std::vector<StarCut> enum_star_cuts(const Digraph& g, Vertex s, Vertex t, int k,
                                    int guard = 25);

// Compatibility check written against the definitions only: independent BFS
// reachability plus an arc-flow Ford-Fulkerson, no shared cut/flow logic.
bool is_compatible(const Digraph& g, Vertex s, Vertex t, const Cut& z, const AugPair& pair);

struct CompatRow {
  Cut z;
  Cut core;
  bool covered = false;
};
std::vector<CompatRow> compatibility_table(const Digraph& g, Vertex s, Vertex t, int k,
                                           int kappa, const std::vector<AugPair>& family,
                                           int guard = 25);

// Exhaustive minimum answers; yes iff a solution with cardinality <= k and
// weight <= w exists, weight = minimum over those.
struct BruteAnswer {
  bool yes = false;
  std::int64_t weight = 0;
  int cardinality = 0;  // cardinality of a lexicographically-first optimum
};

BruteAnswer brute_wstcut(const Digraph& g, const std::vector<std::int64_t>& arc_weight,
                         Vertex s, Vertex t, int k, std::int64_t w);
BruteAnswer brute_bundled(const BundledInstance& inst);
BruteAnswer brute_skew(const SkewInstance& inst);
BruteAnswer brute_dfas(const Digraph& g, const std::vector<std::int64_t>& arc_weight, int k,
                       std::int64_t w);
BruteAnswer brute_dfvs(const Digraph& g, const std::vector<std::int64_t>& vertex_weight, int k,
                       std::int64_t w);

// Independent lambda (bounded); kind mirrors flowaug::MaxflowResult.
struct LambdaResult {
  enum class Kind { Value, Infinite, ExceedsBound } kind = Kind::Value;
  int value = 0;
};
LambdaResult lambda_bounded(const Digraph& g, Vertex s, Vertex t, int bound);

}  // namespace flowaug::oracle
