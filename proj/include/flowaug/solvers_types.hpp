#pragma once

#include <cstdint>
#include <vector>

#include "flowaug/graph.hpp"

namespace flowaug {

// Weighted Bundled Cut instance. Bundles are pairwise disjoint arc sets;
// soft = in some bundle, crisp otherwise; deletable = soft without a parallel
// crisp arc. Cost counts touched bundles.
struct BundledInstance {
  Digraph g;
  Vertex s = -1;
  Vertex t = -1;
  int k = 0;
  std::vector<Bundle> bundles;
  std::int64_t w = 0;
};

// Weighted Skew Multicut: kill all s_i -> t_j paths for i <= j.
struct SkewInstance {
  Digraph g;
  std::vector<std::pair<Vertex, Vertex>> pairs;  // (s_i, t_i), i = 1..b
  std::vector<std::int64_t> arc_weight;          // indexed by arc id
  int k = 0;
  std::int64_t w = 0;
};

}  // namespace flowaug
