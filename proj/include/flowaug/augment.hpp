#pragma once

#include <cstdint>
#include <vector>

#include "flowaug/flow.hpp"
#include "flowaug/graph.hpp"
#include "flowaug/rng.hpp"

namespace flowaug {

struct AugmentStats {
  long long calls = 0;
  int max_depth = 0;
  long long depth_cap_fallbacks = 0;  // must stay zero; fallback is a defect signal
  long long base_case = 0;
  long long small_ell = 0;
  long long large_ell = 0;
  long long corner1 = 0, corner2 = 0, corner3 = 0, corner4 = 0, main_case = 0;
  long long trivial_mix = 0;
  long long whitebox_on_track = 0;  // calls where the supplied Z was still a star cut
};

// White-box mode: a ground-truth star cut enables the structural assertions
// of the long-sequence case (touched-index bound, closure chain, budget
// identity). Assertions throw CheckError on violation.
struct WhiteBox {
  Cut z;
};

struct AugmentOptions {
  bool mix_trivial = true;  // randomized: flip a fair coin for the (empty, maxflow) pair
  AugmentStats* stats = nullptr;
  const WhiteBox* whitebox = nullptr;
};

// Depth budget D(k0) and the hard cap used by the fallback escape.
int recursion_depth_budget(int k0);

// Randomized directed flow-augmentation. Returns (A, maxflow of G+A) with
// lambda_{G+A} >= kappa; compatible with any fixed star st-cut Z (|Z| <= k,
// |core(Z)| >= kappa) with probability bounded away from zero in k.
AugPair augment_randomized(const Digraph& g, Vertex s, Vertex t, int k, int kappa,
                           const Flow* warm_flow, SplitRng rng,
                           const AugmentOptions& opts = {});

// Deterministic counterpart: a family such that for every star st-cut Z with
// |Z| <= k and |core(Z)| >= kappa, some member is compatible with Z.
std::vector<AugPair> augment_deterministic(const Digraph& g, Vertex s, Vertex t, int k,
                                           int kappa, const Flow* warm_flow,
                                           const AugmentOptions& opts = {});

// Host graph of an AugPair's flow: add_arcs(g, pair.arcs); flow arc ids >=
// g.arc_bound() index pair.arcs in order.
Digraph pair_host_graph(const Digraph& g, const AugPair& pair);

}  // namespace flowaug
