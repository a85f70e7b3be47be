#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flowaug/augment.hpp"
#include "flowaug/flow.hpp"
#include "flowaug/graph.hpp"
#include "flowaug/solvers_types.hpp"

namespace flowaug {

struct SolveStats {
  long long family_members = 0;
  long long members_used = 0;
  long long aux_solves = 0;
};

struct SolveOptions {
  SolveStats* stats = nullptr;
  AugmentStats* aug_stats = nullptr;  // threaded into internal augmentation calls
};

// Among all st-cuts, minimize cardinality first and weight second via the
// capacity shift omega(e) + M, M = 1 + sum of weights.
Cut min_weight_mincut(const Digraph& g, const std::vector<std::int64_t>& arc_weight, Vertex s,
                      Vertex t);

struct CutSolution {
  Cut arcs;
  std::int64_t weight = 0;
};
std::optional<CutSolution> solve_weighted_st_cut(const Digraph& g,
                                                 const std::vector<std::int64_t>& arc_weight,
                                                 Vertex s, Vertex t, int k, std::int64_t w,
                                                 const SolveOptions& opts = {});

struct BundledSolution {
  std::vector<int> touched;  // bundle indices
  Cut arcs;
  std::int64_t weight = 0;
};
std::optional<BundledSolution> solve_bundled_cut(const BundledInstance& inst,
                                                 const SolveOptions& opts = {});

// Bundled Cut whose bundles must be directed paths of length <= ell.
std::optional<BundledSolution> solve_chain_sat(const BundledInstance& inst, int ell,
                                               const SolveOptions& opts = {});

// b disjoint copies, one bundle per original arc, crisp (v^i, v^j) downward
// arcs; equivalent instance with pairwise linked deletable edges.
struct SkewReduction {
  BundledInstance bundled;
  std::vector<ArcId> bundle_of_arc;  // original arc id per bundle index
};
SkewReduction reduce_skew_to_bundled(const SkewInstance& inst);

struct ArcSolution {
  std::vector<ArcId> arcs;
  std::int64_t weight = 0;
};
std::optional<ArcSolution> solve_skew_multicut(const SkewInstance& inst,
                                               const SolveOptions& opts = {});

std::optional<ArcSolution> solve_wdfas(const Digraph& g,
                                       const std::vector<std::int64_t>& arc_weight, int k,
                                       std::int64_t w, const SolveOptions& opts = {});

struct VertexSolution {
  std::vector<Vertex> vertices;
  std::int64_t weight = 0;
};
std::optional<VertexSolution> solve_wdfvs(const Digraph& g,
                                          const std::vector<std::int64_t>& vertex_weight, int k,
                                          std::int64_t w, const SolveOptions& opts = {});

// Pairwise-linked-deletable-edges precondition; index of an offending bundle
// when violated.
std::optional<int> pairwise_linked_violation(const BundledInstance& inst);

std::int64_t checked_add(std::int64_t a, std::int64_t b);

}  // namespace flowaug
