#include <algorithm>
#include <set>

#include "doctest.h"
#include "flowaug/augment.hpp"
#include "flowaug/harness.hpp"
#include "flowaug/oracle.hpp"

using namespace flowaug;

namespace {

bool family_covers_all(const Digraph& g, Vertex s, Vertex t, int k, int kappa,
                       const std::vector<AugPair>& fam) {
  auto rows = oracle::compatibility_table(g, s, t, k, kappa, fam);
  for (const auto& r : rows)
    if (!r.covered) return false;
  return true;
}

bool pair_postcondition(const Digraph& g, Vertex s, Vertex t, int kappa, const AugPair& pair) {
  Digraph host = pair_host_graph(g, pair);
  if (!flow_valid(host, s, t, pair.flow)) return false;
  bool all_inf = false;
  for (const auto& path : pair.flow.paths) {
    bool inf = !path.empty();
    for (ArcId id : path) inf = inf && host.arc(id).cap == Cap::Inf;
    all_inf |= inf;
  }
  if (all_inf) return true;  // maxflow by the infinite-lambda convention
  MaxflowResult mh = max_flow(host, s, t, pair.flow.value());
  if (mh.kind != MaxflowResult::Kind::Value || mh.value != pair.flow.value()) return false;
  return pair.flow.value() >= kappa || kappa <= 0;
}

}  // namespace

TEST_CASE("degenerate inputs") {
  Digraph isolated(2);  // no arcs at all: lambda = 0
  AugPair p0 = augment_randomized(isolated, 0, 1, 2, 0, nullptr, SplitRng(1));
  CHECK(p0.arcs.empty());
  CHECK(p0.flow.paths.empty());

  AugPair p1 = augment_randomized(isolated, 0, 1, 2, 1, nullptr, SplitRng(1));
  CHECK(p1.arcs == std::vector<std::pair<Vertex, Vertex>>{{0, 1}});
  CHECK(p1.flow.paths.size() == 1);

  auto fam = augment_deterministic(isolated, 0, 1, 2, 1, nullptr);
  REQUIRE(fam.size() == 1);
  CHECK(fam[0].arcs == std::vector<std::pair<Vertex, Vertex>>{{0, 1}});

  // lambda > k leaves no candidate cut
  auto two = fix_two();
  AugmentOptions opts;
  opts.mix_trivial = false;
  AugPair p2 = augment_randomized(two.g, 0, 3, 1, 1, nullptr, SplitRng(7), opts);
  CHECK(p2.arcs == std::vector<std::pair<Vertex, Vertex>>{{0, 3}});
}

TEST_CASE("deterministic families cover the fixture star cuts") {
  auto path = fix_path();
  auto fam_path = augment_deterministic(path.g, 0, 2, 1, 1, nullptr);
  CHECK(family_covers_all(path.g, 0, 2, 1, 1, fam_path));

  auto star = fix_star();
  auto fam_star = augment_deterministic(star.g, 0, 3, 2, 1, nullptr);
  CHECK(family_covers_all(star.g, 0, 3, 2, 1, fam_star));

  auto diam = fix_diam();
  auto fam_diam = augment_deterministic(diam.g, 0, 3, 2, 0, nullptr);
  CHECK(family_covers_all(diam.g, 0, 3, 2, 0, fam_diam));

  auto x = fix_x();
  auto fam_x = augment_deterministic(x.g, 0, 3, 2, 0, nullptr);
  CHECK(family_covers_all(x.g, 0, 3, 2, 0, fam_x));

  auto two = fix_two();
  auto fam_two = augment_deterministic(two.g, 0, 3, 3, 0, nullptr);
  CHECK(family_covers_all(two.g, 0, 3, 3, 0, fam_two));
}

TEST_CASE("every deterministic member satisfies the output contract") {
  for (const auto& ni : fixture_suite()) {
    for (int k = 1; k <= 3; ++k) {
      for (int kappa = 0; kappa <= k; ++kappa) {
        auto fam = augment_deterministic(ni.g, ni.s, ni.t, k, kappa, nullptr);
        CHECK(!fam.empty());
        for (const auto& pair : fam) CHECK(pair_postcondition(ni.g, ni.s, ni.t, kappa, pair));
      }
    }
  }
}

TEST_CASE("deterministic completeness on random small instances") {
  SplitRng rng(2024);
  int done = 0;
  for (int trial = 0; done < 40 && trial < 200; ++trial) {
    int n = 4 + static_cast<int>(rng.next_below(2));
    int m = 4 + static_cast<int>(rng.next_below(5));
    auto ni = gen_random_digraph(n, m, rng.next());
    auto lam = oracle::lambda_bounded(ni.g, ni.s, ni.t, 2);
    if (lam.kind != oracle::LambdaResult::Kind::Value || lam.value == 0) continue;
    ++done;
    for (int k = 1; k <= 2; ++k) {
      auto fam = augment_deterministic(ni.g, ni.s, ni.t, k, 0, nullptr);
      CHECK(family_covers_all(ni.g, ni.s, ni.t, k, 0, fam));
    }
  }
  CHECK(done >= 20);
}

TEST_CASE("randomized outputs always satisfy the contract") {
  for (const auto& ni : fixture_suite()) {
    for (int k = 1; k <= 3; ++k) {
      SplitRng rng(99 + k);
      for (int tr = 0; tr < 100; ++tr) {
        AugPair pair =
            augment_randomized(ni.g, ni.s, ni.t, k, 0, nullptr, rng.split(tr));
        CHECK(pair_postcondition(ni.g, ni.s, ni.t, 0, pair));
      }
    }
  }
}

TEST_CASE("randomized augmentation hits Z_star") {
  auto star = fix_star();
  Cut z_star{1, 2};
  SplitRng rng(31337);
  int hits = 0;
  const int trials = 4000;
  for (int tr = 0; tr < trials; ++tr) {
    AugPair pair = augment_randomized(star.g, 0, 3, 2, 1, nullptr, rng.split(tr));
    if (oracle::is_compatible(star.g, 0, 3, z_star, pair)) ++hits;
  }
  CHECK(hits > trials / 10);
}

TEST_CASE("recursion stays within its depth budget and exercises the cases") {
  AugmentStats stats;
  AugmentOptions opts;
  opts.stats = &stats;
  opts.mix_trivial = false;

  auto x = fix_x();
  auto fam = augment_deterministic(x.g, 0, 3, 2, 0, nullptr, opts);
  CHECK(!fam.empty());
  CHECK(stats.small_ell > 0);
  CHECK(stats.corner1 > 0);
  CHECK(stats.corner2 > 0);

  auto two = fix_two();
  augment_deterministic(two.g, 0, 3, 2, 0, nullptr, opts);
  CHECK(stats.base_case > 0);

  auto diam = fix_diam();
  augment_deterministic(diam.g, 0, 3, 3, 0, nullptr, opts);

  CHECK(stats.depth_cap_fallbacks == 0);
  CHECK(stats.max_depth <= recursion_depth_budget(3));
}

TEST_CASE("the long mincut sequence path runs with white-box checks") {
  auto ladder = gen_ladder(25);
  auto cuts = oracle::enum_star_cuts(ladder.g, ladder.s, ladder.t, 2, 60);
  REQUIRE(cuts.size() >= 20);
  for (const auto& sc : cuts) CHECK(sc.core == sc.z);  // every star cut is a mincut here

  AugmentStats stats;
  WhiteBox wb;
  wb.z = cuts[cuts.size() / 2].z;
  AugmentOptions opts;
  opts.stats = &stats;
  opts.whitebox = &wb;
  opts.mix_trivial = false;
  SplitRng rng(5150);
  for (int tr = 0; tr < 50; ++tr) {
    AugPair pair =
        augment_randomized(ladder.g, ladder.s, ladder.t, 2, 0, nullptr, rng.split(tr), opts);
    CHECK(pair_postcondition(ladder.g, ladder.s, ladder.t, 0, pair));
  }
  CHECK(stats.large_ell > 0);
  CHECK(stats.whitebox_on_track > 0);
  CHECK(stats.depth_cap_fallbacks == 0);
  CHECK(stats.max_depth <= recursion_depth_budget(2));
}

TEST_CASE("randomized runs are reproducible from the seed") {
  auto x = fix_x();
  AugPair a = augment_randomized(x.g, 0, 3, 2, 0, nullptr, SplitRng(404));
  AugPair b = augment_randomized(x.g, 0, 3, 2, 0, nullptr, SplitRng(404));
  CHECK(a.arcs == b.arcs);
  CHECK(a.flow.paths == b.flow.paths);
}
