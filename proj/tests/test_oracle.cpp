#include <algorithm>

#include "doctest.h"
#include "flowaug/harness.hpp"
#include "flowaug/oracle.hpp"

using namespace flowaug;

TEST_CASE("star-cut enumeration on the fixtures") {
  auto path = fix_path();
  auto cuts = oracle::enum_star_cuts(path.g, 0, 2, 1);
  REQUIRE(cuts.size() == 2);
  CHECK(cuts[0].z == Cut{0});
  CHECK(cuts[0].core == Cut{0});
  CHECK(cuts[1].z == Cut{1});

  auto star = fix_star();
  auto sc = oracle::enum_star_cuts(star.g, 0, 3, 2);
  bool has_zstar = false;
  for (const auto& c : sc)
    if (c.z == Cut{1, 2}) {
      has_zstar = true;
      CHECK(c.core == Cut{1});
    }
  CHECK(has_zstar);

  auto two = fix_two();
  CHECK(oracle::enum_star_cuts(two.g, 0, 3, 1).empty());

  Digraph big(30);
  for (int i = 0; i < 28; ++i) big.add_arc(i, i + 1, Cap::One);
  CHECK_THROWS_AS(oracle::enum_star_cuts(big, 0, 29, 2), oracle::GuardExceeded);
  CHECK_NOTHROW(oracle::enum_star_cuts(big, 0, 29, 1, 60));
}

TEST_CASE("brute solvers on the worked examples") {
  auto two = fix_two();
  auto ans = oracle::brute_wstcut(two.g, {5, 1, 1, 5}, 0, 3, 2, 100);
  CHECK(ans.yes);
  CHECK(ans.weight == 2);

  Digraph cyc(2);
  cyc.add_arc(0, 1, Cap::One);
  cyc.add_arc(1, 0, Cap::One);
  auto dfas = oracle::brute_dfas(cyc, {1, 1}, 1, 9);
  CHECK(dfas.yes);
  CHECK(dfas.cardinality == 1);

  auto gadget = gen_chain_crossing();
  auto bans = oracle::brute_bundled(gadget);
  CHECK(bans.yes);
  CHECK(bans.cardinality == 1);
  CHECK(bans.weight == 2);
}

TEST_CASE("compatibility tables") {
  auto star = fix_star();
  auto rows = oracle::compatibility_table(star.g, 0, 3, 2, 0, {});
  CHECK(rows.size() >= 3);
  for (const auto& r : rows) CHECK_FALSE(r.covered);

  auto two = fix_two();
  CHECK(oracle::compatibility_table(two.g, 0, 3, 1, 0, {}).empty());
}
