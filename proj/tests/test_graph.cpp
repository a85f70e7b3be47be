#include <algorithm>

#include "doctest.h"
#include "flowaug/flow.hpp"
#include "flowaug/graph.hpp"
#include "flowaug/harness.hpp"
#include "flowaug/oracle.hpp"
#include "flowaug/rng.hpp"

using namespace flowaug;

namespace {

std::vector<std::tuple<int, int, int>> arc_list(const Digraph& g) {
  std::vector<std::tuple<int, int, int>> out;
  for (ArcId id : g.alive_arcs())
    out.emplace_back(g.arc(id).tail, g.arc(id).head, static_cast<int>(g.arc(id).cap));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("add_arcs identity and infinity semantics") {
  auto path = fix_path();
  Digraph same = add_arcs(path.g, {});
  CHECK(arc_list(same) == arc_list(path.g));

  Digraph with_st = add_arcs(path.g, {{0, 2}});
  auto lam = oracle::lambda_bounded(with_st, 0, 2, 5);
  CHECK(lam.kind == oracle::LambdaResult::Kind::Infinite);

  auto star = fix_star();
  Digraph aug = add_arcs(star.g, {{2, 3}});  // (b, t)
  auto lam2 = oracle::lambda_bounded(aug, 0, 3, 5);
  CHECK(lam2.kind == oracle::LambdaResult::Kind::Value);
  // both s->t routes share the unit arc (s,a), so the maxflow oracle says 1
  CHECK(lam2.value == 1);

  CHECK(aug.num_arcs() == star.g.num_arcs() + 1);
  CHECK_THROWS_AS(add_arcs(path.g, {{0, 9}}), std::invalid_argument);
}

TEST_CASE("contract merges onto a terminal and keeps arc ids") {
  auto path = fix_path();
  auto [g1, vm1] = contract(path.g, {0}, 0, 2);
  CHECK(arc_list(g1) == arc_list(path.g));
  CHECK(vm1(0) == 0);

  auto two = fix_two();
  auto [g2, vm2] = contract(two.g, {0, 1}, 0, 3);  // {s, a} onto s
  CHECK(g2.num_arcs() == 3);
  auto arcs2 = arc_list(g2);
  CHECK(std::count(arcs2.begin(), arcs2.end(), std::make_tuple(0, 3, 1)) == 1);  // (s,t)
  CHECK(std::count(arcs2.begin(), arcs2.end(), std::make_tuple(0, 2, 1)) == 1);  // (s,b)
  CHECK(std::count(arcs2.begin(), arcs2.end(), std::make_tuple(2, 3, 1)) == 1);  // (b,t)

  auto star = fix_star();
  auto [g3, vm3] = contract(star.g, {3, 2}, 3, 0);  // {t, b} onto t
  auto arcs3 = arc_list(g3);
  CHECK(arcs3.size() == 3);
  CHECK(std::count(arcs3.begin(), arcs3.end(), std::make_tuple(1, 3, 1)) == 2);  // parallel (a,t)
  CHECK(std::count(arcs3.begin(), arcs3.end(), std::make_tuple(0, 1, 1)) == 1);

  CHECK_THROWS_AS(contract(two.g, {0, 3}, 0, 3), std::invalid_argument);  // opposite terminal
  CHECK_THROWS_AS(contract(two.g, {1}, 0, 3), std::invalid_argument);     // target not in X
}

TEST_CASE("contraction with disjoint sets commutes") {
  SplitRng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    auto ni = gen_random_digraph(6, 8, rng.next());
    auto a1 = contract(ni.g, {0, 1}, 0, 5).first;
    auto a2 = contract(a1, {5, 4}, 5, 0).first;
    auto b1 = contract(ni.g, {5, 4}, 5, 0).first;
    auto b2 = contract(b1, {0, 1}, 0, 5).first;
    CHECK(arc_list(a2) == arc_list(b2));
    CHECK(a2.vertices() == b2.vertices());
  }
}

TEST_CASE("instance text round trip and canonical fixture") {
  std::string text =
      "p faug 3 2\n"
      "s 0\n"
      "t 2\n"
      "a 0 1 1\n"
      "a 1 2 1\n";
  Instance inst = parse_instance(text);
  CHECK(inst.s == 0);
  CHECK(inst.t == 2);
  CHECK(arc_list(inst.g) == arc_list(fix_path().g));

  auto two = fix_two();
  Instance orig;
  orig.g = two.g;
  orig.s = two.s;
  orig.t = two.t;
  orig.has_k = true;
  orig.k = 2;
  orig.bundles.push_back({5, {0, 1}});
  Instance back = parse_instance(serialize_instance(orig));
  CHECK(same_structure(orig, back));
  Instance back2 = parse_instance(serialize_instance(back));
  CHECK(same_structure(back, back2));
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_AS(parse_instance("p faug 3 1\na 0 5 1\n"), ParseError);
  try {
    parse_instance("p faug 3 1\na 0 5 1\n");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(parse_instance("p faug 2 0\ns 0\ns 1\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("p faug 2 0\nx nonsense\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("p faug 2 3\na 0 1 1\n"), ParseError);  // count mismatch
}

TEST_CASE("an infinity arc behaves like k+1 parallel unit arcs") {
  SplitRng rng(123);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 3 + static_cast<int>(rng.next_below(3));
    int m = 3 + static_cast<int>(rng.next_below(6));
    auto ni = gen_random_digraph(n, m, rng.next());
    Digraph g = ni.g;
    auto arcs = g.alive_arcs();
    ArcId flip = arcs[rng.next_below(arcs.size())];
    g.set_capacity(flip, Cap::Inf);
    for (int k = 0; k <= 3; ++k) {
      Digraph rep = ni.g;
      for (int c = 0; c < k; ++c) rep.add_arc(rep.arc(flip).tail, rep.arc(flip).head, Cap::One);
      auto a = oracle::lambda_bounded(g, ni.s, ni.t, k);
      auto b = oracle::lambda_bounded(rep, ni.s, ni.t, k);
      bool a_over = a.kind != oracle::LambdaResult::Kind::Value;
      bool b_over = b.kind != oracle::LambdaResult::Kind::Value;
      CHECK(a_over == b_over);
      if (!a_over && !b_over) CHECK(a.value == b.value);
    }
  }
}
