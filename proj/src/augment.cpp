#include "flowaug/augment.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <string>

#include "flowaug/derandom.hpp"
#include "flowaug/patterns.hpp"

namespace flowaug {

namespace {

// Flow step: a real arc of the ambient base graph, or an augmentation arc
// identified by its endpoint pair.
struct Step {
  ArcId arc = -1;
  Vertex u = -1, v = -1;
  static Step of_arc(ArcId id) { return Step{id, -1, -1}; }
  static Step of_pair(Vertex u, Vertex v) { return Step{-1, u, v}; }
  bool is_arc() const { return arc >= 0; }
};

using StepPath = std::vector<Step>;

struct RawPair {
  std::vector<std::pair<Vertex, Vertex>> arcs;  // sorted unique
  std::vector<StepPath> paths;
};

void add_pair(RawPair& rp, Vertex u, Vertex v) {
  if (u == v) return;
  auto p = std::make_pair(u, v);
  auto it = std::lower_bound(rp.arcs.begin(), rp.arcs.end(), p);
  if (it == rp.arcs.end() || *it != p) rp.arcs.insert(it, p);
}

Vertex step_tail(const Digraph& g, const Step& st) {
  return st.is_arc() ? g.arc(st.arc).tail : st.u;
}
Vertex step_head(const Digraph& g, const Step& st) {
  return st.is_arc() ? g.arc(st.arc).head : st.v;
}

StepPath steps_of(const std::vector<ArcId>& path) {
  StepPath sp;
  sp.reserve(path.size());
  for (ArcId id : path) sp.push_back(Step::of_arc(id));
  return sp;
}

RawPair make_st_pair(Vertex s, Vertex t) {
  RawPair rp;
  add_pair(rp, s, t);
  rp.paths.push_back({Step::of_pair(s, t)});
  return rp;
}

RawPair make_plain(const Flow& f) {
  RawPair rp;
  for (const auto& p : f.paths) rp.paths.push_back(steps_of(p));
  return rp;
}

RawPair make_trivial(Vertex s, Vertex t, int kappa, int lambda, const Flow& p) {
  if (kappa <= lambda) return make_plain(p);
  return make_st_pair(s, t);
}

std::string pair_key(const RawPair& rp) {
  std::string key;
  auto put = [&](int x) {
    key.append(reinterpret_cast<const char*>(&x), sizeof(int));
  };
  put(static_cast<int>(rp.arcs.size()));
  for (auto [u, v] : rp.arcs) {
    put(u);
    put(v);
  }
  for (const auto& path : rp.paths) {
    put(-7);
    for (const Step& st : path) {
      put(st.arc);
      put(st.u);
      put(st.v);
    }
  }
  return key;
}

// After recursing on add_arcs(parent, extra): child arc ids past the parent
// bound are the added pairs; rewrite them as pair steps.
void convert_added(RawPair& rp, const Digraph& child_g, int parent_bound) {
  for (auto& path : rp.paths)
    for (auto& st : path)
      if (st.is_arc() && st.arc >= parent_bound) {
        const Arc& a = child_g.arc(st.arc);
        st = Step::of_pair(a.tail, a.head);
      }
}

RawPair lift_add(const Digraph& parent_g, const Digraph& child_g,
                 const std::vector<std::pair<Vertex, Vertex>>& extra, RawPair rp) {
  convert_added(rp, child_g, parent_g.arc_bound());
  for (auto [u, v] : extra) add_pair(rp, u, v);
  return rp;
}

// Repair path starts after an s-side contraction: a surviving first arc may
// have its real tail inside the contracted blob; splice the (s, tail)
// augmentation arc in front.
void fix_path_starts(const Digraph& parent_g, Vertex s, RawPair& rp) {
  for (auto& path : rp.paths) {
    check(!path.empty(), "lift: empty flow path");
    Vertex pt = step_tail(parent_g, path.front());
    if (pt != s) {
      add_pair(rp, s, pt);
      path.insert(path.begin(), Step::of_pair(s, pt));
    }
  }
}

void fix_path_ends(const Digraph& parent_g, Vertex t, RawPair& rp) {
  for (auto& path : rp.paths) {
    check(!path.empty(), "lift: empty flow path");
    Vertex ph = step_head(parent_g, path.back());
    if (ph != t) {
      add_pair(rp, ph, t);
      path.push_back(Step::of_pair(ph, t));
    }
  }
}

std::vector<Vertex> flag_vertices(const Digraph& g, const std::vector<char>& flag) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.vertex_bound(); ++v)
    if (g.has_vertex(v) && flag[v]) out.push_back(v);
  return out;
}

int cut_index_on_path(const std::vector<ArcId>& path, const Cut& c) {
  int found = -1;
  for (size_t j = 0; j < path.size(); ++j)
    if (std::binary_search(c.begin(), c.end(), path[j])) {
      check(found < 0, "cut meets a flow path twice");
      found = static_cast<int>(j);
    }
  check(found >= 0, "cut misses a flow path");
  return found;
}

Flow shorten_from(const Flow& f, const Cut& c) {
  Flow out;
  for (const auto& p : f.paths) {
    int j = cut_index_on_path(p, c);
    out.paths.emplace_back(p.begin() + j, p.end());
  }
  return out;
}

Flow shorten_to(const Flow& f, const Cut& c) {
  Flow out;
  for (const auto& p : f.paths) {
    int j = cut_index_on_path(p, c);
    out.paths.emplace_back(p.begin(), p.begin() + j + 1);
  }
  return out;
}

// Uniform guess point: deterministic mode enumerates, randomized samples.
struct Branching {
  bool det = false;
  SplitRng rng{0};
  std::uint64_t label_counter = 0;

  template <class F>
  void choose(int n, F&& f) {
    if (n <= 0) return;
    if (det) {
      for (int i = 0; i < n; ++i) f(i);
    } else {
      f(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n))));
    }
  }
  template <class F>
  void coin(F&& f) {
    if (det) {
      f(true);
      f(false);
    } else {
      f(rng.coin());
    }
  }
  Branching sub() {
    Branching b;
    b.det = det;
    b.rng = rng.split(++label_counter);
    return b;
  }
};

using Emit = std::function<void(RawPair&&)>;

struct Engine {
  int k0 = 0;
  int lbig = 0;
  int depth_budget = 0;
  int depth_cap = 0;
  AugmentStats* stats = nullptr;
  const WhiteBox* wb = nullptr;

  void bump(long long AugmentStats::* field) {
    if (stats) ++(stats->*field);
  }

  bool wb_on_track(const Digraph& g, Vertex s, Vertex t) const {
    if (!wb) return false;
    for (ArcId id : wb->z)
      if (!g.arc_alive(id) || g.arc(id).cap != Cap::One) return false;
    return is_star_cut(g, s, t, wb->z);
  }

  void run(const Digraph& g, Vertex s, Vertex t, int k, int kappa, Flow warm, Branching ch,
           int depth, const Emit& emit);
  void base_case(const Digraph& g, Vertex s, Vertex t, int k, int kappa, const Flow& p,
                 Branching& ch, int depth, const Emit& emit);
  void small_ell(const Digraph& g, Vertex s, Vertex t, int k, int kappa, const Flow& p,
                 PatternContext& pc, const Pattern& h, const std::vector<Cut>& cuts,
                 Branching& ch, int depth, const Emit& emit);
  void small_main(const Digraph& g, Vertex s, Vertex t, int k, int kappa, const Flow& p,
                  PatternContext& pc, const std::vector<Cut>& cuts, const std::vector<int>& vi,
                  const std::vector<int>& ui, const std::vector<std::vector<int>>& bpos,
                  Branching& ch, int depth, const Emit& emit);
  void large_ell(const Digraph& g, Vertex s, Vertex t, int k, int kappa, const Flow& p,
                 const Pattern& h, const std::vector<Cut>& cuts, Branching& ch, int depth,
                 const Emit& emit);
  void whitebox_large_checks(const Digraph& g, Vertex s, Vertex t, int k, const Flow& p,
                             const Pattern& h, const std::vector<Cut>& cuts);
};

void Engine::run(const Digraph& g, Vertex s, Vertex t, int k, int kappa, Flow warm,
                 Branching ch, int depth, const Emit& emit) {
  if (stats) {
    ++stats->calls;
    stats->max_depth = std::max(stats->max_depth, depth);
    if (wb_on_track(g, s, t)) ++stats->whitebox_on_track;
  }
  check(depth <= depth_budget, "augment: recursion exceeded its depth budget");
  if (depth > depth_cap) {
    bump(&AugmentStats::depth_cap_fallbacks);
    emit(make_st_pair(s, t));
    return;
  }
  MaxflowResult mf = max_flow(g, s, t, k);
  if (mf.kind != MaxflowResult::Kind::Value) {
    emit(make_st_pair(s, t));  // lambda > k or infinite: no candidate Z
    return;
  }
  int lam = mf.value;
  if (lam == 0) {
    if (kappa <= 0)
      emit(RawPair{});
    else
      emit(make_st_pair(s, t));
    return;
  }
  Flow p = (warm.value() == lam && flow_valid(g, s, t, warm)) ? std::move(warm)
                                                              : std::move(mf.flow);
  kappa = std::max(kappa, lam);

  Cut dplus, dminus;
  bool s_has_inf = false, t_has_inf = false;
  for (ArcId id : g.alive_arcs()) {
    const Arc& a = g.arc(id);
    if (a.tail == a.head) continue;
    if (a.tail == s) {
      dplus.push_back(id);
      s_has_inf |= a.cap == Cap::Inf;
    }
    if (a.head == t) {
      dminus.push_back(id);
      t_has_inf |= a.cap == Cap::Inf;
    }
  }

  // normalize the s-boundary
  Cut cl = mincut_closest(g, s, t, CutSide::S);
  if (s_has_inf || cl != dplus) {
    std::vector<Vertex> a_left;
    for (ArcId id : cl)
      if (g.arc(id).tail != s) a_left.push_back(g.arc(id).tail);
    std::sort(a_left.begin(), a_left.end());
    a_left.erase(std::unique(a_left.begin(), a_left.end()), a_left.end());
    ch.choose(static_cast<int>(a_left.size()) + 1, [&](int pick) {
      if (pick < static_cast<int>(a_left.size())) {
        // guess: this tail lies on the t-side of Z
        Vertex v = a_left[pick];
        std::vector<std::pair<Vertex, Vertex>> extra{{v, t}};
        Digraph g2 = add_arcs(g, extra);
        run(g2, s, t, k, kappa, p, ch.sub(), depth + 1, [&](RawPair&& rp) {
          emit(lift_add(g, g2, extra, std::move(rp)));
        });
      } else {
        // all tails on the s-side: contract the s-side of the closest cut
        auto sside = reach_avoiding(g, s, cl);
        auto contracted = contract(g, flag_vertices(g, sside), s, t);
        Flow p2 = shorten_from(p, cl);
        run(contracted.first, s, t, k, kappa, std::move(p2), ch.sub(), depth + 1,
            [&](RawPair&& rp) {
              for (Vertex v : a_left) add_pair(rp, s, v);
              fix_path_starts(g, s, rp);
              emit(std::move(rp));
            });
      }
    });
    return;
  }

  // normalize the t-boundary
  Cut cr = mincut_closest(g, s, t, CutSide::T);
  if (t_has_inf || cr != dminus) {
    std::vector<Vertex> a_right;
    for (ArcId id : cr)
      if (g.arc(id).head != t) a_right.push_back(g.arc(id).head);
    std::sort(a_right.begin(), a_right.end());
    a_right.erase(std::unique(a_right.begin(), a_right.end()), a_right.end());
    ch.choose(static_cast<int>(a_right.size()) + 1, [&](int pick) {
      if (pick < static_cast<int>(a_right.size())) {
        Vertex v = a_right[pick];
        std::vector<std::pair<Vertex, Vertex>> extra{{s, v}};
        Digraph g2 = add_arcs(g, extra);
        run(g2, s, t, k, kappa, p, ch.sub(), depth + 1, [&](RawPair&& rp) {
          emit(lift_add(g, g2, extra, std::move(rp)));
        });
      } else {
        auto sside = reach_avoiding(g, s, cr);
        std::vector<char> tside(g.vertex_bound(), 0);
        for (Vertex v = 0; v < g.vertex_bound(); ++v)
          tside[v] = (g.has_vertex(v) && !sside[v]) ? 1 : 0;
        auto contracted = contract(g, flag_vertices(g, tside), t, s);
        Flow p2 = shorten_to(p, cr);
        run(contracted.first, s, t, k, kappa, std::move(p2), ch.sub(), depth + 1,
            [&](RawPair&& rp) {
              for (Vertex v : a_right) add_pair(rp, v, t);
              fix_path_ends(g, t, rp);
              emit(std::move(rp));
            });
      }
    });
    return;
  }

  // a unit (s,t) arc sits in every st-cut
  ArcId st_arc = -1;
  for (ArcId id : dplus)
    if (g.arc(id).head == t && g.arc(id).cap == Cap::One && st_arc < 0) st_arc = id;
  if (st_arc >= 0) {
    int pi = -1;
    for (size_t i = 0; i < p.paths.size(); ++i)
      if (p.paths[i].size() == 1 && p.paths[i][0] == st_arc) pi = static_cast<int>(i);
    check(pi >= 0, "preprocess: (s,t) arc must be a flow path of its own");
    Digraph g2 = g;
    g2.remove_arc(st_arc);
    Flow p2;
    for (size_t i = 0; i < p.paths.size(); ++i)
      if (static_cast<int>(i) != pi) p2.paths.push_back(p.paths[i]);
    run(g2, s, t, k - 1, kappa - 1, std::move(p2), ch.sub(), depth + 1, [&](RawPair&& rp) {
      rp.paths.push_back({Step::of_arc(st_arc)});
      emit(std::move(rp));
    });
    return;
  }

  check(has_proper_boundaries(g, s, t), "preprocess: boundaries must be proper here");
  PatternContext pc(g, s, t, p);
  Pattern h = pc.pattern();
  std::vector<Cut> cuts = pc.h_sequence(h);
  if (pattern_edge_count(h) == lam) {
    base_case(g, s, t, k, kappa, p, ch, depth, emit);
  } else if (static_cast<int>(cuts.size()) <= lbig) {
    small_ell(g, s, t, k, kappa, p, pc, h, cuts, ch, depth, emit);
  } else {
    large_ell(g, s, t, k, kappa, p, h, cuts, ch, depth, emit);
  }
}

void Engine::base_case(const Digraph& g, Vertex s, Vertex t, int k, int kappa, const Flow& p,
                       Branching& ch, int depth, const Emit& emit) {
  bump(&AugmentStats::base_case);
  int lam = p.value();
  BottleneckResult bn = bottleneck_arcs(g, s, t);
  check(!bn.lambda_infinite, "base_case: lambda must be finite");
  std::vector<ArcId> bn_sorted = bn.arcs;
  std::sort(bn_sorted.begin(), bn_sorted.end());
  std::vector<std::vector<ArcId>> bn_on(lam);
  for (int i = 0; i < lam; ++i)
    for (ArcId id : p.paths[i])
      if (std::binary_search(bn_sorted.begin(), bn_sorted.end(), id)) bn_on[i].push_back(id);

  auto emit_shortcut = [&]() {
    // core(Z) is already a mincut: bypass everything between bottlenecks
    RawPair rp;
    for (int i = 0; i < lam; ++i) {
      check(!bn_on[i].empty(), "base_case: every path carries a bottleneck arc");
      StepPath path;
      Vertex cur = s;
      for (ArcId e : bn_on[i]) {
        Vertex te = g.arc(e).tail;
        if (te != cur) {
          add_pair(rp, cur, te);
          path.push_back(Step::of_pair(cur, te));
        }
        path.push_back(Step::of_arc(e));
        cur = g.arc(e).head;
      }
      if (cur != t) {
        add_pair(rp, cur, t);
        path.push_back(Step::of_pair(cur, t));
      }
      rp.paths.push_back(std::move(path));
    }
    Digraph ga = add_arcs(g, rp.arcs);
    MaxflowResult chk = max_flow(ga, s, t, lam);
    check(chk.kind == MaxflowResult::Kind::Value && chk.value == lam,
          "base_case: shortcut output must keep lambda");
    emit(std::move(rp));
  };

  auto dup_branch = [&](int i) {
    // guess: Z on P_i avoids every bottleneck arc; duplicate them
    std::vector<std::pair<Vertex, Vertex>> extra;
    for (ArcId e : bn_on[i]) extra.emplace_back(g.arc(e).tail, g.arc(e).head);
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
    Digraph g2 = add_arcs(g, extra);
    run(g2, s, t, k, kappa, p, ch.sub(), depth + 1, [&](RawPair&& rp) {
      emit(lift_add(g, g2, extra, std::move(rp)));
    });
  };

  if (kappa == lam) {
    ch.coin([&](bool core_is_mincut) {
      if (core_is_mincut)
        emit_shortcut();
      else
        ch.choose(lam, dup_branch);
    });
  } else {
    ch.choose(lam, dup_branch);
  }
}

void Engine::small_ell(const Digraph& g, Vertex s, Vertex t, int k, int kappa, const Flow& p,
                       PatternContext& pc, const Pattern& h, const std::vector<Cut>& cuts,
                       Branching& ch, int depth, const Emit& emit) {
  (void)h;
  bump(&AugmentStats::small_ell);
  int lam = p.value();
  std::vector<char> in_b(g.vertex_bound(), 0);
  for (const Cut& c : cuts)
    for (ArcId id : c) {
      in_b[g.arc(id).tail] = 1;
      in_b[g.arc(id).head] = 1;
    }
  std::vector<std::vector<int>> bpos(lam);
  for (int i = 0; i < lam; ++i) {
    const auto& pv = pc.path_verts(i);
    for (size_t j = 0; j < pv.size(); ++j)
      if (in_b[pv[j]]) bpos[i].push_back(static_cast<int>(j));
    check(!bpos[i].empty() && bpos[i][0] == 0, "small_ell: s must be a B-vertex");
  }

  // handler for corner case 1: every cut endpoint sits on the s-side of Z
  auto corner1 = [&]() {
    bump(&AugmentStats::corner1);
    auto sside = reach_avoiding(g, s, cuts.back());
    auto contracted = contract(g, flag_vertices(g, sside), s, t);
    Flow p2 = shorten_from(p, cuts.back());
    run(contracted.first, s, t, k, kappa, std::move(p2), ch.sub(), depth + 1,
        [&](RawPair&& rp) {
          for (Vertex v = 0; v < g.vertex_bound(); ++v)
            if (in_b[v]) add_pair(rp, s, v);
          fix_path_starts(g, s, rp);
          emit(std::move(rp));
        });
  };
  // handler for corner case 2: a t-side B-vertex precedes an s-side one;
  // only the offending path's pair matters
  auto corner2 = [&](int j, int vj, int uj) {
    bump(&AugmentStats::corner2);
    Vertex vv = pc.path_verts(j)[bpos[j][vj]];
    Vertex uu = pc.path_verts(j)[bpos[j][uj]];
    std::vector<std::pair<Vertex, Vertex>> extra;
    if (s != vv) extra.emplace_back(s, vv);
    if (uu != t && std::make_pair(uu, t) != std::make_pair(s, vv)) extra.emplace_back(uu, t);
    std::sort(extra.begin(), extra.end());
    Digraph g2 = add_arcs(g, extra);
    run(g2, s, t, k, kappa, p, ch.sub(), depth + 1, [&](RawPair&& rp) {
      emit(lift_add(g, g2, extra, std::move(rp)));
    });
  };

  std::vector<int> vi(lam), ui(lam);
  if (ch.det) {
    // Branch enumeration collapsed by action: corner case 1 acts the same
    // for every all-none guess, corner case 2 only reads the first offending
    // path, and the main case only ever sees guesses whose deduced split is
    // consistent (u_i the B-successor of v_i, or v_i the last B-vertex).
    corner1();
    for (int j = 0; j < lam; ++j) {
      int n = static_cast<int>(bpos[j].size());
      for (int vj = 0; vj < n; ++vj)
        for (int uj = 0; uj < vj; ++uj) corner2(j, vj, uj);
    }
    std::function<void(int)> assign = [&](int i) {
      if (i < lam) {
        int n = static_cast<int>(bpos[i].size());
        for (int v = 0; v < n; ++v) {
          vi[i] = v;
          ui[i] = v == n - 1 ? v : v + 1;  // successor, or none when last
          assign(i + 1);
        }
        // a non-last v with no t-side vertex afterwards cannot arise, but a
        // last v paired with u = none is already covered above; additionally
        // enumerate u = none for non-last v? inconsistent: skip
        return;
      }
      bool all_bot = true;
      for (int j = 0; j < lam; ++j)
        if (ui[j] != vi[j]) all_bot = false;
      if (all_bot) return;  // corner case 1 already handled
      small_main(g, s, t, k, kappa, p, pc, cuts, vi, ui, bpos, ch, depth, emit);
    };
    assign(0);
    return;
  }
  // randomized: sample the full grid as in the analysis
  std::function<void(int)> assign = [&](int i) {
    if (i < lam) {
      int n = static_cast<int>(bpos[i].size());
      ch.choose(n * n, [&](int pick) {
        vi[i] = pick / n;
        ui[i] = pick % n;
        assign(i + 1);
      });
      return;
    }
    bool all_bot = true;
    for (int j = 0; j < lam; ++j)
      if (ui[j] != vi[j]) all_bot = false;
    if (all_bot) {
      corner1();
      return;
    }
    for (int j = 0; j < lam; ++j) {
      if (ui[j] == vi[j] || ui[j] > vi[j]) continue;
      corner2(j, vi[j], ui[j]);
      return;
    }
    // deduced split must leave no B-vertex unassigned between v_i and u_i
    for (int j = 0; j < lam; ++j) {
      bool bot = ui[j] == vi[j];
      if ((bot && vi[j] != static_cast<int>(bpos[j].size()) - 1) ||
          (!bot && ui[j] != vi[j] + 1)) {
        emit(make_trivial(s, t, kappa, lam, p));
        return;
      }
    }
    small_main(g, s, t, k, kappa, p, pc, cuts, vi, ui, bpos, ch, depth, emit);
  };
  assign(0);
}

void Engine::small_main(const Digraph& g, Vertex s, Vertex t, int k, int kappa, const Flow& p,
                        PatternContext& pc, const std::vector<Cut>& cuts,
                        const std::vector<int>& vi, const std::vector<int>& ui,
                        const std::vector<std::vector<int>>& bpos, Branching& ch, int depth,
                        const Emit& emit) {
  int lam = p.value();
  int ell = static_cast<int>(cuts.size());
  std::vector<char> b_left(g.vertex_bound(), 0), b_right(g.vertex_bound(), 0);
  for (int i = 0; i < lam; ++i) {
    const auto& pv = pc.path_verts(i);
    bool bot = ui[i] == vi[i];
    for (size_t j = 0; j < bpos[i].size(); ++j) {
      Vertex v = pv[bpos[i][j]];
      if (static_cast<int>(j) <= vi[i])
        b_left[v] = 1;
      else if (!bot)
        b_right[v] = 1;
    }
  }
  std::vector<std::pair<Vertex, Vertex>> a0;
  for (Vertex v = 0; v < g.vertex_bound(); ++v) {
    if (b_left[v] && v != s) a0.emplace_back(s, v);
    if (b_right[v] && v != t) a0.emplace_back(v, t);
  }
  std::sort(a0.begin(), a0.end());
  a0.erase(std::unique(a0.begin(), a0.end()), a0.end());
  Digraph gp = add_arcs(g, a0);
  auto a0_id = [&](Vertex u, Vertex v) {
    auto it = std::lower_bound(a0.begin(), a0.end(), std::make_pair(u, v));
    check(it != a0.end() && *it == std::make_pair(u, v), "A0 arc lookup failed");
    return g.arc_bound() + static_cast<int>(it - a0.begin());
  };
  Flow pprime;
  for (int i = 0; i < lam; ++i) {
    const auto& pv = pc.path_verts(i);
    bool bot = ui[i] == vi[i];
    int vpos = bpos[i][vi[i]];
    int upos = bot ? static_cast<int>(pv.size()) - 1 : bpos[i][ui[i]];
    std::vector<ArcId> path;
    if (pv[vpos] != s) path.push_back(a0_id(s, pv[vpos]));
    for (int j = vpos; j < upos; ++j) path.push_back(p.paths[i][j]);
    if (pv[upos] != t) path.push_back(a0_id(pv[upos], t));
    pprime.paths.push_back(std::move(path));
  }
  check(flow_valid(gp, s, t, pprime), "small_ell: rerouted flow invalid");

  // Corner case 3: A0 already raised lambda
  MaxflowResult mfp = max_flow(gp, s, t, lam);
  if (mfp.kind != MaxflowResult::Kind::Value || mfp.value > lam) {
    bump(&AugmentStats::corner3);
    run(gp, s, t, k, kappa, pprime, ch.sub(), depth + 1, [&](RawPair&& rp) {
      emit(lift_add(g, gp, a0, std::move(rp)));
    });
    return;
  }
  // Corner case 4: a rerouted path with one unit arc pins a core arc
  for (int i = 0; i < lam; ++i) {
    ArcId unit = -1;
    int units = 0;
    for (ArcId id : pprime.paths[i])
      if (gp.arc(id).cap == Cap::One) {
        ++units;
        unit = id;
      }
    if (units != 1) continue;
    bump(&AugmentStats::corner4);
    check(unit < g.arc_bound(), "corner4: pinned arc must be original");
    Digraph g2 = gp;
    g2.remove_arc(unit);
    Flow p2;
    for (int j = 0; j < lam; ++j)
      if (j != i) p2.paths.push_back(pprime.paths[j]);
    StepPath witness;
    for (ArcId id : pprime.paths[i])
      witness.push_back(id < g.arc_bound() ? Step::of_arc(id)
                                           : Step::of_pair(gp.arc(id).tail, gp.arc(id).head));
    run(g2, s, t, k - 1, kappa - 1, std::move(p2), ch.sub(), depth + 1, [&](RawPair&& rp) {
      rp = lift_add(g, g2, a0, std::move(rp));
      rp.paths.push_back(witness);
      emit(std::move(rp));
    });
    return;
  }

  bump(&AugmentStats::main_case);
  int a = 0;
  for (int c = 1; c <= ell; ++c) {
    bool all_left = true;
    for (ArcId id : cuts[c - 1])
      if (!b_left[g.arc(id).tail] || !b_left[g.arc(id).head]) all_left = false;
    if (all_left) a = c;
  }
  check(a >= 1, "main case: C_1 endpoints must be on the s-side");
  check(a < ell, "main case: C_ell cannot be fully on the s-side");
  Cut c_last = mincut_closest(gp, s, t, CutSide::T);
  for (ArcId id : c_last) check(id < g.arc_bound(), "closest cut must avoid A0 arcs");
  std::vector<Vertex> heads;
  for (ArcId id : c_last)
    if (g.arc(id).head != t) heads.push_back(g.arc(id).head);
  std::sort(heads.begin(), heads.end());
  heads.erase(std::unique(heads.begin(), heads.end()), heads.end());
  int nh = static_cast<int>(heads.size());
  int nc = static_cast<int>(c_last.size());
  ch.choose(1 + nh + nc, [&](int pick) {
    if (pick == 0) {
      // all of V(C) on the t-side of Z: squeeze between C_a and C
      auto sside_a = reach_avoiding(g, s, cuts[a - 1]);
      auto c1 = contract(g, flag_vertices(g, sside_a), s, t);
      auto sside_c = reach_avoiding(c1.first, s, c_last);
      std::vector<char> tside(c1.first.vertex_bound(), 0);
      for (Vertex v = 0; v < c1.first.vertex_bound(); ++v)
        tside[v] = (c1.first.has_vertex(v) && !sside_c[v]) ? 1 : 0;
      auto c2 = contract(c1.first, flag_vertices(c1.first, tside), t, s);
      check(c2.first.num_vertices() < g.num_vertices(),
            "main case: contraction must make progress");
      Flow p2 = shorten_to(shorten_from(p, cuts[a - 1]), c_last);
      run(c2.first, s, t, k, kappa, std::move(p2), ch.sub(), depth + 1, [&](RawPair&& rp) {
        for (auto [u, v] : a0) add_pair(rp, u, v);
        for (ArcId id : c_last) {
          add_pair(rp, g.arc(id).tail, t);
          if (g.arc(id).head != t) add_pair(rp, g.arc(id).head, t);
        }
        fix_path_starts(g, s, rp);
        fix_path_ends(g, t, rp);
        emit(std::move(rp));
      });
    } else if (pick <= nh) {
      // guess: this head of C lies on the s-side of Z
      Vertex v = heads[pick - 1];
      std::vector<std::pair<Vertex, Vertex>> extra = a0;
      auto pr = std::make_pair(s, v);
      auto it = std::lower_bound(extra.begin(), extra.end(), pr);
      if (it == extra.end() || *it != pr) extra.insert(it, pr);
      Digraph g2 = add_arcs(g, extra);
      run(g2, s, t, k, kappa, p, ch.sub(), depth + 1, [&](RawPair&& rp) {
        emit(lift_add(g, g2, extra, std::move(rp)));
      });
    } else {
      // guess: this arc of C belongs to Z
      ArcId e = c_last[pick - 1 - nh];
      Vertex v = g.arc(e).tail, u = g.arc(e).head;
      int pi = -1;
      for (int i = 0; i < lam; ++i)
        for (ArcId id : p.paths[i])
          if (id == e) pi = i;
      check(pi >= 0, "main case: Z-arc guess must sit on a flow path");
      Digraph g2 = g;
      g2.remove_arc(e);
      Flow p2;
      for (int i = 0; i < lam; ++i)
        if (i != pi) p2.paths.push_back(p.paths[i]);
      run(g2, s, t, k - 1, kappa - 1, std::move(p2), ch.sub(), depth + 1, [&](RawPair&& rp) {
        StepPath witness;
        if (v != s) {
          add_pair(rp, s, v);
          witness.push_back(Step::of_pair(s, v));
        }
        witness.push_back(Step::of_arc(e));
        if (u != t) {
          add_pair(rp, u, t);
          witness.push_back(Step::of_pair(u, t));
        }
        rp.paths.push_back(std::move(witness));
        emit(std::move(rp));
      });
    }
  });
}

void Engine::whitebox_large_checks(const Digraph& g, Vertex s, Vertex t, int k, const Flow& p,
                                   const Pattern& h, const std::vector<Cut>& cuts) {
  if (!wb_on_track(g, s, t)) return;
  const Cut& z = wb->z;
  int lam = p.value();
  int ell = static_cast<int>(cuts.size());
  auto sside_z = reach_avoiding(g, s, z);
  std::vector<ArcId> zts;
  for (const auto& path : p.paths)
    for (ArcId id : path)
      if (!sside_z[g.arc(id).tail] && sside_z[g.arc(id).head]) zts.push_back(id);
  std::vector<ArcId> zu = z;
  zu.insert(zu.end(), zts.begin(), zts.end());
  std::sort(zu.begin(), zu.end());
  zu.erase(std::unique(zu.begin(), zu.end()), zu.end());
  std::vector<std::vector<char>> ssides(ell);
  for (int a = 1; a <= ell; ++a) ssides[a - 1] = reach_avoiding(g, s, cuts[a - 1]);
  auto tside_of = [&](int a, Vertex v) {
    if (a <= 0) return true;
    if (a > ell) return false;
    return ssides[a - 1][v] == 0;
  };
  auto sside_of = [&](int a, Vertex v) {
    if (a <= 0) return false;
    if (a > ell) return true;
    return ssides[a - 1][v] != 0;
  };
  int touched = 0;
  for (int a = 0; a <= ell; ++a) {
    bool is_touched = false;
    for (ArcId id : zu)
      for (Vertex w : {g.arc(id).tail, g.arc(id).head})
        if (tside_of(a, w) && sside_of(a + 1, w)) is_touched = true;
    touched += is_touched ? 1 : 0;
  }
  check(touched <= 2 * static_cast<int>(zu.size()), "claim: touched-index bound violated");
  if (static_cast<int>(z.size()) <= k)
    check(touched <= std::max(0, 4 * k - 2 * lam), "claim: touched exceeds 4k-2lambda");
  auto closure = [&](unsigned mask) {
    unsigned out = mask;
    for (int i = 0; i < lam; ++i)
      if (mask & (1u << i))
        for (int j = 0; j < lam; ++j)
          if (h[i][j]) out |= 1u << j;
    return out;
  };
  std::vector<unsigned> lsets(ell);
  for (int a = 1; a <= ell; ++a) {
    unsigned m = 0;
    for (int i = 0; i < lam; ++i) {
      ArcId e = p.paths[i][cut_index_on_path(p.paths[i], cuts[a - 1])];
      if (sside_z[g.arc(e).tail] && sside_z[g.arc(e).head]) m |= 1u << i;
    }
    lsets[a - 1] = m;
  }
  for (int a = 1; a <= ell; ++a) {
    unsigned cl = closure(lsets[a - 1]);
    for (int b = a; b <= ell; ++b)
      check((lsets[b - 1] & ~cl) == 0, "claim: closure chain violated");
  }
}

// All state of one long-sequence invocation; stages are methods so the
// deterministic enumeration nests naturally.
struct LargeCase {
  Engine* eng;
  const Digraph& g;
  Vertex s, t;
  int k, kappa;
  const Flow& p;
  const Pattern& h;
  const std::vector<Cut>& cuts;
  int depth;
  const Emit& emit;

  int lam, ell, max_touched, span_cap;
  std::vector<std::vector<int>> cutpos;  // [a-1][i] arc index of C_a on P_i

  // per-gamma state
  std::vector<std::pair<int, int>> blocks;
  std::vector<int> milestones;
  int xi = 0;
  // chain state
  int eta = 0;
  std::vector<unsigned> lset;
  std::vector<int> jset;
  // labels / budgets / children / lambda guesses
  std::vector<unsigned> lab;
  std::vector<int> iota_of;
  std::vector<char> good;
  std::vector<int> kz, qz, lz;

  struct Child {
    Digraph g0;
    Flow flow;
    int bl = 0, br = 0;
    unsigned dmask = 0;
    int iota = 0, alpha = 0;
    std::vector<RawPair> members;
    std::vector<int> lambda_of;
  };
  std::vector<Child> kids;

  LargeCase(Engine* e, const Digraph& g_, Vertex s_, Vertex t_, int k_, int kappa_,
            const Flow& p_, const Pattern& h_, const std::vector<Cut>& cuts_, int depth_,
            const Emit& emit_)
      : eng(e), g(g_), s(s_), t(t_), k(k_), kappa(kappa_), p(p_), h(h_), cuts(cuts_),
        depth(depth_), emit(emit_) {
    lam = p.value();
    ell = static_cast<int>(cuts.size());
    max_touched = std::max(1, 4 * k - 2 * lam);
    span_cap = std::max(0, (4 * k - 2 * lam - 1) * lam);
    cutpos.assign(ell, std::vector<int>(lam));
    for (int a = 1; a <= ell; ++a)
      for (int i = 0; i < lam; ++i) cutpos[a - 1][i] = cut_index_on_path(p.paths[i], cuts[a - 1]);
  }

  ArcId cut_arc_on(int a, int i) const { return p.paths[i][cutpos[a - 1][i]]; }

  Vertex node(int a, int i) const {
    if (a <= 0) return s;
    if (a > ell) return t;
    return g.arc(cut_arc_on(a, i)).tail;
  }

  void escape(Branching& ch) {
    if (!ch.det) emit(make_trivial(s, t, kappa, lam, p));
  }

  void top(Branching& ch) {
    if (ch.det) {
      auto fam = separation_sets(ell + 1, std::min(max_touched, ell + 1),
                                 std::min(12 * k * lam, ell + 1));
      for (const auto& mask : fam) {
        std::vector<int> gamma;
        for (int a = 0; a <= ell; ++a)
          if (mask[a]) gamma.push_back(a);
        Branching chg = ch.sub();
        stage_gamma(gamma, chg);
      }
    } else {
      std::vector<int> gamma;
      for (int a = 0; a <= ell; ++a)
        if (ch.rng.chance(1, static_cast<std::uint64_t>(std::max(2, k)))) gamma.push_back(a);
      stage_gamma(gamma, ch);
    }
  }

  void stage_gamma(const std::vector<int>& gamma, Branching& ch) {
    blocks.clear();
    for (size_t i = 0; i < gamma.size();) {
      size_t j = i;
      while (j + 1 < gamma.size() && gamma[j + 1] - gamma[j] <= lam) ++j;
      int zeta = static_cast<int>(j - i + 1);
      int span = gamma[j] - gamma[i];
      if (zeta <= max_touched && span <= span_cap) blocks.emplace_back(gamma[i], gamma[j]);
      i = j + 1;
    }
    xi = static_cast<int>(blocks.size());
    std::vector<char> in_gamma(ell + 2, 0);
    for (int a : gamma) in_gamma[a] = 1;
    milestones.clear();
    for (int a = 1; a <= ell; ++a) {
      bool ok = true;
      for (int c = std::max(0, a - lam + 1); c <= a; ++c)
        if (in_gamma[c]) ok = false;
      if (ok) milestones.push_back(a);
    }
    ch.choose(max_touched, [&](int eta_pick) {
      eta = eta_pick + 1;
      stage_chain(ch);
    });
  }

  void stage_chain(Branching& ch) {
    std::vector<int> drop(lam, 0);
    std::function<void(int)> assign = [&](int i) {
      if (i < lam) {
        ch.choose(eta, [&](int v) {
          drop[i] = v;
          assign(i + 1);
        });
        return;
      }
      // downward-closed: arcs of H may not leave any chain set
      for (int x = 0; x < lam; ++x)
        for (int y = 0; y < lam; ++y)
          if (h[x][y] && drop[y] < drop[x]) {
            escape(ch);
            return;
          }
      lset.assign(eta + 1, 0);
      for (int io = 0; io <= eta; ++io)
        for (int i2 = 0; i2 < lam; ++i2)
          if (drop[i2] >= io) lset[io] |= 1u << i2;
      jset.clear();
      for (int io = 1; io <= eta; ++io)
        if (lset[io - 1] != lset[io]) jset.push_back(io);
      check(!jset.empty(), "large_ell: the chain must drop somewhere");
      stage_labels(ch);
    };
    assign(0);
  }

  void stage_labels(Branching& ch) {
    lab.assign(xi + 1, 0);
    lab[0] = (1u << lam) - 1;
    lab[xi] = 0;
    if (xi <= 1) {
      stage_goodness(ch);
      return;
    }
    if (ch.det) {
      std::vector<unsigned> values;
      for (int io = 0; io <= eta; ++io)
        if (std::find(values.begin(), values.end(), lset[io]) == values.end())
          values.push_back(lset[io]);
      int klab = std::min(2 * eta, xi - 1);
      auto fam = splitter_functions(xi - 1, static_cast<int>(values.size()), klab);
      for (const auto& f : fam) {
        for (int al = 1; al < xi; ++al) lab[al] = values[f[al - 1]];
        lab[0] = (1u << lam) - 1;
        lab[xi] = 0;
        stage_goodness(ch);
      }
    } else {
      for (int al = 1; al < xi; ++al)
        lab[al] = lset[ch.rng.next_below(static_cast<std::uint64_t>(eta + 1))];
      stage_goodness(ch);
    }
  }

  void stage_goodness(Branching& ch) {
    iota_of.assign(xi + 1, 0);
    good.assign(xi + 1, 0);
    for (int al = 1; al <= xi; ++al)
      for (int io = 1; io <= eta; ++io)
        if (lset[io - 1] == lab[al - 1] && lset[io] == lab[al]) {
          good[al] = 1;
          if (lab[al - 1] != lab[al]) iota_of[al] = io;
          break;
        }
    kz.assign(eta + 1, 0);
    qz.assign(eta + 1, 0);
    std::function<void(size_t)> budgets = [&](size_t ji) {
      if (ji < jset.size()) {
        int opts = (k + 1) * (k + 2) / 2;
        ch.choose(opts, [&](int pick) {
          int kzv = 0, rest = pick;
          while (rest > kzv) {
            rest -= kzv + 1;
            ++kzv;
          }
          qz[jset[ji]] = rest;
          kz[jset[ji]] = kzv;
          budgets(ji + 1);
        });
        return;
      }
      long long ksum = 0;
      bool ok = true;
      for (int io : jset) {
        int dsz = __builtin_popcount(lset[io - 1] & ~lset[io]);
        if (qz[io] < dsz || qz[io] > kz[io]) ok = false;
        ksum += kz[io];
      }
      if (!ok || ksum > k) {
        escape(ch);
        return;
      }
      if (jset.size() >= 2) {
        long long lhs = 0;
        for (int io : jset)
          lhs += 2LL * kz[io] - __builtin_popcount(lset[io - 1] & ~lset[io]);
        check(lhs <= 2LL * k - lam, "large_ell: branch budget identity violated");
      }
      stage_children(ch);
    };
    budgets(0);
  }

  Child build_child(int alpha) {
    Child cd;
    cd.alpha = alpha;
    cd.iota = iota_of[alpha];
    cd.bl = blocks[alpha - 1].first;
    cd.br = blocks[alpha - 1].second;
    cd.dmask = lab[alpha - 1] & ~lab[alpha];
    int la = cd.bl - 1, ra = cd.br + lam;
    std::vector<char> sside_la, sside_ra;
    if (la >= 1) sside_la = reach_avoiding(g, s, cuts[la - 1]);
    if (ra <= ell) sside_ra = reach_avoiding(g, s, cuts[ra - 1]);
    auto in_strip = [&](Vertex v) {
      if (v == s || v == t) return false;
      if (la >= 1 && sside_la[v]) return false;
      if (ra <= ell && !sside_ra[v]) return false;
      return true;
    };
    Digraph g0 = g;
    for (Vertex v = 0; v < g.vertex_bound(); ++v)
      if (g.has_vertex(v) && v != s && v != t && !in_strip(v)) g0.remove_vertex(v);
    std::vector<char> keep(g.arc_bound(), 0);
    for (int i = 0; i < lam; ++i) {
      if (!(cd.dmask & (1u << i))) continue;
      if (la < 1) keep[p.paths[i].front()] = 1;
      if (ra > ell) keep[p.paths[i].back()] = 1;
    }
    for (ArcId id = 0; id < g0.arc_bound(); ++id) {
      if (!g0.arc_alive(id) || keep[id]) continue;
      const Arc& a2 = g0.arc(id);
      if (a2.tail == s || a2.head == s || a2.tail == t || a2.head == t) g0.remove_arc(id);
    }
    std::vector<ArcId> syn_in(lam, -1), syn_out(lam, -1);
    for (int i = 0; i < lam; ++i) {
      if (!(cd.dmask & (1u << i))) continue;
      if (la >= 1) syn_in[i] = g0.add_arc(s, g.arc(cut_arc_on(la, i)).head, Cap::One);
      if (ra <= ell) syn_out[i] = g0.add_arc(g.arc(cut_arc_on(ra, i)).tail, t, Cap::One);
    }
    for (int i = 0; i < lam; ++i) {
      if (!(cd.dmask & (1u << i))) continue;
      std::vector<ArcId> path;
      int from = la >= 1 ? cutpos[la - 1][i] + 1 : 0;
      int to = ra <= ell ? cutpos[ra - 1][i] - 1 : static_cast<int>(p.paths[i].size()) - 1;
      if (syn_in[i] >= 0) path.push_back(syn_in[i]);
      for (int j = from; j <= to; ++j) path.push_back(p.paths[i][j]);
      if (syn_out[i] >= 0) path.push_back(syn_out[i]);
      cd.flow.paths.push_back(std::move(path));
    }
    // keep only vertices on some s->t path
    auto rs = reach_avoiding(g0, s, {});
    std::vector<char> rt(g0.vertex_bound(), 0);
    {
      auto iadj = g0.in_adjacency();
      std::vector<Vertex> stack{t};
      rt[t] = 1;
      while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (auto [tail, id] : iadj[u])
          if (!rt[tail]) {
            rt[tail] = 1;
            stack.push_back(tail);
          }
      }
    }
    for (Vertex v = 0; v < g0.vertex_bound(); ++v)
      if (g0.has_vertex(v) && v != s && v != t && (!rs[v] || !rt[v])) g0.remove_vertex(v);
    check(flow_valid(g0, s, t, cd.flow), "large_ell: strip flow invalid");
    cd.g0 = std::move(g0);
    return cd;
  }

  void stage_children(Branching& ch) {
    kids.clear();
    for (int al = 1; al <= xi; ++al) {
      if (!good[al] || iota_of[al] == 0) continue;
      Child cd = build_child(al);
      int io = cd.iota;
      if (ch.det) {
        std::set<std::string> seen;
        Branching sub = ch.sub();
        eng->run(cd.g0, s, t, kz[io], qz[io], cd.flow, sub, depth + 1, [&](RawPair&& rp) {
          std::string key = pair_key(rp);
          if (seen.insert(key).second) cd.members.push_back(std::move(rp));
        });
      } else {
        Branching sub = ch.sub();
        eng->run(cd.g0, s, t, kz[io], qz[io], cd.flow, sub, depth + 1,
                 [&](RawPair&& rp) { cd.members.push_back(std::move(rp)); });
      }
      for (const auto& m : cd.members) {
        Digraph host = add_arcs(cd.g0, m.arcs);
        MaxflowResult hm = max_flow(host, s, t, eng->k0 + 1);
        cd.lambda_of.push_back(hm.kind == MaxflowResult::Kind::Value ? hm.value : -1);
      }
      kids.push_back(std::move(cd));
    }
    lz.assign(eta + 1, 0);
    std::function<void(size_t)> lguess = [&](size_t ji) {
      if (ji < jset.size()) {
        int io = jset[ji];
        ch.choose(kz[io] - qz[io] + 1, [&](int pick) {
          lz[io] = qz[io] + pick;
          lguess(ji + 1);
        });
        return;
      }
      long long fval = 0;
      for (int io : jset) fval += lz[io];
      if (fval < kappa || fval > k) {
        escape(ch);
        return;
      }
      stage_tuples(ch, static_cast<int>(fval));
    };
    lguess(0);
  }

  void stage_tuples(Branching& ch, int fval) {
    std::vector<int> nsel(eta + 1, 1);
    if (ch.det)
      for (const Child& cd : kids)
        nsel[cd.iota] = std::max(nsel[cd.iota], static_cast<int>(cd.members.size()));
    std::vector<int> tuple(eta + 1, 0);
    std::function<void(size_t)> rec = [&](size_t ji) {
      if (ch.det && ji < jset.size()) {
        for (int ix = 0; ix < nsel[jset[ji]]; ++ix) {
          tuple[jset[ji]] = ix;
          rec(ji + 1);
        }
        return;
      }
      assemble(ch, tuple, fval);
    };
    rec(ch.det ? 0 : jset.size());
  }

  void assemble(Branching& ch, const std::vector<int>& tuple, int fval) {
    RawPair out;
    struct RouteArc {
      Vertex u, v;
      Cap cap;
      Step origin;
    };
    std::vector<RouteArc> route;
    std::set<ArcId> route_real;
    std::set<std::pair<Vertex, Vertex>> route_pairs;
    auto route_add_pair = [&](Vertex u, Vertex v) {
      if (u == v) return;
      add_pair(out, u, v);
      if (route_pairs.insert({u, v}).second)
        route.push_back({u, v, Cap::Inf, Step::of_pair(u, v)});
    };
    auto route_add_real = [&](ArcId id) {
      if (route_real.insert(id).second)
        route.push_back({g.arc(id).tail, g.arc(id).head, g.arc(id).cap, Step::of_arc(id)});
    };

    std::vector<char> superb(xi + 1, 0);
    for (const Child& cd : kids) {
      if (cd.members.empty()) continue;
      int mi = std::min(tuple[cd.iota], static_cast<int>(cd.members.size()) - 1);
      if (cd.lambda_of[mi] != lz[cd.iota]) continue;  // not superb
      superb[cd.alpha] = 1;
      const RawPair& m = cd.members[mi];
      int la = cd.bl - 1, ra = cd.br + lam;
      // Point 1a: lifted child arcs with boundary endpoint replacement
      for (auto [x, y] : m.arcs) {
        std::vector<Vertex> xs, ys;
        if (x == s && la >= 1) {
          for (int i = 0; i < lam; ++i)
            if (cd.dmask & (1u << i)) xs.push_back(g.arc(cut_arc_on(la, i)).tail);
        } else {
          xs.push_back(x);
        }
        if (y == t && ra <= ell) {
          for (int i = 0; i < lam; ++i)
            if (cd.dmask & (1u << i)) ys.push_back(g.arc(cut_arc_on(ra, i)).tail);
        } else {
          ys.push_back(y);
        }
        for (Vertex xv : xs)
          for (Vertex yv : ys) route_add_pair(xv, yv);
      }
      // child witness arcs plus the entry cut arcs
      for (const auto& path : m.paths)
        for (const Step& st : path)
          if (st.is_arc() && st.arc < g.arc_bound()) route_add_real(st.arc);
      if (la >= 1)
        for (int i = 0; i < lam; ++i)
          if (cd.dmask & (1u << i)) route_add_real(cut_arc_on(la, i));
      // Point 1b: bypasses for paths outside D
      for (int i = 0; i < lam; ++i)
        if (!(cd.dmask & (1u << i))) route_add_pair(node(la, i), node(ra, i));
    }
    // Point 2: good blocks that ended up not superb
    for (int al = 1; al <= xi; ++al) {
      if (!good[al] || superb[al]) continue;
      int la = blocks[al - 1].first - 1, ra = blocks[al - 1].second + lam;
      for (int i = 0; i < lam; ++i) route_add_pair(node(la, i), node(ra, i));
    }
    // Point 3: plain chain arcs where no good block sits
    for (int a = 1; a <= ell; ++a) {
      bool covered = false;
      for (int al = 1; al <= xi; ++al)
        if (good[al] && blocks[al - 1].first <= a && a <= blocks[al - 1].second + 1)
          covered = true;
      if (covered) continue;
      for (int i = 0; i < lam; ++i) route_add_pair(node(a, i), node(a + 1, i));
    }
    // Point 4: reshuffle cliques at gamma-milestones
    for (int a : milestones)
      for (int io : jset) {
        unsigned dm = lset[io - 1] & ~lset[io];
        for (int i = 0; i < lam; ++i)
          if (dm & (1u << i))
            for (int j2 = 0; j2 < lam; ++j2)
              if ((dm & (1u << j2)) && i != j2) route_add_pair(node(a, i), node(a, j2));
      }
    // route the witnessing flow, then verify it exhausts G+A
    Digraph rg(g.vertex_bound());
    for (Vertex v = 0; v < g.vertex_bound(); ++v)
      if (!g.has_vertex(v)) rg.remove_vertex(v);
    std::vector<Step> origin;
    for (const RouteArc& ra2 : route) {
      rg.add_arc(ra2.u, ra2.v, ra2.cap);
      origin.push_back(ra2.origin);
    }
    MaxflowResult mr = max_flow(rg, s, t, fval);
    if (mr.kind != MaxflowResult::Kind::Value || mr.value != fval) {
      escape(ch);
      return;
    }
    Digraph ga = add_arcs(g, out.arcs);
    MaxflowResult mfa = max_flow(ga, s, t, fval);
    if (mfa.kind != MaxflowResult::Kind::Value || mfa.value != fval) {
      escape(ch);
      return;
    }
    for (const auto& path : mr.flow.paths) {
      StepPath sp;
      for (ArcId id : path) sp.push_back(origin[id]);
      out.paths.push_back(std::move(sp));
    }
    emit(std::move(out));
  }
};

void Engine::large_ell(const Digraph& g, Vertex s, Vertex t, int k, int kappa, const Flow& p,
                       const Pattern& h, const std::vector<Cut>& cuts, Branching& ch, int depth,
                       const Emit& emit) {
  bump(&AugmentStats::large_ell);
  whitebox_large_checks(g, s, t, k, p, h, cuts);
  check(p.value() >= 2, "large_ell: lambda must be at least 2");
  LargeCase lc(this, g, s, t, k, kappa, p, h, cuts, depth, emit);
  lc.top(ch);
}

AugPair finalize(const Digraph& g, Vertex s, Vertex t, const RawPair& rp) {
  AugPair out;
  out.arcs = rp.arcs;
  for (const StepPath& sp : rp.paths) {
    std::vector<ArcId> path;
    for (const Step& st : sp) {
      if (st.is_arc()) {
        check(g.arc_alive(st.arc), "finalize: dead arc in flow");
        path.push_back(st.arc);
      } else {
        auto it = std::lower_bound(out.arcs.begin(), out.arcs.end(), std::make_pair(st.u, st.v));
        check(it != out.arcs.end() && *it == std::make_pair(st.u, st.v),
              "finalize: pair step missing from A");
        path.push_back(g.arc_bound() + static_cast<int>(it - out.arcs.begin()));
      }
    }
    out.flow.paths.push_back(std::move(path));
  }
  Digraph host = add_arcs(g, out.arcs);
  check(flow_valid(host, s, t, out.flow), "finalize: flow invalid in G+A");
  // Off-guess branches may have lifted a flow that is no longer maximum in
  // G+A (an added arc can raise lambda past the constructed value). The
  // contract promises a maxflow of G+A, so recompute when that happened;
  // covering branches keep their witnessing flow untouched.
  bool all_inf = false;
  for (const auto& path : out.flow.paths) {
    bool inf = !path.empty();
    for (ArcId id : path) inf = inf && host.arc(id).cap == Cap::Inf;
    all_inf |= inf;
  }
  if (!all_inf) {
    MaxflowResult probe = max_flow(host, s, t, std::max(out.flow.value(), 1));
    bool maximal = probe.kind == MaxflowResult::Kind::Value &&
                   probe.value == out.flow.value() && out.flow.value() >= 1;
    if (out.flow.value() == 0)
      maximal = probe.kind == MaxflowResult::Kind::Value && probe.value == 0;
    if (!maximal) {
      MaxflowResult full = max_flow(host, s, t, host.num_unit_arcs());
      out.flow = std::move(full.flow);
    }
  }
  return out;
}

}  // namespace

int recursion_depth_budget(int k0) { return 2 * k0 * (k0 * k0 + 2) + 8; }

Digraph pair_host_graph(const Digraph& g, const AugPair& pair) { return add_arcs(g, pair.arcs); }

AugPair augment_randomized(const Digraph& g, Vertex s, Vertex t, int k, int kappa,
                           const Flow* warm_flow, SplitRng rng, const AugmentOptions& opts) {
  if (k < 0 || kappa < 0) throw std::invalid_argument("augment: negative parameter");
  if (s == t) throw std::invalid_argument("augment: s == t");
  Engine eng;
  eng.k0 = k;
  eng.lbig = 4 * k * k + 3;
  eng.depth_budget = recursion_depth_budget(k);
  eng.depth_cap = 4 * eng.depth_budget;
  eng.stats = opts.stats;
  eng.wb = opts.whitebox;
  if (opts.mix_trivial) {
    MaxflowResult mf = max_flow(g, s, t, k);
    if (mf.kind == MaxflowResult::Kind::Value && mf.value >= 1 && kappa <= mf.value &&
        rng.coin()) {
      if (opts.stats) ++opts.stats->trivial_mix;
      RawPair rp = make_plain(mf.flow);
      return finalize(g, s, t, rp);
    }
  }
  Branching ch;
  ch.det = false;
  ch.rng = rng.split(0x5eedULL);
  std::vector<RawPair> got;
  Flow warm = warm_flow ? *warm_flow : Flow{};
  eng.run(g, s, t, k, kappa, warm, ch, 0, [&](RawPair&& rp) { got.push_back(std::move(rp)); });
  check(got.size() == 1, "augment_randomized: exactly one output expected");
  return finalize(g, s, t, got[0]);
}

std::vector<AugPair> augment_deterministic(const Digraph& g, Vertex s, Vertex t, int k,
                                           int kappa, const Flow* warm_flow,
                                           const AugmentOptions& opts) {
  if (k < 0 || kappa < 0) throw std::invalid_argument("augment: negative parameter");
  if (s == t) throw std::invalid_argument("augment: s == t");
  Engine eng;
  eng.k0 = k;
  eng.lbig = 4 * k * k + 3;
  eng.depth_budget = recursion_depth_budget(k);
  eng.depth_cap = 4 * eng.depth_budget;
  eng.stats = opts.stats;
  eng.wb = opts.whitebox;
  Branching ch;
  ch.det = true;
  std::vector<RawPair> fam;
  std::set<std::string> seen;
  Flow warm = warm_flow ? *warm_flow : Flow{};
  eng.run(g, s, t, k, kappa, warm, ch, 0, [&](RawPair&& rp) {
    std::string key = pair_key(rp);
    if (seen.insert(key).second) fam.push_back(std::move(rp));
  });
  // the plain pair serves every Z whose core is already a mincut
  MaxflowResult mf = max_flow(g, s, t, k);
  if (mf.kind == MaxflowResult::Kind::Value && mf.value >= 1 && kappa <= mf.value) {
    RawPair rp = make_plain(mf.flow);
    if (seen.insert(pair_key(rp)).second) fam.push_back(std::move(rp));
  }
  std::vector<AugPair> out;
  std::set<std::string> final_seen;
  out.reserve(fam.size());
  for (const RawPair& rp : fam) {
    AugPair pair = finalize(g, s, t, rp);
    std::string key;
    auto put = [&](int x) { key.append(reinterpret_cast<const char*>(&x), sizeof(int)); };
    for (auto [u, v] : pair.arcs) {
      put(u);
      put(v);
    }
    for (const auto& path : pair.flow.paths) {
      put(-9);
      for (ArcId id : path) put(id);
    }
    if (final_seen.insert(key).second) out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace flowaug
