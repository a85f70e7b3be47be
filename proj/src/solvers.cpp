#include "flowaug/solvers.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "flowaug/augment.hpp"
#include "flowaug/derandom.hpp"

namespace flowaug {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  if (b > 0 && a > std::numeric_limits<std::int64_t>::max() - b)
    throw std::overflow_error("weight arithmetic overflow");
  if (b < 0 && a < std::numeric_limits<std::int64_t>::min() - b)
    throw std::overflow_error("weight arithmetic overflow");
  return a + b;
}

namespace {

bool has_inf_path(const Digraph& g, Vertex s, Vertex t) {
  std::vector<char> seen(g.vertex_bound(), 0);
  auto adj = g.out_adjacency();
  std::deque<Vertex> q{s};
  seen[s] = 1;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (auto [head, id] : adj[u])
      if (!seen[head] && g.arc(id).cap == Cap::Inf && head != u) {
        seen[head] = 1;
        q.push_back(head);
      }
  }
  return seen[t] != 0;
}

}  // namespace

Cut min_weight_mincut(const Digraph& g, const std::vector<std::int64_t>& arc_weight, Vertex s,
                      Vertex t) {
  if (has_inf_path(g, s, t))
    throw std::invalid_argument("min_weight_mincut: lambda is infinite");
  std::int64_t m_shift = 1;
  for (ArcId id : g.unit_arcs()) m_shift = checked_add(m_shift, arc_weight[id]);
  std::int64_t cap_sum = 0;
  std::vector<std::int64_t> cap(g.arc_bound(), 0);
  for (ArcId id : g.alive_arcs()) {
    const Arc& a = g.arc(id);
    if (a.tail == a.head) continue;
    if (a.cap == Cap::One) {
      cap[id] = checked_add(arc_weight[id], m_shift);
      cap_sum = checked_add(cap_sum, cap[id]);
    }
  }
  std::int64_t big = checked_add(cap_sum, 1);
  for (ArcId id : g.alive_arcs()) {
    const Arc& a = g.arc(id);
    if (a.tail != a.head && a.cap == Cap::Inf) cap[id] = big;
  }
  std::vector<std::int64_t> flow(g.arc_bound(), 0);
  std::vector<std::vector<std::pair<ArcId, bool>>> adj(g.vertex_bound());
  for (ArcId id : g.alive_arcs()) {
    const Arc& a = g.arc(id);
    if (a.tail == a.head) continue;
    adj[a.tail].emplace_back(id, true);
    adj[a.head].emplace_back(id, false);
  }
  for (auto& lst : adj) std::sort(lst.begin(), lst.end());
  while (true) {
    std::vector<std::pair<ArcId, bool>> parent(g.vertex_bound(), {-1, false});
    std::vector<char> seen(g.vertex_bound(), 0);
    std::deque<Vertex> q{s};
    seen[s] = 1;
    while (!q.empty() && !seen[t]) {
      Vertex u = q.front();
      q.pop_front();
      for (auto [id, fwd] : adj[u]) {
        const Arc& a = g.arc(id);
        if (fwd ? flow[id] >= cap[id] : flow[id] <= 0) continue;
        Vertex next = fwd ? a.head : a.tail;
        if (seen[next]) continue;
        seen[next] = 1;
        parent[next] = {id, fwd};
        q.push_back(next);
      }
    }
    if (!seen[t]) break;
    std::int64_t push = std::numeric_limits<std::int64_t>::max();
    for (Vertex v = t; v != s;) {
      auto [id, fwd] = parent[v];
      push = std::min(push, fwd ? cap[id] - flow[id] : flow[id]);
      v = fwd ? g.arc(id).tail : g.arc(id).head;
    }
    for (Vertex v = t; v != s;) {
      auto [id, fwd] = parent[v];
      flow[id] += fwd ? push : -push;
      v = fwd ? g.arc(id).tail : g.arc(id).head;
    }
  }
  std::vector<char> seen(g.vertex_bound(), 0);
  std::deque<Vertex> q{s};
  seen[s] = 1;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (auto [id, fwd] : adj[u]) {
      const Arc& a = g.arc(id);
      if (fwd ? flow[id] >= cap[id] : flow[id] <= 0) continue;
      Vertex next = fwd ? a.head : a.tail;
      if (!seen[next]) {
        seen[next] = 1;
        q.push_back(next);
      }
    }
  }
  Cut cut;
  for (ArcId id : g.alive_arcs()) {
    const Arc& a = g.arc(id);
    if (a.tail == a.head) continue;
    if (seen[a.tail] && !seen[a.head]) {
      check(a.cap == Cap::One, "min_weight_mincut: infinity arc crosses the cut");
      cut.push_back(id);
    }
  }
  return cut;
}

std::optional<CutSolution> solve_weighted_st_cut(const Digraph& g,
                                                 const std::vector<std::int64_t>& arc_weight,
                                                 Vertex s, Vertex t, int k, std::int64_t w,
                                                 const SolveOptions& opts) {
  if (has_inf_path(g, s, t)) return std::nullopt;
  MaxflowResult mf0 = max_flow(g, s, t, k);
  if (mf0.kind != MaxflowResult::Kind::Value) return std::nullopt;  // lambda > k
  if (mf0.value == 0) return CutSolution{{}, 0};
  AugmentOptions aopts;
  aopts.stats = opts.aug_stats;
  auto family = augment_deterministic(g, s, t, k, 0, &mf0.flow, aopts);
  if (opts.stats) opts.stats->family_members += static_cast<long long>(family.size());
  std::optional<CutSolution> best;
  for (const AugPair& pair : family) {
    Digraph host = pair_host_graph(g, pair);
    MaxflowResult mh = max_flow(host, s, t, k);
    if (mh.kind != MaxflowResult::Kind::Value || mh.value > k) continue;
    if (opts.stats) ++opts.stats->members_used;
    std::vector<std::int64_t> wext = arc_weight;
    wext.resize(host.arc_bound(), 0);
    Cut y = min_weight_mincut(host, wext, s, t);
    if (static_cast<int>(y.size()) > k) continue;
    std::int64_t wt = 0;
    bool orig = true;
    for (ArcId id : y) {
      if (id >= g.arc_bound())
        orig = false;
      else
        wt = checked_add(wt, arc_weight[id]);
    }
    if (!orig || wt > w) continue;
    if (!is_st_cut(g, s, t, y)) continue;  // certificate re-check
    if (!best || wt < best->weight) best = CutSolution{y, wt};
  }
  return best;
}

std::optional<int> pairwise_linked_violation(const BundledInstance& inst) {
  const Digraph& g = inst.g;
  std::vector<char> soft(g.arc_bound(), 0);
  for (const auto& b : inst.bundles)
    for (ArcId id : b.arcs) soft[id] = 1;
  std::set<std::pair<Vertex, Vertex>> crisp_pairs;
  for (ArcId id : g.alive_arcs())
    if (!soft[id]) crisp_pairs.insert({g.arc(id).tail, g.arc(id).head});
  auto adj = g.out_adjacency();
  for (size_t bi = 0; bi < inst.bundles.size(); ++bi) {
    const auto& b = inst.bundles[bi];
    std::vector<ArcId> dels;
    for (ArcId id : b.arcs)
      if (g.arc(id).cap == Cap::One && !crisp_pairs.count({g.arc(id).tail, g.arc(id).head}))
        dels.push_back(id);
    std::vector<char> allowed(g.arc_bound(), 0);
    for (ArcId id : g.alive_arcs()) {
      bool del = soft[id] && g.arc(id).cap == Cap::One &&
                 !crisp_pairs.count({g.arc(id).tail, g.arc(id).head});
      allowed[id] = del ? 0 : 1;
    }
    for (ArcId id : b.arcs) allowed[id] = 1;
    auto linked = [&](ArcId e1, ArcId e2) {
      std::vector<char> seen(g.vertex_bound(), 0);
      std::deque<Vertex> q;
      for (Vertex v : {g.arc(e1).tail, g.arc(e1).head})
        if (!seen[v]) {
          seen[v] = 1;
          q.push_back(v);
        }
      while (!q.empty()) {
        Vertex u = q.front();
        q.pop_front();
        for (auto [head, id] : adj[u])
          if (allowed[id] && !seen[head]) {
            seen[head] = 1;
            q.push_back(head);
          }
      }
      return seen[g.arc(e2).tail] || seen[g.arc(e2).head];
    };
    for (size_t x = 0; x < dels.size(); ++x)
      for (size_t y = x + 1; y < dels.size(); ++y)
        if (!linked(dels[x], dels[y]) && !linked(dels[y], dels[x]))
          return static_cast<int>(bi);
  }
  return std::nullopt;
}

namespace {

// Crisp connectivity with the currently selected deletable arcs removed;
// memoized per source vertex.
struct CrispReach {
  const Digraph& g;
  std::vector<ArcId> banned;
  std::map<Vertex, std::vector<char>> memo;
  CrispReach(const Digraph& g_, std::vector<ArcId> banned_)
      : g(g_), banned(std::move(banned_)) {}
  bool reaches(Vertex u, Vertex v) {
    if (u == v) return true;
    auto it = memo.find(u);
    if (it == memo.end()) it = memo.emplace(u, reach_avoiding(g, u, banned)).first;
    return it->second[v] != 0;
  }
};

struct BundledWork {
  const BundledInstance& inst;
  const SolveOptions& opts;
  std::vector<char> soft, deletable;
  std::vector<int> bundle_of;
  std::vector<std::vector<ArcId>> del_of_bundle;
  int nb = 0;
  int d_max = 1;
  std::optional<BundledSolution> best;

  // per-member / per-kappa state
  const Digraph* host = nullptr;
  const Flow* flw = nullptr;
  int lam = 0;
  int kap = 0;
  std::vector<std::vector<ArcId>> del_on;
  std::vector<std::map<ArcId, int>> pos_of;
  std::vector<int> alpha, gamma;
  std::vector<std::pair<int, int>> epairs;
  std::vector<std::vector<ArcId>> echoice;  // [b][i], -1 when absent
  struct RelPair {
    int j, i1, i2;
  };
  std::vector<RelPair> pairs;
  std::vector<int> rel;
  std::set<std::string> outcome_seen;  // per member: dedupe auxiliary solves

  explicit BundledWork(const BundledInstance& i, const SolveOptions& o) : inst(i), opts(o) {
    const Digraph& g = inst.g;
    nb = static_cast<int>(inst.bundles.size());
    soft.assign(g.arc_bound(), 0);
    bundle_of.assign(g.arc_bound(), -1);
    for (int b = 0; b < nb; ++b)
      for (ArcId id : inst.bundles[b].arcs) {
        check(g.arc_alive(id), "bundled: bundle references dead arc");
        check(!soft[id], "bundled: bundles must be disjoint");
        soft[id] = 1;
        bundle_of[id] = b;
      }
    deletable.assign(g.arc_bound(), 0);
    std::set<std::pair<Vertex, Vertex>> crisp_pairs;
    for (ArcId id : g.alive_arcs())
      if (!soft[id]) crisp_pairs.insert({g.arc(id).tail, g.arc(id).head});
    del_of_bundle.assign(nb, {});
    for (ArcId id : g.alive_arcs()) {
      if (!soft[id] || g.arc(id).cap != Cap::One) continue;
      if (crisp_pairs.count({g.arc(id).tail, g.arc(id).head})) continue;
      deletable[id] = 1;
      del_of_bundle[bundle_of[id]].push_back(id);
    }
    for (const auto& dl : del_of_bundle) d_max = std::max(d_max, static_cast<int>(dl.size()));
  }

  void offer(const std::vector<int>& touched, Cut arcs) {
    std::int64_t wt = 0;
    for (int b : touched) wt = checked_add(wt, inst.bundles[b].weight);
    if (static_cast<int>(touched.size()) > inst.k || wt > inst.w) return;
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    for (ArcId id : arcs)
      if (!deletable[id]) return;
    if (!is_st_cut(inst.g, inst.s, inst.t, arcs)) return;
    std::vector<int> tsorted = touched;
    std::sort(tsorted.begin(), tsorted.end());
    tsorted.erase(std::unique(tsorted.begin(), tsorted.end()), tsorted.end());
    if (!best || wt < best->weight) best = BundledSolution{tsorted, arcs, wt};
  }

  void solve() {
    const Digraph& g = inst.g;
    if (has_inf_path(g, inst.s, inst.t)) return;
    MaxflowResult mf0 = max_flow(g, inst.s, inst.t, 0);
    if (mf0.kind == MaxflowResult::Kind::Value && mf0.value == 0) {
      offer({}, {});
      return;
    }
    if (inst.k <= 0) return;
    // quick infeasibility: even deleting every deletable arc must cut
    {
      Cut all_del;
      for (ArcId id : g.alive_arcs())
        if (deletable[id]) all_del.push_back(id);
      if (!is_st_cut(g, inst.s, inst.t, all_del)) return;
    }
    int kd = inst.k * d_max;
    AugmentOptions aopts;
    aopts.stats = opts.aug_stats;
    auto family = augment_deterministic(g, inst.s, inst.t, kd, 0, nullptr, aopts);
    if (opts.stats) opts.stats->family_members += static_cast<long long>(family.size());
    for (const AugPair& pair : family) per_member(pair);
  }

  void per_member(const AugPair& pair) {
    const Digraph& g = inst.g;
    Digraph h = pair_host_graph(g, pair);
    int kd = inst.k * d_max;
    MaxflowResult mh = max_flow(h, inst.s, inst.t, kd);
    if (mh.kind != MaxflowResult::Kind::Value || mh.value < 1) return;
    if (mh.value != pair.flow.value()) return;
    // a deletable mincut must exist: relax undeletable unit arcs to infinity
    Digraph relaxed = h;
    for (ArcId id : h.alive_arcs())
      if (h.arc(id).cap == Cap::One && (id >= g.arc_bound() || !deletable[id]))
        relaxed.set_capacity(id, Cap::Inf);
    MaxflowResult md = max_flow(relaxed, inst.s, inst.t, mh.value);
    if (md.kind != MaxflowResult::Kind::Value || md.value != mh.value) return;
    if (opts.stats) ++opts.stats->members_used;
    outcome_seen.clear();
    host = &h;
    flw = &pair.flow;
    lam = mh.value;
    del_on.assign(lam, {});
    pos_of.assign(lam, {});
    bool ok = true;
    for (int i = 0; i < lam; ++i) {
      for (size_t j = 0; j < flw->paths[i].size(); ++j) {
        ArcId id = flw->paths[i][j];
        pos_of[i][id] = static_cast<int>(j);
        if (id < g.arc_bound() && deletable[id]) del_on[i].push_back(id);
      }
      if (del_on[i].empty()) ok = false;
    }
    if (!ok) return;
    for (kap = 1; kap <= std::min(inst.k, nb); ++kap) {
      alpha.assign(lam, 0);
      alpha_rec(0);
    }
    host = nullptr;
    flw = nullptr;
  }

  void alpha_rec(int i) {
    if (i < lam) {
      for (int j = 0; j < kap; ++j) {
        alpha[i] = j;
        alpha_rec(i + 1);
      }
      return;
    }
    std::vector<char> hit(kap, 0);
    for (int x = 0; x < lam; ++x) hit[alpha[x]] = 1;
    for (int j = 0; j < kap; ++j)
      if (!hit[j]) return;  // a violated bundle must cut some path
    // some bundle must offer deletable arcs on every path of each slot
    for (int j = 0; j < kap; ++j) {
      bool any = false;
      for (int b = 0; b < nb && !any; ++b) {
        bool okb = true;
        for (int i2 = 0; i2 < lam && okb; ++i2) {
          if (alpha[i2] != j) continue;
          bool on = false;
          for (ArcId id : del_on[i2])
            if (bundle_of[id] == b) on = true;
          if (!on) okb = false;
        }
        any = okb;
      }
      if (!any) return;
    }
    gamma_stage();
  }

  void gamma_stage() {
    auto fam = splitter_functions(nb, kap, std::min(kap, nb));
    std::set<std::vector<std::uint8_t>> seen;
    gamma.assign(nb, 0);
    for (const auto& f : fam) {
      if (!seen.insert(f).second) continue;
      for (int b = 0; b < nb; ++b) gamma[b] = f[b];
      epairs.clear();
      for (int b = 0; b < nb; ++b) {
        if (del_of_bundle[b].empty()) continue;
        for (int i = 0; i < lam; ++i)
          if (gamma[b] == alpha[i]) epairs.emplace_back(b, i);
      }
      if (epairs.empty()) continue;
      esel_stage();
    }
  }

  void esel_stage() {
    int np = static_cast<int>(epairs.size());
    auto fam = splitter_functions(np, d_max, std::min(lam, np));
    std::set<std::vector<ArcId>> seen;
    for (const auto& f : fam) {
      std::vector<ArcId> sel(np);
      for (int e = 0; e < np; ++e) {
        const auto& dl = del_of_bundle[epairs[e].first];
        sel[e] = dl[f[e] % dl.size()];
      }
      if (!seen.insert(sel).second) continue;
      sanity_and_rel(sel);
    }
  }

  void sanity_and_rel(const std::vector<ArcId>& sel) {
    echoice.assign(nb, std::vector<ArcId>(lam, -1));
    for (size_t e = 0; e < epairs.size(); ++e)
      echoice[epairs[e].first][epairs[e].second] = sel[e];
    std::vector<char> alive(nb, 0);
    for (int b = 0; b < nb; ++b) {
      if (gamma[b] >= kap) continue;  // slot unused by this branch
      bool relevant = false, okb = true;
      for (int i = 0; i < lam; ++i) {
        if (alpha[i] != gamma[b]) continue;
        relevant = true;
        ArcId id = echoice[b][i];
        if (id < 0 || !pos_of[i].count(id)) okb = false;  // sanity: on-path
      }
      alive[b] = (relevant && okb) ? 1 : 0;
    }
    std::vector<ArcId> selected;
    for (int b = 0; b < nb; ++b) {
      if (!alive[b]) continue;
      for (int i = 0; i < lam; ++i)
        if (echoice[b][i] >= 0 && pos_of[i].count(echoice[b][i]))
          selected.push_back(echoice[b][i]);
    }
    std::sort(selected.begin(), selected.end());
    selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
    CrispReach crisp(*host, selected);
    pairs.clear();
    for (int j = 0; j < kap; ++j)
      for (int i1 = 0; i1 < lam; ++i1)
        for (int i2 = i1 + 1; i2 < lam; ++i2)
          if (alpha[i1] == j && alpha[i2] == j) pairs.push_back({j, i1, i2});
    rel.assign(pairs.size(), 0);
    rel_rec(0, std::move(alive), crisp);
  }

  // guess encoding per pair: 0 f1-tail-s, 1 f2-tail-s, 2 f1-head-t,
  // 3 f2-head-t, 4 forward link (case 3), 5 backward link (case 4)
  bool complies(int b, const RelPair& pr, int guess, CrispReach& crisp) {
    const Digraph& g = *host;
    ArcId e1 = echoice[b][pr.i1], e2 = echoice[b][pr.i2];
    bool t1s = g.arc(e1).tail == inst.s, t2s = g.arc(e2).tail == inst.s;
    bool h1t = g.arc(e1).head == inst.t, h2t = g.arc(e2).head == inst.t;
    int major;
    if (t1s || t2s)
      major = 1;
    else if (h1t || h2t)
      major = 2;
    else {
      bool fwd = false;
      for (Vertex u : {g.arc(e1).tail, g.arc(e1).head})
        for (Vertex v : {g.arc(e2).tail, g.arc(e2).head})
          if (crisp.reaches(u, v)) fwd = true;
      major = fwd ? 3 : 4;
    }
    switch (guess) {
      case 0: return major == 1 && t1s;
      case 1: return major == 1 && t2s;
      case 2: return major == 2 && h1t;
      case 3: return major == 2 && h2t;
      case 4: return major == 3;
      default: return major == 4;
    }
  }

  void rel_rec(size_t pi, std::vector<char> alive, CrispReach& crisp) {
    if (pi < pairs.size()) {
      const RelPair& pr = pairs[pi];
      // guesses collapse when they keep the same bundles alive; the link
      // direction only matters for filtering, which needs two survivors
      std::set<std::pair<std::vector<char>, int>> seen_effects;
      for (int gsx = 0; gsx < 6; ++gsx) {
        std::vector<char> next = alive;
        int alive_j = 0;
        for (int b = 0; b < nb; ++b) {
          if (!next[b] || gamma[b] != pr.j) continue;
          if (!complies(b, pr, gsx, crisp))
            next[b] = 0;
          else
            ++alive_j;
        }
        if (alive_j == 0) continue;
        int dir = (alive_j >= 2 && gsx >= 4) ? gsx : -1;
        if (!seen_effects.insert({next, dir}).second) continue;
        rel[pi] = gsx;
        rel_rec(pi + 1, std::move(next), crisp);
      }
      return;
    }
    filter_and_solve(std::move(alive), crisp);
  }

  void filter_and_solve(std::vector<char> alive, CrispReach& crisp) {
    // the crucial filtering step: crossing candidates cannot both be real
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t pi = 0; pi < pairs.size(); ++pi) {
        if (rel[pi] != 4 && rel[pi] != 5) continue;
        const RelPair& pr = pairs[pi];
        for (int b1 = 0; b1 < nb; ++b1) {
          if (!alive[b1] || gamma[b1] != pr.j) continue;
          for (int b2 = 0; b2 < nb; ++b2) {
            if (b1 == b2 || !alive[b2] || gamma[b2] != pr.j) continue;
            int p11 = pos_of[pr.i1].at(echoice[b1][pr.i1]);
            int p12 = pos_of[pr.i1].at(echoice[b2][pr.i1]);
            int p21 = pos_of[pr.i2].at(echoice[b1][pr.i2]);
            int p22 = pos_of[pr.i2].at(echoice[b2][pr.i2]);
            if (p11 < p12 && p21 > p22) {
              // b1 earlier on i1 but later on i2
              if (rel[pi] == 4) {
                alive[b2] = 0;
              } else {
                alive[b1] = 0;
              }
              changed = true;
            }
          }
        }
      }
    }
    // order the survivors along their paths
    std::vector<std::vector<int>> ordered(kap);
    for (int j = 0; j < kap; ++j) {
      int iref = -1;
      for (int i = 0; i < lam; ++i)
        if (alpha[i] == j && iref < 0) iref = i;
      for (int b = 0; b < nb; ++b)
        if (alive[b] && gamma[b] == j) ordered[j].push_back(b);
      if (ordered[j].empty()) return;  // slot emptied: infeasible branch
      std::sort(ordered[j].begin(), ordered[j].end(), [&](int b1, int b2) {
        return pos_of[iref].at(echoice[b1][iref]) < pos_of[iref].at(echoice[b2][iref]);
      });
      // ordering must agree on every path of the slot
      for (int i = 0; i < lam; ++i) {
        if (alpha[i] != j) continue;
        for (size_t x = 0; x + 1 < ordered[j].size(); ++x)
          if (pos_of[i].at(echoice[ordered[j][x]][i]) >=
              pos_of[i].at(echoice[ordered[j][x + 1]][i]))
            return;  // crossing survived a non-link guess: infeasible
      }
    }
    // distinct branches often converge to the same ordered selection; solve
    // the auxiliary graph once per outcome
    {
      std::string key;
      auto put = [&](int x) { key.append(reinterpret_cast<const char*>(&x), sizeof(int)); };
      for (int i = 0; i < lam; ++i) put(alpha[i]);
      for (int j = 0; j < kap; ++j) {
        put(-1);
        for (int b : ordered[j]) {
          put(b);
          for (int i = 0; i < lam; ++i)
            if (alpha[i] == j) put(echoice[b][i]);
        }
      }
      if (!outcome_seen.insert(key).second) return;
    }
    // auxiliary graph: one path per slot, infinity arcs from crisp
    // connectivity between selected-arc endpoints
    int nodes = 2;
    std::vector<std::vector<int>> node_of(kap);  // node_of[j][a], a in 0..n_j
    for (int j = 0; j < kap; ++j) {
      int njn = static_cast<int>(ordered[j].size());
      node_of[j].resize(njn + 1);
      node_of[j][0] = 0;
      node_of[j][njn] = 1;
      for (int a2 = 1; a2 < njn; ++a2) node_of[j][a2] = nodes++;
    }
    Digraph aux(nodes);
    std::vector<std::int64_t> aw;
    std::vector<std::pair<int, int>> edge_slot;  // (j, a) per aux arc
    for (int j = 0; j < kap; ++j) {
      int njn = static_cast<int>(ordered[j].size());
      for (int a2 = 1; a2 <= njn; ++a2) {
        ArcId id = aux.add_arc(node_of[j][a2 - 1], node_of[j][a2], Cap::One);
        aw.resize(id + 1, 0);
        aw[id] = inst.bundles[ordered[j][a2 - 1]].weight;
        edge_slot.resize(id + 1, {-1, -1});
        edge_slot[id] = {j, a2};
      }
    }
    const Digraph& g = *host;
    for (int i1 = 0; i1 < lam; ++i1)
      for (int i2 = 0; i2 < lam; ++i2) {
        int j1 = alpha[i1], j2 = alpha[i2];
        int n1 = static_cast<int>(ordered[j1].size()), n2 = static_cast<int>(ordered[j2].size());
        for (int a1 = 1; a1 <= n1; ++a1)
          for (int a2 = 1; a2 <= n2; ++a2) {
            if (j1 == j2 && a1 == a2) continue;
            ArcId e1 = echoice[ordered[j1][a1 - 1]][i1];
            ArcId e2 = echoice[ordered[j2][a2 - 1]][i2];
            for (int end1 = 0; end1 < 2; ++end1)
              for (int end2 = 0; end2 < 2; ++end2) {
                Vertex u1 = end1 ? g.arc(e1).head : g.arc(e1).tail;
                Vertex u2 = end2 ? g.arc(e2).head : g.arc(e2).tail;
                if (!crisp.reaches(u1, u2)) continue;
                int from = node_of[j1][end1 ? a1 : a1 - 1];
                int to = node_of[j2][end2 ? a2 : a2 - 1];
                if (from != to) {
                  ArcId id = aux.add_arc(from, to, Cap::Inf);
                  aw.resize(id + 1, 0);
                  edge_slot.resize(id + 1, {-1, -1});
                }
              }
          }
      }
    if (opts.stats) ++opts.stats->aux_solves;
    Cut yprime;
    try {
      yprime = min_weight_mincut(aux, aw, 0, 1);
    } catch (const std::invalid_argument&) {
      return;  // infinity path: this branch admits no cut
    }
    if (static_cast<int>(yprime.size()) != kap) return;
    std::vector<int> a_of(kap, -1);
    for (ArcId id : yprime) {
      auto [j, a2] = edge_slot[id];
      if (j < 0 || a_of[j] >= 0) return;
      a_of[j] = a2;
    }
    std::vector<int> touched;
    Cut y;
    for (int i = 0; i < lam; ++i) {
      int j = alpha[i];
      if (a_of[j] < 0) return;
      y.push_back(echoice[ordered[j][a_of[j] - 1]][i]);
    }
    for (int j = 0; j < kap; ++j) touched.push_back(ordered[j][a_of[j] - 1]);
    offer(touched, y);
  }
};

}  // namespace

std::optional<BundledSolution> solve_bundled_cut(const BundledInstance& inst,
                                                 const SolveOptions& opts) {
  if (auto bad = pairwise_linked_violation(inst))
    throw std::invalid_argument("bundled cut: bundle " + std::to_string(*bad) +
                                " violates pairwise linked deletable edges");
  BundledWork work(inst, opts);
  work.solve();
  return work.best;
}

std::optional<BundledSolution> solve_chain_sat(const BundledInstance& inst, int ell,
                                               const SolveOptions& opts) {
  const Digraph& g = inst.g;
  for (size_t bi = 0; bi < inst.bundles.size(); ++bi) {
    const auto& b = inst.bundles[bi];
    if (static_cast<int>(b.arcs.size()) > ell)
      throw std::invalid_argument("chain sat: bundle " + std::to_string(bi) +
                                  " longer than ell");
    std::map<Vertex, int> outdeg, indeg;
    for (ArcId id : b.arcs) {
      ++outdeg[g.arc(id).tail];
      ++indeg[g.arc(id).head];
    }
    int starts = 0, ends = 0;
    for (auto [v, c] : outdeg) {
      if (c > 1) throw std::invalid_argument("chain sat: bundle is not a path");
      if (!indeg.count(v)) ++starts;
    }
    for (auto [v, c] : indeg) {
      if (c > 1) throw std::invalid_argument("chain sat: bundle is not a path");
      if (!outdeg.count(v)) ++ends;
    }
    if (!b.arcs.empty() && (starts != 1 || ends != 1))
      throw std::invalid_argument("chain sat: bundle is not a path");
  }
  return solve_bundled_cut(inst, opts);
}

SkewReduction reduce_skew_to_bundled(const SkewInstance& inst) {
  const Digraph& g = inst.g;
  int b = static_cast<int>(inst.pairs.size());
  check(b >= 1, "skew reduction: at least one terminal pair required");
  int n = g.vertex_bound();
  SkewReduction red;
  Digraph out(n * b + 2);
  Vertex s = n * b, t = n * b + 1;
  for (int c = 0; c < b; ++c)
    for (Vertex v = 0; v < n; ++v)
      if (!g.has_vertex(v)) out.remove_vertex(c * n + v);
  std::vector<Bundle> bundles;
  for (ArcId id : g.alive_arcs()) {
    const Arc& a = g.arc(id);
    if (a.cap == Cap::Inf) {
      for (int c = 0; c < b; ++c) out.add_arc(c * n + a.tail, c * n + a.head, Cap::Inf);
      continue;
    }
    Bundle bd;
    bd.weight = inst.arc_weight[id];
    for (int c = 0; c < b; ++c)
      bd.arcs.push_back(out.add_arc(c * n + a.tail, c * n + a.head, Cap::One));
    bundles.push_back(std::move(bd));
    red.bundle_of_arc.push_back(id);
  }
  for (Vertex v = 0; v < n; ++v) {
    if (!g.has_vertex(v)) continue;
    for (int i = 0; i < b; ++i)
      for (int j = i + 1; j < b; ++j) out.add_arc(i * n + v, j * n + v, Cap::One);
  }
  for (int i = 0; i < b; ++i) {
    out.add_arc(s, i * n + inst.pairs[i].first, Cap::One);
    out.add_arc(i * n + inst.pairs[i].second, t, Cap::One);
  }
  red.bundled.g = std::move(out);
  red.bundled.s = s;
  red.bundled.t = t;
  red.bundled.k = inst.k;
  red.bundled.w = inst.w;
  red.bundled.bundles = std::move(bundles);
  check(!pairwise_linked_violation(red.bundled).has_value(),
        "skew reduction: must produce pairwise linked deletable edges");
  for (const auto& bd : red.bundled.bundles)
    check(static_cast<int>(bd.arcs.size()) <= b, "skew reduction: bundle exceeds copy count");
  return red;
}

std::optional<ArcSolution> solve_skew_multicut(const SkewInstance& inst,
                                               const SolveOptions& opts) {
  if (inst.pairs.empty()) return ArcSolution{{}, 0};
  SkewReduction red = reduce_skew_to_bundled(inst);
  auto sol = solve_bundled_cut(red.bundled, opts);
  if (!sol) return std::nullopt;
  ArcSolution out;
  for (int b : sol->touched) {
    out.arcs.push_back(red.bundle_of_arc[b]);
    out.weight = checked_add(out.weight, inst.arc_weight[red.bundle_of_arc[b]]);
  }
  std::sort(out.arcs.begin(), out.arcs.end());
  for (size_t i = 0; i < inst.pairs.size(); ++i) {
    auto seen = reach_avoiding(inst.g, inst.pairs[i].first, out.arcs);
    for (size_t j = i; j < inst.pairs.size(); ++j)
      check(!seen[inst.pairs[j].second], "skew: lifted cut fails validation");
  }
  check(static_cast<int>(out.arcs.size()) <= inst.k && out.weight <= inst.w,
        "skew: lifted cut over budget");
  return out;
}

namespace {

bool acyclic_without(const Digraph& g, const std::vector<ArcId>& removed_sorted) {
  std::vector<int> indeg(g.vertex_bound(), 0);
  auto adj = g.out_adjacency();
  auto live = [&](ArcId id) {
    return g.arc_alive(id) &&
           !std::binary_search(removed_sorted.begin(), removed_sorted.end(), id);
  };
  for (ArcId id = 0; id < g.arc_bound(); ++id)
    if (live(id)) {
      if (g.arc(id).tail == g.arc(id).head) return false;
      ++indeg[g.arc(id).head];
    }
  std::deque<Vertex> q;
  int total = 0, done = 0;
  for (Vertex v = 0; v < g.vertex_bound(); ++v)
    if (g.has_vertex(v)) {
      ++total;
      if (indeg[v] == 0) q.push_back(v);
    }
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    ++done;
    for (auto [head, id] : adj[u])
      if (live(id) && --indeg[head] == 0) q.push_back(head);
  }
  return done == total;
}

template <class F>
void for_each_subset_of(const std::vector<ArcId>& pool, int size, F f) {
  if (size == 0) {
    std::vector<ArcId> e;
    f(e);
    return;
  }
  if (size > static_cast<int>(pool.size())) return;
  int n = static_cast<int>(pool.size());
  std::vector<int> idx(size);
  for (int i = 0; i < size; ++i) idx[i] = i;
  std::vector<ArcId> cur(size);
  while (true) {
    for (int i = 0; i < size; ++i) cur[i] = pool[idx[i]];
    f(cur);
    int i = size - 1;
    while (i >= 0 && idx[i] == n - size + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::optional<ArcSolution> solve_wdfas(const Digraph& g,
                                       const std::vector<std::int64_t>& arc_weight, int k,
                                       std::int64_t w, const SolveOptions& opts) {
  std::vector<ArcId> loops;
  Digraph g2 = g;
  for (ArcId id : g.alive_arcs())
    if (g.arc(id).tail == g.arc(id).head) {
      loops.push_back(id);
      g2.remove_arc(id);
    }
  int kr = k - static_cast<int>(loops.size());
  std::int64_t wr = w;
  for (ArcId id : loops) wr -= arc_weight[id];
  if (kr < 0 || wr < 0) return std::nullopt;

  // grow the arc set, maintaining a cardinality-bounded unweighted witness
  std::vector<ArcId> witness;
  std::vector<ArcId> arcs = g2.alive_arcs();
  Digraph prefix(g2.vertex_bound());
  for (Vertex v = 0; v < g2.vertex_bound(); ++v)
    if (!g2.has_vertex(v)) prefix.remove_vertex(v);
  for (size_t i = 0; i < arcs.size(); ++i) {
    const Arc& a = g2.arc(arcs[i]);
    while (prefix.arc_bound() < arcs[i]) prefix.add_arc_raw(Arc{-1, -1, Cap::One, false});
    prefix.add_arc(a.tail, a.head, a.cap);
    std::vector<ArcId> ws = witness;
    std::sort(ws.begin(), ws.end());
    if (acyclic_without(prefix, ws)) continue;
    bool found = false;
    std::vector<ArcId> pool(arcs.begin(), arcs.begin() + i + 1);
    for (int size = 0; size <= kr && !found; ++size)
      for_each_subset_of(pool, size, [&](const std::vector<ArcId>& sel) {
        if (found) return;
        if (acyclic_without(prefix, sel)) {
          witness = sel;
          found = true;
        }
      });
    if (!found) return std::nullopt;
  }

  // the weighted query branches over the kept part of the witness and its
  // guessed topological order, then asks skew multicut
  std::optional<ArcSolution> best;
  int r = static_cast<int>(witness.size());
  for (unsigned mask = 0; mask < (1u << r); ++mask) {
    std::vector<ArcId> kept, dropped;
    for (int i = 0; i < r; ++i)
      (((mask >> i) & 1) ? kept : dropped).push_back(witness[i]);
    if (static_cast<int>(dropped.size()) > kr) continue;
    std::int64_t wd = 0;
    for (ArcId id : dropped) wd = checked_add(wd, arc_weight[id]);
    if (wd > wr) continue;
    Digraph h = g2;
    for (ArcId id : dropped) h.remove_arc(id);
    std::vector<int> perm(kept.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    do {
      SkewInstance sk;
      sk.g = h;
      sk.arc_weight = arc_weight;
      sk.arc_weight.resize(h.arc_bound(), 0);
      sk.k = kr - static_cast<int>(dropped.size());
      sk.w = wr - wd;
      // kept arcs in guessed topological order w_1 < ... < w_r; forbid
      // head(w_a) -> tail(w_b) whenever b <= a
      int rr = static_cast<int>(kept.size());
      for (int l = 0; l < rr; ++l) {
        ArcId wa = kept[perm[rr - 1 - l]];
        sk.pairs.emplace_back(h.arc(wa).head, h.arc(wa).tail);
      }
      std::optional<ArcSolution> sub;
      if (sk.pairs.empty()) {
        if (acyclic_without(h, {})) sub = ArcSolution{{}, 0};
      } else {
        sub = solve_skew_multicut(sk, opts);
      }
      if (sub) {
        std::vector<ArcId> all = loops;
        all.insert(all.end(), dropped.begin(), dropped.end());
        all.insert(all.end(), sub->arcs.begin(), sub->arcs.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        std::int64_t wt = 0;
        for (ArcId id : all) wt = checked_add(wt, arc_weight[id]);
        bool ok = static_cast<int>(all.size()) <= k && wt <= w && acyclic_without(g, all);
        if (ok && (!best || wt < best->weight)) best = ArcSolution{all, wt};
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return best;
}

std::optional<VertexSolution> solve_wdfvs(const Digraph& g,
                                          const std::vector<std::int64_t>& vertex_weight, int k,
                                          std::int64_t w, const SolveOptions& opts) {
  int n = g.vertex_bound();
  Digraph split(2 * n);
  for (Vertex v = 0; v < n; ++v)
    if (!g.has_vertex(v)) {
      split.remove_vertex(v);
      split.remove_vertex(n + v);
    }
  std::vector<std::int64_t> aw;
  std::vector<Vertex> vertex_of_arc;
  std::int64_t heavy = checked_add(w, 1);
  for (Vertex v = 0; v < n; ++v) {
    if (!g.has_vertex(v)) continue;
    ArcId id = split.add_arc(v, n + v, Cap::One);
    aw.resize(id + 1, 0);
    aw[id] = vertex_weight[v];
    vertex_of_arc.resize(id + 1, -1);
    vertex_of_arc[id] = v;
  }
  for (ArcId id : g.alive_arcs()) {
    const Arc& a = g.arc(id);
    ArcId nid = split.add_arc(n + a.tail, a.head, Cap::One);
    aw.resize(nid + 1, 0);
    aw[nid] = heavy;
    vertex_of_arc.resize(nid + 1, -1);
  }
  auto sub = solve_wdfas(split, aw, k, w, opts);
  if (!sub) return std::nullopt;
  VertexSolution out;
  for (ArcId id : sub->arcs) {
    check(vertex_of_arc[id] >= 0, "wdfvs: heavy arc leaked into the solution");
    out.vertices.push_back(vertex_of_arc[id]);
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  out.weight = sub->weight;
  return out;
}

}  // namespace flowaug
