#include "flowaug/oracle.hpp"

#include <algorithm>
#include <deque>

namespace flowaug::oracle {

namespace {

// Plain BFS over alive arcs minus a sorted banned set.
std::vector<char> reach(const Digraph& g, Vertex from, const std::vector<ArcId>& banned) {
  std::vector<char> seen(g.vertex_bound(), 0);
  if (!g.has_vertex(from)) return seen;
  auto adj = g.out_adjacency();
  std::deque<Vertex> q{from};
  seen[from] = 1;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (auto [head, id] : adj[u]) {
      if (seen[head] || std::binary_search(banned.begin(), banned.end(), id)) continue;
      seen[head] = 1;
      q.push_back(head);
    }
  }
  return seen;
}

std::vector<char> reach_to(const Digraph& g, Vertex to, const std::vector<ArcId>& banned) {
  std::vector<char> seen(g.vertex_bound(), 0);
  if (!g.has_vertex(to)) return seen;
  auto adj = g.in_adjacency();
  std::deque<Vertex> q{to};
  seen[to] = 1;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (auto [tail, id] : adj[u]) {
      if (seen[tail] || std::binary_search(banned.begin(), banned.end(), id)) continue;
      seen[tail] = 1;
      q.push_back(tail);
    }
  }
  return seen;
}

bool cut_ok(const Digraph& g, Vertex s, Vertex t, const std::vector<ArcId>& z) {
  for (ArcId id : z)
    if (!g.arc_alive(id) || g.arc(id).cap != Cap::One) return false;
  return !reach(g, s, z)[t];
}

bool star_ok(const Digraph& g, Vertex s, Vertex t, const std::vector<ArcId>& z) {
  if (!cut_ok(g, s, t, z)) return false;
  auto sside = reach(g, s, z);
  for (ArcId id : z) {
    const Arc& a = g.arc(id);
    if (!sside[a.tail] || sside[a.head]) return false;
  }
  return true;
}

Cut core_of(const Digraph& g, Vertex t, const std::vector<ArcId>& z) {
  auto tside = reach_to(g, t, z);
  Cut core;
  for (ArcId id : z)
    if (tside[g.arc(id).head]) core.push_back(id);
  return core;
}

template <class F>
void for_each_combination(const std::vector<ArcId>& pool, int size, F f) {
  std::vector<int> idx(size);
  std::vector<ArcId> cur(size);
  for (int i = 0; i < size; ++i) idx[i] = i;
  if (size == 0) {
    std::vector<ArcId> empty;
    f(empty);
    return;
  }
  if (size > static_cast<int>(pool.size())) return;
  int n = static_cast<int>(pool.size());
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

LambdaResult lambda_bounded(const Digraph& g, Vertex s, Vertex t, int bound) {
  LambdaResult res;
  // all-inf path first
  {
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
    if (seen[t]) {
      res.kind = LambdaResult::Kind::Infinite;
      return res;
    }
  }
  // arc-flow Ford-Fulkerson with BFS
  int big = bound + 2;
  std::vector<int> cap(g.arc_bound(), 0), flow(g.arc_bound(), 0);
  std::vector<std::vector<std::pair<ArcId, bool>>> adj(g.vertex_bound());
  for (ArcId i = 0; i < g.arc_bound(); ++i) {
    if (!g.arc_alive(i)) continue;
    const Arc& a = g.arc(i);
    if (a.tail == a.head) continue;
    cap[i] = a.cap == Cap::One ? 1 : big;
    adj[a.tail].emplace_back(i, true);
    adj[a.head].emplace_back(i, false);
  }
  int value = 0;
  while (value <= bound) {
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
    for (Vertex v = t; v != s;) {
      auto [id, fwd] = parent[v];
      if (fwd) {
        ++flow[id];
        v = g.arc(id).tail;
      } else {
        --flow[id];
        v = g.arc(id).head;
      }
    }
    ++value;
  }
  res.kind = value > bound ? LambdaResult::Kind::ExceedsBound : LambdaResult::Kind::Value;
  res.value = value;
  return res;
}

std::vector<StarCut> enum_star_cuts(const Digraph& g, Vertex s, Vertex t, int k, int guard) {
  auto units = g.unit_arcs();
  if (static_cast<int>(units.size()) > guard)
    throw GuardExceeded("enum_star_cuts: " + std::to_string(units.size()) +
                        " unit arcs exceed guard " + std::to_string(guard));
  std::vector<StarCut> out;
  for (int size = 0; size <= k; ++size)
    for_each_combination(units, size, [&](const std::vector<ArcId>& z) {
      if (star_ok(g, s, t, z)) out.push_back({z, core_of(g, t, z)});
    });
  return out;
}

bool is_compatible(const Digraph& g, Vertex s, Vertex t, const Cut& z, const AugPair& pair) {
  auto sside = reach(g, s, z);
  for (auto [u, v] : pair.arcs)
    if (sside[u] && !sside[v]) return false;
  Digraph ga = add_arcs(g, pair.arcs);
  if (!star_ok(ga, s, t, z)) return false;
  Cut core = core_of(ga, t, z);
  std::sort(core.begin(), core.end());
  // core must be a minimum cut of G+A
  if (!cut_ok(ga, s, t, core)) return false;
  auto lam = lambda_bounded(ga, s, t, static_cast<int>(core.size()));
  if (lam.kind != LambdaResult::Kind::Value || lam.value != static_cast<int>(core.size()))
    return false;
  // witnessing flow: valid maxflow of G+A crossing Z exactly in core, once
  // per path
  const Flow& f = pair.flow;
  if (f.value() != lam.value) return false;
  std::vector<char> unit_used(ga.arc_bound(), 0);
  std::vector<ArcId> met;
  for (const auto& path : f.paths) {
    if (path.empty()) return false;
    Vertex cur = s;
    int zcnt = 0;
    for (ArcId id : path) {
      if (!ga.arc_alive(id) || ga.arc(id).tail != cur) return false;
      if (ga.arc(id).cap == Cap::One) {
        if (unit_used[id]) return false;
        unit_used[id] = 1;
      }
      if (std::binary_search(z.begin(), z.end(), id)) {
        ++zcnt;
        met.push_back(id);
      }
      cur = ga.arc(id).head;
    }
    if (cur != t || zcnt != 1) return false;
  }
  std::sort(met.begin(), met.end());
  return met == core;
}

std::vector<CompatRow> compatibility_table(const Digraph& g, Vertex s, Vertex t, int k,
                                           int kappa, const std::vector<AugPair>& family,
                                           int guard) {
  std::vector<CompatRow> rows;
  for (auto& sc : enum_star_cuts(g, s, t, k, guard)) {
    if (static_cast<int>(sc.core.size()) < kappa) continue;
    CompatRow row;
    row.z = sc.z;
    row.core = sc.core;
    for (const auto& pair : family)
      if (oracle::is_compatible(g, s, t, sc.z, pair)) {
        row.covered = true;
        break;
      }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

BruteAnswer best_subset_answer(const std::vector<ArcId>& pool, int k, std::int64_t w,
                               const std::vector<std::int64_t>& weight_of,
                               const std::function<bool(const std::vector<ArcId>&)>& feasible) {
  BruteAnswer ans;
  bool have_lex = false;
  for (int size = 0; size <= k && size <= static_cast<int>(pool.size()); ++size) {
    for_each_combination(pool, size, [&](const std::vector<ArcId>& sel) {
      std::int64_t wt = 0;
      for (ArcId id : sel) wt += weight_of[id];
      if (wt > w) return;
      if (!feasible(sel)) return;
      if (!ans.yes || wt < ans.weight) {
        ans.yes = true;
        ans.weight = wt;
      }
      if (!have_lex) {
        have_lex = true;
        ans.cardinality = size;
      }
    });
  }
  return ans;
}

}  // namespace

BruteAnswer brute_wstcut(const Digraph& g, const std::vector<std::int64_t>& arc_weight,
                         Vertex s, Vertex t, int k, std::int64_t w) {
  auto units = g.unit_arcs();
  if (units.size() > 25) throw GuardExceeded("brute_wstcut: too many unit arcs");
  return best_subset_answer(units, k, w, arc_weight,
                            [&](const std::vector<ArcId>& sel) { return cut_ok(g, s, t, sel); });
}

BruteAnswer brute_bundled(const BundledInstance& inst) {
  int nb = static_cast<int>(inst.bundles.size());
  if (nb > 20) throw GuardExceeded("brute_bundled: too many bundles");
  // soft arcs per bundle; crisp arcs stay
  BruteAnswer ans;
  bool have_lex = false;
  std::vector<int> ids(nb);
  for (int i = 0; i < nb; ++i) ids[i] = i;
  std::vector<ArcId> pool(ids.begin(), ids.end());
  for (int size = 0; size <= inst.k && size <= nb; ++size) {
    for_each_combination(pool, size, [&](const std::vector<int>& touched) {
      std::int64_t wt = 0;
      for (int b : touched) wt += inst.bundles[b].weight;
      if (wt > inst.w) return;
      // deleting every soft arc of the touched bundles is the strongest cut
      // achievable at this touched-set
      std::vector<ArcId> del;
      for (int b : touched)
        for (ArcId id : inst.bundles[b].arcs)
          if (inst.g.arc_alive(id) && inst.g.arc(id).cap == Cap::One) del.push_back(id);
      std::sort(del.begin(), del.end());
      if (!cut_ok(inst.g, inst.s, inst.t, del)) return;
      if (!ans.yes || wt < ans.weight) {
        ans.yes = true;
        ans.weight = wt;
      }
      if (!have_lex) {
        have_lex = true;
        ans.cardinality = size;
      }
    });
  }
  return ans;
}

BruteAnswer brute_skew(const SkewInstance& inst) {
  auto arcs = inst.g.alive_arcs();
  std::vector<ArcId> pool;
  for (ArcId id : arcs)
    if (inst.g.arc(id).cap == Cap::One) pool.push_back(id);
  if (pool.size() > 22) throw GuardExceeded("brute_skew: too many arcs");
  auto feasible = [&](const std::vector<ArcId>& sel) {
    int b = static_cast<int>(inst.pairs.size());
    for (int i = 0; i < b; ++i) {
      auto seen = reach(inst.g, inst.pairs[i].first, sel);
      for (int j = i; j < b; ++j)
        if (seen[inst.pairs[j].second]) return false;
    }
    return true;
  };
  return best_subset_answer(pool, inst.k, inst.w, inst.arc_weight, feasible);
}

namespace {
bool acyclic_without(const Digraph& g, const std::vector<ArcId>& removed_arcs,
                     const std::vector<char>* removed_vertices) {
  std::vector<int> indeg(g.vertex_bound(), 0);
  auto adj = g.out_adjacency();
  auto alive_v = [&](Vertex v) {
    return g.has_vertex(v) && (!removed_vertices || !(*removed_vertices)[v]);
  };
  auto alive_a = [&](ArcId id) {
    const Arc& a = g.arc(id);
    return !std::binary_search(removed_arcs.begin(), removed_arcs.end(), id) &&
           alive_v(a.tail) && alive_v(a.head);
  };
  for (ArcId id : g.alive_arcs())
    if (alive_a(id)) {
      if (g.arc(id).tail == g.arc(id).head) return false;  // live self-loop
      ++indeg[g.arc(id).head];
    }
  std::deque<Vertex> q;
  int seen = 0, total = 0;
  for (Vertex v = 0; v < g.vertex_bound(); ++v)
    if (alive_v(v)) {
      ++total;
      if (indeg[v] == 0) q.push_back(v);
    }
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    ++seen;
    for (auto [head, id] : adj[u])
      if (alive_a(id) && --indeg[head] == 0) q.push_back(head);
  }
  return seen == total;
}
}  // namespace

BruteAnswer brute_dfas(const Digraph& g, const std::vector<std::int64_t>& arc_weight, int k,
                       std::int64_t w) {
  auto pool = g.alive_arcs();
  if (pool.size() > 22) throw GuardExceeded("brute_dfas: too many arcs");
  return best_subset_answer(pool, k, w, arc_weight, [&](const std::vector<ArcId>& sel) {
    return acyclic_without(g, sel, nullptr);
  });
}

BruteAnswer brute_dfvs(const Digraph& g, const std::vector<std::int64_t>& vertex_weight, int k,
                       std::int64_t w) {
  auto verts = g.vertices();
  if (verts.size() > 14) throw GuardExceeded("brute_dfvs: too many vertices");
  BruteAnswer ans;
  bool have_lex = false;
  std::vector<ArcId> pool(verts.begin(), verts.end());
  for (int size = 0; size <= k && size <= static_cast<int>(pool.size()); ++size) {
    for_each_combination(pool, size, [&](const std::vector<int>& sel) {
      std::int64_t wt = 0;
      for (int v : sel) wt += vertex_weight[v];
      if (wt > w) return;
      std::vector<char> removed(g.vertex_bound(), 0);
      for (int v : sel) removed[v] = 1;
      if (!acyclic_without(g, {}, &removed)) return;
      if (!ans.yes || wt < ans.weight) {
        ans.yes = true;
        ans.weight = wt;
      }
      if (!have_lex) {
        have_lex = true;
        ans.cardinality = size;
      }
    });
  }
  return ans;
}

}  // namespace flowaug::oracle
