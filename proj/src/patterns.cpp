#include "flowaug/patterns.hpp"

#include <algorithm>
#include <deque>

namespace flowaug {

bool pattern_transitive(const Pattern& h) {
  int n = static_cast<int>(h.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (h[a][b] && h[b][c] && !h[a][c]) return false;
  return true;
}

int pattern_edge_count(const Pattern& h) {
  int cnt = 0;
  for (const auto& row : h)
    for (char x : row) cnt += x ? 1 : 0;
  return cnt;
}

PatternContext::PatternContext(const Digraph& g, Vertex s, Vertex t, const Flow& maxflow)
    : g_(&g), s_(s), t_(t), flow_(maxflow) {
  check(flow_valid(g, s, t, flow_), "PatternContext: invalid flow");
  int lam = lambda();
  pverts_.resize(lam);
  pos_.assign(lam, std::vector<int>(g.vertex_bound(), -1));
  for (int i = 0; i < lam; ++i) {
    pverts_[i] = path_vertices(g, flow_.paths[i], s);
    for (size_t j = 0; j < pverts_[i].size(); ++j) {
      check(pos_[i][pverts_[i][j]] < 0, "PatternContext: flow path revisits a vertex");
      pos_[i][pverts_[i][j]] = static_cast<int>(j);
    }
  }
  // residual adjacency: G minus unit path arcs, plus one reversal per
  // path-arc occurrence
  radj_.resize(g.vertex_bound());
  std::vector<char> on_path(g.arc_bound(), 0);
  for (const auto& p : flow_.paths)
    for (ArcId id : p) {
      const Arc& a = g.arc(id);
      radj_[a.head].push_back(a.tail);
      if (a.cap == Cap::One) on_path[id] = 1;
    }
  for (ArcId id = 0; id < g.arc_bound(); ++id) {
    if (!g.arc_alive(id) || on_path[id]) continue;
    const Arc& a = g.arc(id);
    if (a.tail != a.head) radj_[a.tail].push_back(a.head);
  }
  reach_cache_.resize(g.vertex_bound());
}

int PatternContext::pos_on_path(int i, Vertex v) const {
  if (v < 0 || v >= static_cast<int>(pos_[i].size())) return -1;
  return pos_[i][v];
}

int PatternContext::cut_arc_index(const Cut& c, int i) const {
  int found = -1;
  const auto& path = flow_.paths[i];
  for (size_t j = 0; j < path.size(); ++j)
    if (std::binary_search(c.begin(), c.end(), path[j])) {
      check(found < 0, "cut meets a flow path twice");
      found = static_cast<int>(j);
    }
  check(found >= 0, "cut misses a flow path");
  return found;
}

bool PatternContext::after_cut(const Cut& c, int i, Vertex v) const {
  int p = pos_on_path(i, v);
  check(p >= 0, "after_cut: vertex not on path");
  return p > cut_arc_index(c, i);
}

const std::vector<char>& PatternContext::res_reach_set(Vertex v) {
  check(g_->has_vertex(v), "res_reach: unknown vertex");
  if (reach_cache_[v]) return *reach_cache_[v];
  std::vector<char> seen(g_->vertex_bound(), 0);
  std::deque<Vertex> q{v};
  seen[v] = 1;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (Vertex w : radj_[u])
      if (!seen[w]) {
        seen[w] = 1;
        q.push_back(w);
      }
  }
  reach_cache_[v] = std::move(seen);
  return *reach_cache_[v];
}

ResReach PatternContext::res_reach(Vertex v) {
  check(lambda() > 0, "res_reach: lambda must be positive");
  ResReach rr;
  rr.reach = res_reach_set(v);
  bool has_s = rr.reach[s_] != 0, has_t = rr.reach[t_] != 0;
  check(!(has_t && !has_s), "res_reach: t reachable but s is not");
  if (has_s && !has_t) {
    rr.cls = ResReachClass::MincutBoundary;
    Cut c = out_cut(*g_, rr.reach);
    check(static_cast<int>(c.size()) == lambda() && is_st_cut(*g_, s_, t_, c),
          "res_reach: boundary is not an st-mincut");
  } else if (has_s && has_t) {
    rr.cls = ResReachClass::TReachable;
  } else {
    rr.cls = ResReachClass::Dead;
    check(out_cut(*g_, rr.reach).empty(), "res_reach: dead class has outgoing arcs");
  }
  return rr;
}

Vertex PatternContext::last_reach(Vertex v, int i) {
  const auto& reach = res_reach_set(v);
  const auto& pv = pverts_[i];
  Vertex last = -1;
  size_t j = 0;
  for (; j < pv.size(); ++j) {
    if (!reach[pv[j]]) break;
    last = pv[j];
  }
  // reachable vertices of P_i form a prefix
  for (; j < pv.size(); ++j)
    check(!reach[pv[j]], "last_reach: reachable path vertices are not a prefix");
  return last;
}

Pattern PatternContext::pattern() {
  size_t lam = static_cast<size_t>(lambda());
  for (size_t i = 0; i < lam; ++i)
    check(pverts_[i].size() >= 3, "pattern: a flow path has no internal vertex");
  Pattern h(lam, std::vector<char>(lam, 0));
  for (size_t i = 0; i < lam; ++i) {
    for (size_t j = 1; j + 1 < pverts_[i].size(); ++j) {
      const auto& reach = res_reach_set(pverts_[i][j]);
      for (size_t jj = 0; jj < lam; ++jj) {
        if (h[i][jj]) continue;
        for (size_t q = 1; q + 1 < pverts_[jj].size(); ++q)
          if (reach[pverts_[jj][q]]) {
            h[i][jj] = 1;
            break;
          }
      }
    }
    check(h[i][i], "pattern: missing self-loop");
  }
  return h;
}

Vertex PatternContext::leader(const Pattern& h, const Cut& c, int i) {
  for (Vertex v : pverts_[i]) {
    bool ok = true;
    for (int j = 0; j < lambda() && ok; ++j) {
      if (!h[i][j]) continue;
      Vertex lr = last_reach(v, j);
      if (lr < 0 || !after_cut(c, j, lr)) ok = false;
    }
    if (ok) return v;
  }
  check(false, "leader: t must be feasible");
  return -1;
}

std::optional<Cut> PatternContext::h_subsequent(const Pattern& h, const Cut& c) {
  int lam = lambda();
  std::vector<Vertex> leaders(lam);
  for (int i = 0; i < lam; ++i) {
    leaders[i] = leader(h, c, i);
    if (res_reach_set(leaders[i])[t_]) return std::nullopt;
  }
  std::vector<char> x(g_->vertex_bound(), 0);
  for (int i = 0; i < lam; ++i) {
    const auto& r = res_reach_set(leaders[i]);
    for (Vertex v = 0; v < g_->vertex_bound(); ++v) x[v] |= r[v];
  }
  Cut next = out_cut(*g_, x);
  check(static_cast<int>(next.size()) == lam && is_st_cut(*g_, s_, t_, next),
        "h_subsequent: boundary is not an st-mincut");
  for (int i = 0; i < lam; ++i)
    check(cut_arc_index(next, i) > cut_arc_index(c, i),
          "h_subsequent: cut fails to advance on some path");
  return next;
}

std::vector<Cut> PatternContext::h_sequence(const Pattern& h) {
  check(has_proper_boundaries(*g_, s_, t_), "h_sequence: instance lacks proper boundaries");
  std::vector<Cut> cuts;
  cuts.push_back(mincut_closest(*g_, s_, t_, CutSide::S));
  {
    Cut dplus;
    for (ArcId id : g_->alive_arcs())
      if (g_->arc(id).tail == s_ && g_->arc(id).head != s_) dplus.push_back(id);
    check(cuts[0] == dplus, "h_sequence: C_1 must equal delta+(s)");
  }
  while (true) {
    auto next = h_subsequent(h, cuts.back());
    if (!next) break;
    cuts.push_back(std::move(*next));
  }
  check(cuts.size() >= 2, "h_sequence: ell must be at least 2 with proper boundaries");
  if (cuts.size() >= 3)
    check(pattern_transitive(h), "h_sequence: pattern must be transitive when ell >= 3");
  return cuts;
}

bool has_proper_boundaries(const Digraph& g, Vertex s, Vertex t) {
  MaxflowResult mf = max_flow(g, s, t, g.num_unit_arcs());
  check(mf.kind == MaxflowResult::Kind::Value && mf.value >= 1,
        "has_proper_boundaries: lambda must be finite and positive");
  Cut dplus, dminus;
  for (ArcId id : g.alive_arcs()) {
    const Arc& a = g.arc(id);
    if (a.tail == a.head) continue;
    if (a.tail == s) {
      if (a.cap == Cap::Inf) return false;
      dplus.push_back(id);
    }
    if (a.head == t) {
      if (a.cap == Cap::Inf) return false;
      dminus.push_back(id);
    }
  }
  if (static_cast<int>(dplus.size()) != mf.value) return false;
  if (static_cast<int>(dminus.size()) != mf.value) return false;
  std::vector<ArcId> inter;
  std::set_intersection(dplus.begin(), dplus.end(), dminus.begin(), dminus.end(),
                        std::back_inserter(inter));
  if (!inter.empty()) return false;
  return is_st_cut(g, s, t, dplus) && is_st_cut(g, s, t, dminus);
}

Cut out_cut(const Digraph& g, const std::vector<char>& x) {
  Cut c;
  for (ArcId id = 0; id < g.arc_bound(); ++id) {
    if (!g.arc_alive(id)) continue;
    const Arc& a = g.arc(id);
    if (x[a.tail] && !x[a.head]) {
      check(a.cap == Cap::One, "out_cut: infinity arc leaves the set");
      c.push_back(id);
    }
  }
  return c;
}

}  // namespace flowaug
