#include "flowaug/flow.hpp"

#include <algorithm>
#include <deque>
#include <queue>

namespace flowaug {

namespace {

struct ResidualNet {
  // Per vertex: (arc id, forward?) sorted by arc id, forward before backward.
  std::vector<std::vector<std::pair<ArcId, bool>>> adj;
  std::vector<int> cap;   // effective capacity (inf squashed to a finite bound)
  std::vector<int> flow;
};

ResidualNet make_net(const Digraph& g, int inf_cap) {
  ResidualNet net;
  net.adj.resize(g.vertex_bound());
  net.cap.assign(g.arc_bound(), 0);
  net.flow.assign(g.arc_bound(), 0);
  for (ArcId i = 0; i < g.arc_bound(); ++i) {
    if (!g.arc_alive(i)) continue;
    const Arc& a = g.arc(i);
    if (a.tail == a.head) continue;  // self-loops never lie on a simple path
    net.cap[i] = a.cap == Cap::One ? 1 : inf_cap;
    net.adj[a.tail].emplace_back(i, true);
    net.adj[a.head].emplace_back(i, false);
  }
  for (auto& lst : net.adj) std::sort(lst.begin(), lst.end());
  return net;
}

// One BFS augmentation; returns true if t was reached (and pushes one unit).
bool augment_once(const Digraph& g, ResidualNet& net, Vertex s, Vertex t) {
  std::vector<std::pair<ArcId, bool>> parent(g.vertex_bound(), {-1, false});
  std::vector<char> seen(g.vertex_bound(), 0);
  std::deque<Vertex> q{s};
  seen[s] = 1;
  while (!q.empty() && !seen[t]) {
    Vertex u = q.front();
    q.pop_front();
    for (auto [id, fwd] : net.adj[u]) {
      const Arc& a = g.arc(id);
      Vertex next = fwd ? a.head : a.tail;
      if (fwd && net.flow[id] >= net.cap[id]) continue;
      if (!fwd && net.flow[id] <= 0) continue;
      if (seen[next]) continue;
      seen[next] = 1;
      parent[next] = {id, fwd};
      q.push_back(next);
    }
  }
  if (!seen[t]) return false;
  Vertex v = t;
  while (v != s) {
    auto [id, fwd] = parent[v];
    const Arc& a = g.arc(id);
    if (fwd) {
      ++net.flow[id];
      v = a.tail;
    } else {
      --net.flow[id];
      v = a.head;
    }
  }
  return true;
}

// Path decomposition by ascending arc id with cycle splicing.
Flow decompose(const Digraph& g, const ResidualNet& net, Vertex s, Vertex t, int value) {
  std::vector<int> rem = net.flow;
  std::vector<std::vector<ArcId>> out_arcs(g.vertex_bound());
  for (ArcId i = 0; i < g.arc_bound(); ++i)
    if (rem[i] > 0) out_arcs[g.arc(i).tail].push_back(i);
  Flow f;
  for (int p = 0; p < value; ++p) {
    std::vector<ArcId> walk;
    std::vector<int> at_vertex(g.vertex_bound(), -1);  // index into walk prefix
    Vertex cur = s;
    at_vertex[s] = 0;
    while (cur != t) {
      ArcId pick = -1;
      for (ArcId id : out_arcs[cur])
        if (rem[id] > 0) {
          pick = id;
          break;
        }
      check(pick >= 0, "flow decomposition: conservation violated");
      --rem[pick];
      walk.push_back(pick);
      cur = g.arc(pick).head;
      if (cur != t && at_vertex[cur] >= 0) {
        // splice out the cycle just closed
        int start = at_vertex[cur];
        for (size_t i = start; i < walk.size(); ++i) {
          const Arc& a = g.arc(walk[i]);
          if (i + 1 < walk.size()) at_vertex[a.head] = -1;
        }
        walk.resize(start);
      } else if (cur != t) {
        at_vertex[cur] = static_cast<int>(walk.size());
      }
    }
    f.paths.push_back(std::move(walk));
  }
  return f;
}

std::vector<char> bfs_over(const Digraph& g,
                           const std::vector<std::vector<std::pair<ArcId, bool>>>& adj,
                           const std::vector<int>& cap, const std::vector<int>& flow,
                           std::vector<Vertex> sources) {
  std::vector<char> seen(g.vertex_bound(), 0);
  std::deque<Vertex> q;
  for (Vertex v : sources)
    if (!seen[v]) {
      seen[v] = 1;
      q.push_back(v);
    }
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (auto [id, fwd] : adj[u]) {
      const Arc& a = g.arc(id);
      bool usable = fwd ? flow[id] < cap[id] : flow[id] > 0;
      if (!usable) continue;
      Vertex next = fwd ? a.head : a.tail;
      if (!seen[next]) {
        seen[next] = 1;
        q.push_back(next);
      }
    }
  }
  return seen;
}

// Residual reachability *to* t: BFS on reversed residual arcs.
std::vector<char> co_reach_t(const Digraph& g, const ResidualNet& net, Vertex t) {
  std::vector<std::vector<std::pair<ArcId, bool>>> radj(g.vertex_bound());
  for (Vertex v = 0; v < g.vertex_bound(); ++v)
    for (auto [id, fwd] : net.adj[v]) {
      const Arc& a = g.arc(id);
      Vertex to = fwd ? a.head : a.tail;
      radj[to].emplace_back(id, fwd);  // arc enters `to` in the residual sense
    }
  std::vector<char> seen(g.vertex_bound(), 0);
  std::deque<Vertex> q{t};
  seen[t] = 1;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (auto [id, fwd] : radj[u]) {
      const Arc& a = g.arc(id);
      bool usable = fwd ? net.flow[id] < net.cap[id] : net.flow[id] > 0;
      if (!usable) continue;
      Vertex from = fwd ? a.tail : a.head;
      if (!seen[from]) {
        seen[from] = 1;
        q.push_back(from);
      }
    }
  }
  return seen;
}

std::optional<std::vector<ArcId>> inf_only_path(const Digraph& g, Vertex s, Vertex t) {
  std::vector<ArcId> parent(g.vertex_bound(), -1);
  std::vector<char> seen(g.vertex_bound(), 0);
  auto adj = g.out_adjacency();
  std::deque<Vertex> q{s};
  seen[s] = 1;
  while (!q.empty() && !seen[t]) {
    Vertex u = q.front();
    q.pop_front();
    for (auto [head, id] : adj[u]) {
      if (g.arc(id).cap != Cap::Inf || seen[head] || head == u) continue;
      seen[head] = 1;
      parent[head] = id;
      q.push_back(head);
    }
  }
  if (!seen[t]) return std::nullopt;
  std::vector<ArcId> path;
  for (Vertex v = t; v != s; v = g.arc(parent[v]).tail) path.push_back(parent[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

struct SolvedFlow {
  ResidualNet net;
  int value = 0;
};

SolvedFlow solve_flow(const Digraph& g, Vertex s, Vertex t, int cap_limit) {
  SolvedFlow sf;
  sf.net = make_net(g, cap_limit + 1);
  while (sf.value <= cap_limit && augment_once(g, sf.net, s, t)) ++sf.value;
  return sf;
}

}  // namespace

MaxflowResult max_flow(const Digraph& g, Vertex s, Vertex t, int bound) {
  if (s == t) throw std::invalid_argument("max_flow: s == t");
  if (!g.has_vertex(s) || !g.has_vertex(t)) throw std::invalid_argument("max_flow: bad terminal");
  if (bound < 0) bound = 0;
  MaxflowResult res;
  if (auto p = inf_only_path(g, s, t)) {
    res.kind = MaxflowResult::Kind::Infinite;
    res.flow.paths.push_back(std::move(*p));
    return res;
  }
  SolvedFlow sf = solve_flow(g, s, t, bound);
  res.value = sf.value;
  res.kind = sf.value > bound ? MaxflowResult::Kind::ExceedsBound : MaxflowResult::Kind::Value;
  res.flow = decompose(g, sf.net, s, t, sf.value);
  return res;
}

int lambda_exact(const Digraph& g, Vertex s, Vertex t) {
  MaxflowResult r = max_flow(g, s, t, g.num_unit_arcs());
  check(r.kind == MaxflowResult::Kind::Value, "lambda_exact: infinite lambda");
  return r.value;
}

bool flow_valid(const Digraph& g, Vertex s, Vertex t, const Flow& f) {
  std::vector<char> unit_used(g.arc_bound(), 0);
  for (const auto& path : f.paths) {
    if (path.empty()) return false;
    Vertex cur = s;
    for (ArcId id : path) {
      if (!g.arc_alive(id)) return false;
      const Arc& a = g.arc(id);
      if (a.tail != cur) return false;
      if (a.cap == Cap::One) {
        if (unit_used[id]) return false;
        unit_used[id] = 1;
      }
      cur = a.head;
    }
    if (cur != t) return false;
  }
  return true;
}

std::vector<Vertex> path_vertices(const Digraph& g, const std::vector<ArcId>& path, Vertex s) {
  std::vector<Vertex> vs{s};
  for (ArcId id : path) vs.push_back(g.arc(id).head);
  return vs;
}

Digraph residual(const Digraph& g, Vertex s, Vertex t, const Flow& f) {
  if (!flow_valid(g, s, t, f)) throw std::invalid_argument("residual: not a flow in G");
  Digraph out = g;
  std::vector<char> drop(g.arc_bound(), 0);
  for (const auto& path : f.paths)
    for (ArcId id : path) {
      const Arc& a = g.arc(id);
      out.add_arc(a.head, a.tail, Cap::One);
      if (a.cap == Cap::One) drop[id] = 1;
    }
  for (ArcId id = 0; id < g.arc_bound(); ++id)
    if (drop[id]) out.remove_arc(id);
  return out;
}

std::vector<char> reach_avoiding(const Digraph& g, Vertex from, const Cut& banned) {
  std::vector<char> seen(g.vertex_bound(), 0);
  if (!g.has_vertex(from)) return seen;
  auto adj = g.out_adjacency();
  std::deque<Vertex> q{from};
  seen[from] = 1;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (auto [head, id] : adj[u]) {
      if (seen[head]) continue;
      if (std::binary_search(banned.begin(), banned.end(), id)) continue;
      seen[head] = 1;
      q.push_back(head);
    }
  }
  return seen;
}

namespace {
void validate_cut_arcs(const Digraph& g, const Cut& z) {
  for (ArcId id : z) {
    if (!g.arc_alive(id)) throw std::invalid_argument("cut references dead arc");
    if (g.arc(id).cap != Cap::One)
      throw std::invalid_argument("cut contains an infinity-capacity arc");
  }
}
}  // namespace

bool is_st_cut(const Digraph& g, Vertex s, Vertex t, const Cut& z) {
  validate_cut_arcs(g, z);
  auto seen = reach_avoiding(g, s, z);
  return !seen[t];
}

Cut mincut_closest(const Digraph& g, Vertex s, Vertex t, CutSide side) {
  if (inf_only_path(g, s, t)) throw std::invalid_argument("mincut_closest: no st-cut exists");
  SolvedFlow sf = solve_flow(g, s, t, g.num_unit_arcs());
  std::vector<char> sside;
  if (side == CutSide::S) {
    sside = bfs_over(g, sf.net.adj, sf.net.cap, sf.net.flow, {s});
  } else {
    auto treach = co_reach_t(g, sf.net, t);
    sside.assign(g.vertex_bound(), 0);
    for (Vertex v = 0; v < g.vertex_bound(); ++v)
      sside[v] = (g.has_vertex(v) && !treach[v]) ? 1 : 0;
  }
  Cut cut;
  for (ArcId i = 0; i < g.arc_bound(); ++i) {
    if (!g.arc_alive(i)) continue;
    const Arc& a = g.arc(i);
    if (sside[a.tail] && !sside[a.head]) {
      check(a.cap == Cap::One, "mincut_closest: infinity arc crosses the cut");
      cut.push_back(i);
    }
  }
  check(static_cast<int>(cut.size()) == sf.value, "mincut_closest: Menger violated");
  return cut;
}

bool is_star_cut(const Digraph& g, Vertex s, Vertex t, const Cut& z) {
  validate_cut_arcs(g, z);
  auto seen = reach_avoiding(g, s, z);
  if (seen[t]) return false;
  for (ArcId id : z) {
    const Arc& a = g.arc(id);
    if (!seen[a.tail] || seen[a.head]) return false;
  }
  return true;
}

Cut core_cut(const Digraph& g, Vertex s, Vertex t, const Cut& z) {
  if (!is_star_cut(g, s, t, z)) throw std::invalid_argument("core_cut: Z is not a star st-cut");
  // reverse reachability to t in G-Z
  auto in_adj = g.in_adjacency();
  std::vector<char> to_t(g.vertex_bound(), 0);
  std::deque<Vertex> q{t};
  to_t[t] = 1;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (auto [tail, id] : in_adj[u]) {
      if (to_t[tail]) continue;
      if (std::binary_search(z.begin(), z.end(), id)) continue;
      to_t[tail] = 1;
      q.push_back(tail);
    }
  }
  Cut core;
  for (ArcId id : z)
    if (to_t[g.arc(id).head]) core.push_back(id);
  // core is a minimal st-cut
  check(is_st_cut(g, s, t, core), "core_cut: core is not an st-cut");
  for (size_t i = 0; i < core.size(); ++i) {
    Cut sub;
    for (size_t j = 0; j < core.size(); ++j)
      if (j != i) sub.push_back(core[j]);
    check(!is_st_cut(g, s, t, sub), "core_cut: core is not minimal");
  }
  return core;
}

bool is_compatible(const Digraph& g, Vertex s, Vertex t, const Cut& z, const AugPair& pair) {
  if (!is_star_cut(g, s, t, z)) throw std::invalid_argument("is_compatible: Z not a star st-cut");
  auto sside = reach_avoiding(g, s, z);
  for (auto [u, v] : pair.arcs)
    if (sside[u] && !sside[v]) return false;
  Digraph ga = add_arcs(g, pair.arcs);
  check(is_star_cut(ga, s, t, z), "is_compatible: Z must stay a star cut in G+A");
  Cut core = core_cut(ga, s, t, z);
  MaxflowResult mf = max_flow(ga, s, t, static_cast<int>(core.size()));
  if (mf.kind != MaxflowResult::Kind::Value || mf.value != static_cast<int>(core.size()))
    return false;
  // witnessing flow: maxflow of G+A, one core arc per path, no other Z arc
  const Flow& f = pair.flow;
  if (!flow_valid(ga, s, t, f)) return false;
  if (f.value() != mf.value) return false;
  std::vector<ArcId> met;
  for (const auto& path : f.paths) {
    int cnt = 0;
    for (ArcId id : path)
      if (std::binary_search(z.begin(), z.end(), id)) {
        ++cnt;
        met.push_back(id);
      }
    if (cnt != 1) return false;
  }
  std::sort(met.begin(), met.end());
  return met == core;
}

BottleneckResult bottleneck_arcs(const Digraph& g, Vertex s, Vertex t) {
  BottleneckResult out;
  if (inf_only_path(g, s, t)) {
    out.lambda_infinite = true;
    return out;
  }
  SolvedFlow sf = solve_flow(g, s, t, g.num_unit_arcs());
  for (ArcId i = 0; i < g.arc_bound(); ++i) {
    if (!g.arc_alive(i) || g.arc(i).cap != Cap::One || sf.net.flow[i] <= 0) continue;
    const Arc& a = g.arc(i);
    auto seen = bfs_over(g, sf.net.adj, sf.net.cap, sf.net.flow, {s, a.tail});
    if (!seen[t] && !seen[a.head]) out.arcs.push_back(i);
  }
  return out;
}

}  // namespace flowaug
