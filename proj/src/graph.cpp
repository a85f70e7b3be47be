#include "flowaug/graph.hpp"

#include <algorithm>
#include <sstream>

namespace flowaug {

std::vector<std::vector<std::pair<Vertex, ArcId>>> Digraph::out_adjacency() const {
  std::vector<std::vector<std::pair<Vertex, ArcId>>> adj(vertex_bound());
  for (ArcId i = 0; i < arc_bound(); ++i) {
    const Arc& a = arcs_[i];
    if (a.alive) adj[a.tail].emplace_back(a.head, i);
  }
  return adj;
}

std::vector<std::vector<std::pair<Vertex, ArcId>>> Digraph::in_adjacency() const {
  std::vector<std::vector<std::pair<Vertex, ArcId>>> adj(vertex_bound());
  for (ArcId i = 0; i < arc_bound(); ++i) {
    const Arc& a = arcs_[i];
    if (a.alive) adj[a.head].emplace_back(a.tail, i);
  }
  return adj;
}

Digraph add_arcs(const Digraph& g, const std::vector<std::pair<Vertex, Vertex>>& pairs) {
  Digraph out = g;
  for (auto [u, v] : pairs) {
    if (!g.has_vertex(u) || !g.has_vertex(v))
      throw std::invalid_argument("add_arcs: unknown vertex id");
    out.add_arc(u, v, Cap::Inf);
  }
  return out;
}

std::pair<Digraph, VertexMap> contract(const Digraph& g, const std::vector<Vertex>& x,
                                       Vertex target, Vertex opposite_terminal) {
  std::vector<char> in_x(g.vertex_bound(), 0);
  bool target_in_x = false;
  for (Vertex v : x) {
    if (!g.has_vertex(v)) throw std::invalid_argument("contract: unknown vertex id");
    if (v == opposite_terminal)
      throw std::invalid_argument("contract: X contains the opposite terminal");
    in_x[v] = 1;
    if (v == target) target_in_x = true;
  }
  if (!target_in_x) throw std::invalid_argument("contract: target not in X");

  VertexMap vm;
  vm.to.assign(g.vertex_bound(), -1);
  Digraph out = g;
  for (Vertex v = 0; v < g.vertex_bound(); ++v) {
    if (!g.has_vertex(v)) continue;
    vm.to[v] = in_x[v] ? target : v;
  }
  // Rebuild: re-attach arcs, drop intra-X arcs, drop merged vertices.
  Digraph fresh(g.vertex_bound());
  for (Vertex v = 0; v < g.vertex_bound(); ++v)
    if (!g.has_vertex(v) || (in_x[v] && v != target)) fresh.remove_vertex(v);
  // Preserve arc ids: mirror the arc table index-by-index.
  for (ArcId i = 0; i < g.arc_bound(); ++i) {
    const Arc& a = g.arc(i);
    Vertex nt = a.alive ? vm.to[a.tail] : -1;
    Vertex nh = a.alive ? vm.to[a.head] : -1;
    bool keep = a.alive && !(in_x[a.tail] && in_x[a.head]);
    ArcId id = fresh.add_arc_raw(Arc{keep ? nt : -1, keep ? nh : -1, a.cap, keep});
    (void)id;
  }
  return {std::move(fresh), std::move(vm)};
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream iss(line);
  std::string t;
  while (iss >> t) toks.push_back(t);
  return toks;
}

long long parse_int(const std::string& tok, int line, const char* what) {
  try {
    size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    throw ParseError(line, std::string("bad ") + what + " '" + tok + "'");
  }
}

}  // namespace

Instance parse_instance(const std::string& text) {
  Instance inst;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool have_p = false;
  int n = 0, m = 0, arcs_seen = 0;
  bool have_s = false, have_t = false;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    auto toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string& kind = toks[0];
    if (kind == "p") {
      if (have_p) throw ParseError(lineno, "duplicate problem line");
      if (toks.size() != 4 || toks[1] != "faug") throw ParseError(lineno, "expected 'p faug <n> <m>'");
      n = static_cast<int>(parse_int(toks[2], lineno, "vertex count"));
      m = static_cast<int>(parse_int(toks[3], lineno, "arc count"));
      if (n < 0 || m < 0) throw ParseError(lineno, "negative size");
      inst.g = Digraph(n);
      have_p = true;
      continue;
    }
    if (!have_p) throw ParseError(lineno, "content before problem line");
    if (kind == "s" || kind == "t") {
      if (toks.size() != 2) throw ParseError(lineno, "expected one vertex id");
      Vertex v = static_cast<Vertex>(parse_int(toks[1], lineno, "vertex id"));
      if (v < 0 || v >= n) throw ParseError(lineno, "vertex id out of range");
      if (kind == "s") {
        if (have_s) throw ParseError(lineno, "duplicate s declaration");
        inst.s = v;
        have_s = true;
      } else {
        if (have_t) throw ParseError(lineno, "duplicate t declaration");
        inst.t = v;
        have_t = true;
      }
    } else if (kind == "a") {
      if (toks.size() != 4) throw ParseError(lineno, "expected 'a <tail> <head> <cap>'");
      Vertex u = static_cast<Vertex>(parse_int(toks[1], lineno, "tail"));
      Vertex v = static_cast<Vertex>(parse_int(toks[2], lineno, "head"));
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw ParseError(lineno, "arc references undeclared vertex");
      Cap c;
      if (toks[3] == "1")
        c = Cap::One;
      else if (toks[3] == "inf")
        c = Cap::Inf;
      else
        throw ParseError(lineno, "capacity must be 1 or inf");
      inst.g.add_arc(u, v, c);
      ++arcs_seen;
    } else if (kind == "k") {
      if (toks.size() != 2) throw ParseError(lineno, "expected 'k <k>'");
      inst.k = static_cast<int>(parse_int(toks[1], lineno, "k"));
      inst.has_k = true;
    } else if (kind == "w") {
      if (toks.size() != 2) throw ParseError(lineno, "expected 'w <W>'");
      inst.w = parse_int(toks[1], lineno, "W");
      inst.has_w = true;
    } else if (kind == "b") {
      if (toks.size() < 3) throw ParseError(lineno, "expected 'b <weight> <arc-idx>...'");
      Bundle b;
      b.weight = parse_int(toks[1], lineno, "bundle weight");
      for (size_t i = 2; i < toks.size(); ++i) {
        ArcId a = static_cast<ArcId>(parse_int(toks[i], lineno, "arc index"));
        if (a < 0 || a >= arcs_seen) throw ParseError(lineno, "arc index out of range");
        b.arcs.push_back(a);
      }
      inst.bundles.push_back(std::move(b));
    } else if (kind == "vw") {
      if (toks.size() != 3) throw ParseError(lineno, "expected 'vw <vertex> <weight>'");
      Vertex v = static_cast<Vertex>(parse_int(toks[1], lineno, "vertex id"));
      if (v < 0 || v >= n) throw ParseError(lineno, "vertex id out of range");
      inst.vertex_weights.emplace_back(v, parse_int(toks[2], lineno, "vertex weight"));
    } else if (kind == "q") {
      if (toks.size() != 3) throw ParseError(lineno, "expected 'q <s_i> <t_i>'");
      Vertex a = static_cast<Vertex>(parse_int(toks[1], lineno, "terminal"));
      Vertex b = static_cast<Vertex>(parse_int(toks[2], lineno, "terminal"));
      if (a < 0 || a >= n || b < 0 || b >= n) throw ParseError(lineno, "terminal out of range");
      inst.pairs.emplace_back(a, b);
    } else {
      throw ParseError(lineno, "malformed line '" + kind + "...'");
    }
  }
  if (!have_p) throw ParseError(0, "missing problem line");
  if (arcs_seen != m) throw ParseError(0, "arc count mismatch: declared " + std::to_string(m) +
                                              ", found " + std::to_string(arcs_seen));
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  // Alive arcs are renumbered densely; bundle indices follow.
  std::vector<int> newid(inst.g.arc_bound(), -1);
  std::vector<ArcId> alive = inst.g.alive_arcs();
  for (size_t i = 0; i < alive.size(); ++i) newid[alive[i]] = static_cast<int>(i);
  out << "p faug " << inst.g.vertex_bound() << " " << alive.size() << "\n";
  if (inst.s >= 0) out << "s " << inst.s << "\n";
  if (inst.t >= 0) out << "t " << inst.t << "\n";
  for (ArcId id : alive) {
    const Arc& a = inst.g.arc(id);
    out << "a " << a.tail << " " << a.head << " " << (a.cap == Cap::One ? "1" : "inf") << "\n";
  }
  if (inst.has_k) out << "k " << inst.k << "\n";
  if (inst.has_w) out << "w " << inst.w << "\n";
  for (const auto& b : inst.bundles) {
    out << "b " << b.weight;
    for (ArcId a : b.arcs) out << " " << newid[a];
    out << "\n";
  }
  for (auto [v, w] : inst.vertex_weights) out << "vw " << v << " " << w << "\n";
  for (auto [a, b] : inst.pairs) out << "q " << a << " " << b << "\n";
  return out.str();
}

bool same_structure(const Instance& a, const Instance& b) {
  if (a.s != b.s || a.t != b.t || a.has_k != b.has_k || a.has_w != b.has_w) return false;
  if (a.has_k && a.k != b.k) return false;
  if (a.has_w && a.w != b.w) return false;
  auto arcs_of = [](const Instance& i) {
    std::vector<std::tuple<Vertex, Vertex, int>> v;
    for (ArcId id : i.g.alive_arcs()) {
      const Arc& arc = i.g.arc(id);
      v.emplace_back(arc.tail, arc.head, static_cast<int>(arc.cap));
    }
    return v;
  };
  if (arcs_of(a) != arcs_of(b)) return false;
  if (a.g.vertices() != b.g.vertices()) return false;
  auto bundles_of = [](const Instance& i) {
    std::vector<std::pair<std::int64_t, std::vector<ArcId>>> v;
    std::vector<int> newid(i.g.arc_bound(), -1);
    auto alive = i.g.alive_arcs();
    for (size_t j = 0; j < alive.size(); ++j) newid[alive[j]] = static_cast<int>(j);
    for (const auto& b : i.bundles) {
      std::vector<ArcId> arcs;
      for (ArcId x : b.arcs) arcs.push_back(newid[x]);
      v.emplace_back(b.weight, arcs);
    }
    return v;
  };
  return bundles_of(a) == bundles_of(b) && a.vertex_weights == b.vertex_weights &&
         a.pairs == b.pairs;
}

}  // namespace flowaug
