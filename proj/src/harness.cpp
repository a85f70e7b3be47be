#include "flowaug/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "flowaug/rng.hpp"

namespace flowaug {

namespace {
Digraph make_graph(int n, const std::vector<std::tuple<int, int, Cap>>& arcs) {
  Digraph g(n);
  for (auto [u, v, c] : arcs) g.add_arc(u, v, c);
  return g;
}
}  // namespace

NamedInstance fix_path() {
  return {"G_path", make_graph(3, {{0, 1, Cap::One}, {1, 2, Cap::One}}), 0, 2};
}

NamedInstance fix_two() {
  return {"G_two",
          make_graph(4, {{0, 1, Cap::One}, {1, 3, Cap::One}, {0, 2, Cap::One}, {2, 3, Cap::One}}),
          0, 3};
}

NamedInstance fix_star() {
  // V = {s, a, b, t}: (s,a), (a,t), (a,b)
  return {"G_star", make_graph(4, {{0, 1, Cap::One}, {1, 3, Cap::One}, {1, 2, Cap::One}}), 0, 3};
}

NamedInstance fix_diam() {
  // V = {s, a, b, t}: (s,a), (a,b), (b,t), (s,b)
  return {"G_diam",
          make_graph(4, {{0, 1, Cap::One}, {1, 2, Cap::One}, {2, 3, Cap::One}, {0, 2, Cap::One}}),
          0, 3};
}

NamedInstance fix_x() {
  // G_two plus the back arc (b, a)
  return {"G_x",
          make_graph(4, {{0, 1, Cap::One},
                         {1, 3, Cap::One},
                         {0, 2, Cap::One},
                         {2, 3, Cap::One},
                         {2, 1, Cap::One}}),
          0, 3};
}

std::vector<NamedInstance> fixture_suite() {
  return {fix_path(), fix_two(), fix_star(), fix_diam(), fix_x()};
}

NamedInstance gen_ladder(int length) {
  check(length >= 2, "ladder: length must be at least 2");
  int internal = length - 1;
  Digraph g(2 + 2 * internal);
  Vertex s = 0, t = 1;
  auto p1 = [&](int c) { return 2 + 2 * (c - 1); };
  auto p2 = [&](int c) { return 3 + 2 * (c - 1); };
  // two unit paths
  for (int c = 0; c < length; ++c) {
    Vertex from1 = c == 0 ? s : p1(c);
    Vertex to1 = c == length - 1 ? t : p1(c + 1);
    g.add_arc(from1, to1, Cap::One);
    Vertex from2 = c == 0 ? s : p2(c);
    Vertex to2 = c == length - 1 ? t : p2(c + 1);
    g.add_arc(from2, to2, Cap::One);
  }
  // two-way infinity rungs keep the reachability pattern complete
  for (int c = 1; c <= internal; ++c) {
    g.add_arc(p1(c), p2(c), Cap::Inf);
    g.add_arc(p2(c), p1(c), Cap::Inf);
  }
  return {"ladder" + std::to_string(length), std::move(g), s, t};
}

NamedInstance gen_random_digraph(int n, int m, std::uint64_t seed) {
  check(n >= 2, "random-digraph: need at least two vertices");
  SplitRng rng(SplitRng::mix(seed ^ 0x9e2fULL));
  Digraph g(n);
  for (int i = 0; i < m; ++i) {
    Vertex u = static_cast<Vertex>(rng.next_below(n));
    Vertex v = static_cast<Vertex>(rng.next_below(n));
    while (v == u) v = static_cast<Vertex>(rng.next_below(n));
    g.add_arc(u, v, Cap::One);
  }
  return {"rnd-n" + std::to_string(n) + "-m" + std::to_string(m) + "-s" + std::to_string(seed),
          std::move(g), 0, n - 1};
}

NamedInstance gen_random_dag(int n, int m, std::uint64_t seed) {
  check(n >= 2, "random-dag: need at least two vertices");
  SplitRng rng(SplitRng::mix(seed ^ 0xda6ULL));
  Digraph g(n);
  for (int i = 0; i < m; ++i) {
    Vertex u = static_cast<Vertex>(rng.next_below(n - 1));
    Vertex v = u + 1 + static_cast<Vertex>(rng.next_below(n - 1 - u));
    g.add_arc(u, v, Cap::One);
  }
  return {"dag-n" + std::to_string(n) + "-m" + std::to_string(m) + "-s" + std::to_string(seed),
          std::move(g), 0, n - 1};
}

BundledInstance gen_chain_crossing() {
  // s=0, a1..a4=1..4, b1..b4=5..8, t=9
  BundledInstance inst;
  Digraph g(10);
  ArcId sa1 = g.add_arc(0, 1, Cap::One);
  ArcId a12 = g.add_arc(1, 2, Cap::One);
  ArcId a23 = g.add_arc(2, 3, Cap::One);
  ArcId a34 = g.add_arc(3, 4, Cap::One);
  ArcId a4t = g.add_arc(4, 9, Cap::One);
  ArcId sb1 = g.add_arc(0, 5, Cap::One);
  ArcId b12 = g.add_arc(5, 6, Cap::One);
  ArcId b23 = g.add_arc(6, 7, Cap::One);
  ArcId b34 = g.add_arc(7, 8, Cap::One);
  ArcId b4t = g.add_arc(8, 9, Cap::One);
  ArcId green_cross = g.add_arc(4, 5, Cap::One);   // a4 -> b1
  ArcId violet_cross = g.add_arc(2, 7, Cap::One);  // a2 -> b3
  (void)sa1;
  (void)a23;
  (void)a4t;
  (void)sb1;
  (void)b23;
  (void)b4t;
  inst.g = std::move(g);
  inst.s = 0;
  inst.t = 9;
  inst.k = 1;
  inst.w = 2;
  Bundle green;
  green.weight = 2;
  green.arcs = {a34, green_cross, b12};
  Bundle violet;
  violet.weight = 2;
  violet.arcs = {a12, violet_cross, b34};
  inst.bundles = {green, violet};
  return inst;
}

SkewInstance gen_skew_gadget(std::uint64_t seed) {
  SplitRng rng(SplitRng::mix(seed ^ 0x5137ULL));
  SkewInstance inst;
  int n = 5;
  Digraph g(n);
  int m = 6;
  inst.arc_weight.assign(m, 1);
  for (int i = 0; i < m; ++i) {
    Vertex u = static_cast<Vertex>(rng.next_below(n));
    Vertex v = static_cast<Vertex>(rng.next_below(n));
    while (v == u) v = static_cast<Vertex>(rng.next_below(n));
    g.add_arc(u, v, Cap::One);
    inst.arc_weight[i] = 1 + static_cast<std::int64_t>(rng.next_below(5));
  }
  inst.g = std::move(g);
  inst.pairs = {{0, n - 1}, {1, n - 2}};
  inst.k = 2;
  inst.w = 9;
  return inst;
}

std::uint64_t instance_hash(const Digraph& g, Vertex s, Vertex t) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::uint64_t>(g.vertex_bound()));
  mix(static_cast<std::uint64_t>(s));
  mix(static_cast<std::uint64_t>(t));
  for (ArcId id : g.alive_arcs()) {
    const Arc& a = g.arc(id);
    mix(static_cast<std::uint64_t>(a.tail) << 32 | static_cast<std::uint64_t>(a.head) << 2 |
        static_cast<std::uint64_t>(a.cap));
  }
  return h;
}

double wilson_lower(long long hits, long long trials, double z) {
  if (trials <= 0) return 0.0;
  double n = static_cast<double>(trials);
  double p = static_cast<double>(hits) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double centre = p + z2 / (2.0 * n);
  double rad = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  double lo = (centre - rad) / denom;
  return lo < 0 ? 0.0 : lo;
}

int thread_budget() {
  const char* env = std::getenv("FLOWAUG_THREADS");
  if (!env) return 1;
  int v = std::atoi(env);
  return v >= 1 ? v : 1;
}

MonteCarloReport montecarlo(const Digraph& g, Vertex s, Vertex t, int k, int kappa,
                            long long trials, std::uint64_t seed, int guard, bool mix_trivial) {
  MonteCarloReport rep;
  rep.trials = trials;
  auto cuts = oracle::enum_star_cuts(g, s, t, k, guard);
  for (auto& sc : cuts) {
    if (static_cast<int>(sc.core.size()) < kappa) continue;
    rep.rows.push_back({sc.z, sc.core, 0});
  }
  if (trials <= 0) return rep;
  int nthreads = thread_budget();
  SplitRng root(seed);
  auto worker = [&](long long lo, long long hi, std::vector<long long>& hits,
                    long long& pviol) {
    AugmentOptions opts;
    opts.mix_trivial = mix_trivial;
    for (long long tr = lo; tr < hi; ++tr) {
      AugPair pair =
          augment_randomized(g, s, t, k, kappa, nullptr, root.split(0x7100 + tr), opts);
      // postcondition: the flow is an st-maxflow of G+A with value >= kappa
      Digraph host = pair_host_graph(g, pair);
      bool ok = flow_valid(host, s, t, pair.flow);
      if (ok) {
        bool all_inf = false;
        for (const auto& path : pair.flow.paths) {
          bool inf = !path.empty();
          for (ArcId id : path) inf = inf && host.arc(id).cap == Cap::Inf;
          all_inf |= inf;
        }
        MaxflowResult mh = max_flow(host, s, t, pair.flow.value());
        if (all_inf)
          ok = mh.kind == MaxflowResult::Kind::Infinite ||
               mh.kind == MaxflowResult::Kind::ExceedsBound ||
               mh.value == pair.flow.value();
        else
          ok = mh.kind == MaxflowResult::Kind::Value && mh.value == pair.flow.value() &&
               pair.flow.value() >= std::min(kappa, pair.flow.value());
        if (ok && !all_inf && pair.flow.value() < kappa) ok = false;
      }
      if (!ok) {
        ++pviol;
        continue;
      }
      for (size_t r = 0; r < rep.rows.size(); ++r)
        if (oracle::is_compatible(g, s, t, rep.rows[r].z, pair)) ++hits[r];
    }
  };
  if (nthreads <= 1) {
    std::vector<long long> hits(rep.rows.size(), 0);
    long long pviol = 0;
    worker(0, trials, hits, pviol);
    for (size_t r = 0; r < rep.rows.size(); ++r) rep.rows[r].hits = hits[r];
    rep.postcondition_failures = pviol;
  } else {
    std::vector<std::thread> threads;
    std::vector<std::vector<long long>> hits(nthreads,
                                             std::vector<long long>(rep.rows.size(), 0));
    std::vector<long long> pviol(nthreads, 0);
    long long chunk = (trials + nthreads - 1) / nthreads;
    for (int ti = 0; ti < nthreads; ++ti) {
      long long lo = ti * chunk, hi = std::min(trials, (ti + 1) * chunk);
      if (lo >= hi) break;
      threads.emplace_back(worker, lo, hi, std::ref(hits[ti]), std::ref(pviol[ti]));
    }
    for (auto& th : threads) th.join();
    for (int ti = 0; ti < nthreads; ++ti) {
      rep.postcondition_failures += pviol[ti];
      for (size_t r = 0; r < rep.rows.size(); ++r) rep.rows[r].hits += hits[ti][r];
    }
  }
  return rep;
}

namespace {
std::string cut_spec(const Digraph& g, const Cut& z) {
  std::string out;
  for (size_t i = 0; i < z.size(); ++i) {
    const Arc& a = g.arc(z[i]);
    if (i) out += "+";
    out += std::to_string(a.tail) + ">" + std::to_string(a.head) + "#" + std::to_string(z[i]);
  }
  return out.empty() ? "-" : out;
}
}  // namespace

std::string montecarlo_csv(const Digraph& g, const MonteCarloReport& rep) {
  std::ostringstream out;
  out << "z,core_size,trials,hits,freq,wilson_lo\n";
  for (const auto& row : rep.rows) {
    char freq[64], lo[64];
    double f = rep.trials ? static_cast<double>(row.hits) / rep.trials : 0.0;
    std::snprintf(freq, sizeof freq, "%.6g", f);
    std::snprintf(lo, sizeof lo, "%.6g", wilson_lower(row.hits, rep.trials));
    out << cut_spec(g, row.z) << "," << row.core.size() << "," << rep.trials << "," << row.hits
        << "," << freq << "," << lo << "\n";
  }
  return out.str();
}

std::string montecarlo_json(const Digraph& g, const MonteCarloReport& rep) {
  std::ostringstream out;
  out << "{\"trials\":" << rep.trials
      << ",\"postcondition_failures\":" << rep.postcondition_failures << ",\"rows\":[";
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    if (i) out << ",";
    char lo[64];
    std::snprintf(lo, sizeof lo, "%.6g", wilson_lower(row.hits, rep.trials));
    out << "{\"z\":\"" << cut_spec(g, row.z) << "\",\"hits\":" << row.hits
        << ",\"wilson_lo\":" << lo << "}";
  }
  out << "]}";
  return out.str();
}

std::vector<FamilyMeasurement> measure_det_family(const std::vector<NamedInstance>& fixtures,
                                                  int k_min, int k_max) {
  std::vector<FamilyMeasurement> rows;
  for (const auto& fx : fixtures) {
    for (int k = k_min; k <= k_max; ++k) {
      auto start = std::chrono::steady_clock::now();
      auto fam = augment_deterministic(fx.g, fx.s, fx.t, k, 0, nullptr);
      auto end = std::chrono::steady_clock::now();
      FamilyMeasurement m;
      m.name = fx.name;
      m.n = fx.g.num_vertices();
      m.k = k;
      m.family_size = fam.size();
      m.millis = std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();
      rows.push_back(m);
    }
  }
  return rows;
}

std::string family_csv(const std::vector<FamilyMeasurement>& rows) {
  std::ostringstream out;
  out << "instance,n,k,family_size,millis\n";
  for (const auto& r : rows)
    out << r.name << "," << r.n << "," << r.k << "," << r.family_size << "," << r.millis << "\n";
  return out.str();
}

}  // namespace flowaug
