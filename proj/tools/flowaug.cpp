#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "flowaug/augment.hpp"
#include "flowaug/derandom.hpp"
#include "flowaug/harness.hpp"
#include "flowaug/oracle.hpp"
#include "flowaug/solvers.hpp"

using nlohmann::json;
using namespace flowaug;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::vector<std::int64_t> arc_weights_of(const Instance& inst) {
  // singleton bundles double as arc weights; unweighted arcs default to 1
  std::vector<std::int64_t> w(inst.g.arc_bound(), 1);
  for (const auto& b : inst.bundles)
    for (ArcId id : b.arcs) w[id] = b.weight;
  return w;
}

json cut_json(const Digraph& g, const std::vector<ArcId>& arcs) {
  json out = json::array();
  for (ArcId id : arcs)
    out.push_back({{"arc", id}, {"tail", g.arc(id).tail}, {"head", g.arc(id).head}});
  return out;
}

json pair_json(const Digraph& g, const AugPair& pair) {
  json a = json::array();
  for (auto [u, v] : pair.arcs) a.push_back({u, v});
  Digraph host = pair_host_graph(g, pair);
  json paths = json::array();
  for (const auto& p : pair.flow.paths) {
    json verts = json::array();
    if (!p.empty()) verts.push_back(host.arc(p.front()).tail);
    for (ArcId id : p) verts.push_back(host.arc(id).head);
    paths.push_back(verts);
  }
  return {{"A", a}, {"flow", paths}};
}

bool acyclic_after_removal(const Digraph& g, const std::vector<ArcId>& removed) {
  std::vector<ArcId> rm = removed;
  std::sort(rm.begin(), rm.end());
  std::vector<int> indeg(g.vertex_bound(), 0);
  auto adj = g.out_adjacency();
  auto live = [&](ArcId id) { return !std::binary_search(rm.begin(), rm.end(), id); };
  for (ArcId id : g.alive_arcs())
    if (live(id)) {
      if (g.arc(id).tail == g.arc(id).head) return false;
      ++indeg[g.arc(id).head];
    }
  std::vector<Vertex> q;
  int total = 0, done = 0;
  for (Vertex v = 0; v < g.vertex_bound(); ++v)
    if (g.has_vertex(v)) {
      ++total;
      if (indeg[v] == 0) q.push_back(v);
    }
  while (!q.empty()) {
    Vertex u = q.back();
    q.pop_back();
    ++done;
    for (auto [head, id] : adj[u])
      if (live(id) && --indeg[head] == 0) q.push_back(head);
  }
  return done == total;
}

void require_terminals(const Instance& inst) {
  if (inst.s < 0 || inst.t < 0) throw std::runtime_error("instance needs s and t lines");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"directed flow-augmentation toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "emit a generated instance");
  std::string kind = "ladder";
  int gl = 25, gn = 6, gm = 9;
  std::uint64_t gseed = 1;
  gen->add_option("--kind", kind, "ladder|random-digraph|random-dag|chain-sat|skew-gadget");
  gen->add_option("--L", gl);
  gen->add_option("--n", gn);
  gen->add_option("--m", gm);
  gen->add_option("--seed", gseed);
  gen->callback([&]() {
    Instance inst;
    if (kind == "ladder") {
      auto ni = gen_ladder(gl);
      inst.g = ni.g;
      inst.s = ni.s;
      inst.t = ni.t;
    } else if (kind == "random-digraph") {
      auto ni = gen_random_digraph(gn, gm, gseed);
      inst.g = ni.g;
      inst.s = ni.s;
      inst.t = ni.t;
    } else if (kind == "random-dag") {
      auto ni = gen_random_dag(gn, gm, gseed);
      inst.g = ni.g;
      inst.s = ni.s;
      inst.t = ni.t;
    } else if (kind == "chain-sat") {
      auto bi = gen_chain_crossing();
      inst.g = bi.g;
      inst.s = bi.s;
      inst.t = bi.t;
      inst.has_k = true;
      inst.k = bi.k;
      inst.has_w = true;
      inst.w = bi.w;
      inst.bundles = bi.bundles;
    } else if (kind == "skew-gadget") {
      auto sk = gen_skew_gadget(gseed);
      inst.g = sk.g;
      inst.has_k = true;
      inst.k = sk.k;
      inst.has_w = true;
      inst.w = sk.w;
      for (ArcId id : inst.g.alive_arcs()) inst.bundles.push_back({sk.arc_weight[id], {id}});
      inst.pairs = sk.pairs;
    } else {
      throw CLI::ValidationError("unknown kind " + kind);
    }
    std::cout << serialize_instance(inst);
  });

  // augment
  auto* aug = app.add_subcommand("augment", "run flow-augmentation on an instance");
  std::string aug_file;
  int ak = 1, akappa = 0;
  std::uint64_t aseed = 0;
  bool adet = false, ajson = false;
  long long atrials = 1;
  aug->add_option("instance", aug_file)->required();
  aug->add_option("--k", ak)->required();
  aug->add_option("--kappa", akappa);
  aug->add_option("--seed", aseed);
  aug->add_flag("--det", adet);
  aug->add_option("--trials", atrials);
  aug->add_flag("--json", ajson);
  aug->callback([&]() {
    Instance inst = load_instance(aug_file);
    require_terminals(inst);
    if (adet) {
      auto fam = augment_deterministic(inst.g, inst.s, inst.t, ak, akappa, nullptr);
      if (ajson) {
        json out = json::array();
        for (const auto& pair : fam) out.push_back(pair_json(inst.g, pair));
        std::cout << out.dump() << "\n";
      } else {
        std::cout << "family_size " << fam.size() << "\n";
      }
      return;
    }
    SplitRng rng(aseed);
    for (long long tr = 0; tr < atrials; ++tr) {
      AugPair pair = augment_randomized(inst.g, inst.s, inst.t, ak, akappa, nullptr,
                                        rng.split(tr));
      if (ajson)
        std::cout << pair_json(inst.g, pair).dump() << "\n";
      else
        std::cout << "A_size " << pair.arcs.size() << " flow_value " << pair.flow.value()
                  << "\n";
    }
  });

  // solvers
  struct SolveArgs {
    std::string file;
    int k = -1;
    std::int64_t w = -1;
    bool json_out = false, certify = false;
  };
  auto add_solver = [&](const char* name, auto body) {
    auto* cmd = app.add_subcommand(name, "solve an instance");
    auto args = std::make_shared<SolveArgs>();
    cmd->add_option("instance", args->file)->required();
    cmd->add_option("--k", args->k);
    cmd->add_option("--W", args->w);
    cmd->add_flag("--json", args->json_out);
    cmd->add_flag("--certify", args->certify);
    cmd->callback([args, body]() {
      Instance inst = load_instance(args->file);
      int k = args->k >= 0 ? args->k : (inst.has_k ? inst.k : 0);
      std::int64_t w = args->w >= 0 ? args->w : (inst.has_w ? inst.w : 0);
      body(inst, k, w, *args);
    });
  };

  add_solver("solve-wstcut", [](const Instance& inst, int k, std::int64_t w,
                                const SolveArgs& args) {
    require_terminals(inst);
    auto sol = solve_weighted_st_cut(inst.g, arc_weights_of(inst), inst.s, inst.t, k, w);
    if (args.certify && sol) {
      Cut z = sol->arcs;
      std::sort(z.begin(), z.end());
      bool ok = is_st_cut(inst.g, inst.s, inst.t, z) && static_cast<int>(z.size()) <= k;
      std::cout << "certificate " << (ok ? "ok" : "INVALID") << "\n";
    }
    if (args.json_out) {
      json out = {{"yes", sol.has_value()}};
      if (sol) {
        out["weight"] = sol->weight;
        out["cut"] = cut_json(inst.g, sol->arcs);
      }
      std::cout << out.dump() << "\n";
    } else if (sol) {
      std::cout << "yes weight " << sol->weight << " size " << sol->arcs.size() << "\n";
    } else {
      std::cout << "no\n";
    }
  });

  auto bundled_body = [](const Instance& inst, int k, std::int64_t w, const SolveArgs& args,
                         int ell) {
    require_terminals(inst);
    BundledInstance bi{inst.g, inst.s, inst.t, k, inst.bundles, w};
    auto sol = ell > 0 ? solve_chain_sat(bi, ell) : solve_bundled_cut(bi);
    if (args.certify && sol) {
      Cut z = sol->arcs;
      std::sort(z.begin(), z.end());
      bool ok = is_st_cut(inst.g, inst.s, inst.t, z) &&
                static_cast<int>(sol->touched.size()) <= k && sol->weight <= w;
      std::cout << "certificate " << (ok ? "ok" : "INVALID") << "\n";
    }
    if (args.json_out) {
      json out = {{"yes", sol.has_value()}};
      if (sol) {
        out["weight"] = sol->weight;
        out["touched"] = sol->touched;
        out["cut"] = cut_json(inst.g, sol->arcs);
      }
      std::cout << out.dump() << "\n";
    } else if (sol) {
      std::cout << "yes weight " << sol->weight << " bundles " << sol->touched.size() << "\n";
    } else {
      std::cout << "no\n";
    }
  };
  add_solver("solve-bundled", [bundled_body](const Instance& inst, int k, std::int64_t w,
                                             const SolveArgs& args) {
    bundled_body(inst, k, w, args, 0);
  });
  add_solver("solve-chainsat", [bundled_body](const Instance& inst, int k, std::int64_t w,
                                              const SolveArgs& args) {
    int ell = 0;
    for (const auto& b : inst.bundles) ell = std::max(ell, static_cast<int>(b.arcs.size()));
    bundled_body(inst, k, w, args, std::max(ell, 1));
  });

  add_solver("solve-skew", [](const Instance& inst, int k, std::int64_t w,
                              const SolveArgs& args) {
    SkewInstance sk{inst.g, inst.pairs, arc_weights_of(inst), k, w};
    auto sol = solve_skew_multicut(sk);
    if (args.certify && sol) {
      bool ok = static_cast<int>(sol->arcs.size()) <= k && sol->weight <= w;
      for (size_t i = 0; i < sk.pairs.size() && ok; ++i) {
        auto seen = reach_avoiding(sk.g, sk.pairs[i].first, sol->arcs);
        for (size_t j = i; j < sk.pairs.size(); ++j)
          if (seen[sk.pairs[j].second]) ok = false;
      }
      std::cout << "certificate " << (ok ? "ok" : "INVALID") << "\n";
    }
    if (args.json_out) {
      json out = {{"yes", sol.has_value()}};
      if (sol) {
        out["weight"] = sol->weight;
        out["cut"] = cut_json(inst.g, sol->arcs);
      }
      std::cout << out.dump() << "\n";
    } else if (sol) {
      std::cout << "yes weight " << sol->weight << " size " << sol->arcs.size() << "\n";
    } else {
      std::cout << "no\n";
    }
  });

  add_solver("solve-wdfas", [](const Instance& inst, int k, std::int64_t w,
                               const SolveArgs& args) {
    auto sol = solve_wdfas(inst.g, arc_weights_of(inst), k, w);
    if (args.certify && sol) {
      bool ok = static_cast<int>(sol->arcs.size()) <= k && sol->weight <= w &&
                acyclic_after_removal(inst.g, sol->arcs);
      std::cout << "certificate " << (ok ? "ok" : "INVALID") << "\n";
    }
    if (args.json_out) {
      json out = {{"yes", sol.has_value()}};
      if (sol) {
        out["weight"] = sol->weight;
        out["cut"] = cut_json(inst.g, sol->arcs);
      }
      std::cout << out.dump() << "\n";
    } else if (sol) {
      std::cout << "yes weight " << sol->weight << " size " << sol->arcs.size() << "\n";
    } else {
      std::cout << "no\n";
    }
  });

  add_solver("solve-wdfvs", [](const Instance& inst, int k, std::int64_t w,
                               const SolveArgs& args) {
    std::vector<std::int64_t> vw(inst.g.vertex_bound(), 1);
    for (auto [v, weight] : inst.vertex_weights) vw[v] = weight;
    auto sol = solve_wdfvs(inst.g, vw, k, w);
    if (args.certify && sol) {
      Digraph g2 = inst.g;
      for (Vertex v : sol->vertices) g2.remove_vertex(v);
      bool ok = static_cast<int>(sol->vertices.size()) <= k && sol->weight <= w &&
                acyclic_after_removal(g2, {});
      std::cout << "certificate " << (ok ? "ok" : "INVALID") << "\n";
    }
    if (args.json_out) {
      json out = {{"yes", sol.has_value()}};
      if (sol) {
        out["weight"] = sol->weight;
        out["vertices"] = sol->vertices;
      }
      std::cout << out.dump() << "\n";
    } else if (sol) {
      std::cout << "yes weight " << sol->weight << " size " << sol->vertices.size() << "\n";
    } else {
      std::cout << "no\n";
    }
  });

  // oracle
  auto* orc = app.add_subcommand("oracle", "brute-force ground truth");
  std::string oproblem, ofile;
  int ok_ = -1;
  std::int64_t ow = -1;
  orc->add_option("problem", oproblem, "starcuts|wstcut|bundled|chainsat|skew|dfas|dfvs")
      ->required();
  orc->add_option("instance", ofile)->required();
  orc->add_option("--k", ok_);
  orc->add_option("--W", ow);
  orc->callback([&]() {
    Instance inst = load_instance(ofile);
    int k = ok_ >= 0 ? ok_ : (inst.has_k ? inst.k : 0);
    std::int64_t w = ow >= 0 ? ow : (inst.has_w ? inst.w : 0);
    if (oproblem == "starcuts") {
      require_terminals(inst);
      auto cuts = oracle::enum_star_cuts(inst.g, inst.s, inst.t, k);
      for (const auto& sc : cuts) {
        std::cout << "z";
        for (ArcId id : sc.z) std::cout << " " << id;
        std::cout << " | core";
        for (ArcId id : sc.core) std::cout << " " << id;
        std::cout << "\n";
      }
      return;
    }
    oracle::BruteAnswer ans;
    if (oproblem == "wstcut") {
      require_terminals(inst);
      ans = oracle::brute_wstcut(inst.g, arc_weights_of(inst), inst.s, inst.t, k, w);
    } else if (oproblem == "bundled" || oproblem == "chainsat") {
      require_terminals(inst);
      ans = oracle::brute_bundled({inst.g, inst.s, inst.t, k, inst.bundles, w});
    } else if (oproblem == "skew") {
      ans = oracle::brute_skew({inst.g, inst.pairs, arc_weights_of(inst), k, w});
    } else if (oproblem == "dfas") {
      ans = oracle::brute_dfas(inst.g, arc_weights_of(inst), k, w);
    } else if (oproblem == "dfvs") {
      std::vector<std::int64_t> vw(inst.g.vertex_bound(), 1);
      for (auto [v, weight] : inst.vertex_weights) vw[v] = weight;
      ans = oracle::brute_dfvs(inst.g, vw, k, w);
    } else {
      throw CLI::ValidationError("unknown problem " + oproblem);
    }
    if (ans.yes)
      std::cout << "yes weight " << ans.weight << "\n";
    else
      std::cout << "no\n";
  });

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo", "per-cut compatibility frequencies");
  std::string mfile, mcsv;
  int mk = 1, mkappa = 0, mguard = 25;
  long long mtrials = 10000;
  std::uint64_t mseed = 0;
  bool mjson = false;
  mc->add_option("instance", mfile)->required();
  mc->add_option("--k", mk)->required();
  mc->add_option("--kappa", mkappa);
  mc->add_option("--trials", mtrials);
  mc->add_option("--seed", mseed);
  mc->add_option("--guard", mguard);
  mc->add_option("--csv", mcsv);
  mc->add_flag("--json", mjson);
  mc->callback([&]() {
    Instance inst = load_instance(mfile);
    require_terminals(inst);
    auto rep = montecarlo(inst.g, inst.s, inst.t, mk, mkappa, mtrials, mseed, mguard);
    std::string csv = montecarlo_csv(inst.g, rep);
    if (!mcsv.empty()) {
      std::ofstream out(mcsv);
      out << csv;
    }
    if (mjson)
      std::cout << montecarlo_json(inst.g, rep) << "\n";
    else
      std::cout << csv;
  });

  // bench
  auto* bench = app.add_subcommand("bench", "measure deterministic family sizes");
  int bkmax = 3;
  std::string bcsv;
  bench->add_option("--kmax", bkmax);
  bench->add_option("--csv", bcsv);
  bench->callback([&]() {
    auto fixtures = fixture_suite();
    fixtures.push_back(gen_ladder(5));
    auto rows = measure_det_family(fixtures, 1, bkmax);
    std::string csv = family_csv(rows);
    if (!bcsv.empty()) {
      std::ofstream out(bcsv);
      out << csv;
    }
    std::cout << csv;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const oracle::GuardExceeded& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return kExitGuard;
  } catch (const GuardError& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
