#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowaug/augment.hpp"
#include "flowaug/graph.hpp"
#include "flowaug/oracle.hpp"

namespace flowaug {

struct NamedInstance {
  std::string name;
  Digraph g;
  Vertex s = -1;
  Vertex t = -1;
};

// Canonical fixtures.
NamedInstance fix_path();
NamedInstance fix_two();
NamedInstance fix_star();
NamedInstance fix_diam();
NamedInstance fix_x();
std::vector<NamedInstance> fixture_suite();

// Two unit paths of length L with two-way infinity rungs at every internal
// column; lambda = 2 and the mincut sequence walks one column per step.
NamedInstance gen_ladder(int length);

NamedInstance gen_random_digraph(int n, int m, std::uint64_t seed);
NamedInstance gen_random_dag(int n, int m, std::uint64_t seed);

// The two-bundle crossing 3-chain instance; the dominated bundle dies in the
// filtering step, the other one alone cuts the instance.
BundledInstance gen_chain_crossing();

SkewInstance gen_skew_gadget(std::uint64_t seed);

std::uint64_t instance_hash(const Digraph& g, Vertex s, Vertex t);

double wilson_lower(long long hits, long long trials, double z = 1.959964);

struct MonteCarloRow {
  Cut z;
  Cut core;
  long long hits = 0;
};
struct MonteCarloReport {
  long long trials = 0;
  std::vector<MonteCarloRow> rows;
  long long postcondition_failures = 0;  // outputs violating the maxflow/kappa contract
};

MonteCarloReport montecarlo(const Digraph& g, Vertex s, Vertex t, int k, int kappa,
                            long long trials, std::uint64_t seed, int guard = 25,
                            bool mix_trivial = true);

std::string montecarlo_csv(const Digraph& g, const MonteCarloReport& rep);
std::string montecarlo_json(const Digraph& g, const MonteCarloReport& rep);

struct FamilyMeasurement {
  std::string name;
  int n = 0;
  int k = 0;
  std::size_t family_size = 0;
  long long millis = 0;
};
std::vector<FamilyMeasurement> measure_det_family(const std::vector<NamedInstance>& fixtures,
                                                  int k_min, int k_max);
std::string family_csv(const std::vector<FamilyMeasurement>& rows);

int thread_budget();  // FLOWAUG_THREADS, default 1

}  // namespace flowaug
