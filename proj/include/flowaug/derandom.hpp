#pragma once

#include <cstdint>
#include <vector>

#include "flowaug/graph.hpp"

namespace flowaug {

// A function A -> B as a value table (A = [0..n), B = [0..b)).
using FuncTable = std::vector<std::uint8_t>;

struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Family of functions [n] -> [b] such that every partial assignment on at
// most k points is extended by some member.
std::vector<FuncTable> splitter_functions(int n, int b, int k);

// Family of subsets of [n] such that every disjoint (A, B) with |A| <= a,
// |B| <= b is split by some member (A inside, B outside). Sets are returned
// as membership masks.
std::vector<std::vector<char>> separation_sets(int n, int a, int b);

// Exhaustive covering verifiers (used when the pattern space fits the cap;
// callers fall back to seeded spot checks beyond it). Return the number of
// uncovered patterns, 0 meaning the family is certified.
long long verify_splitter(const std::vector<FuncTable>& fam, int n, int b, int k);
long long verify_separation(const std::vector<std::vector<char>>& fam, int n, int a, int b);

// Seeded spot check: samples `trials` random patterns, returns misses.
long long spot_check_splitter(const std::vector<FuncTable>& fam, int n, int b, int k,
                              int trials, std::uint64_t seed);

}  // namespace flowaug
