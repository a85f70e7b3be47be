#include "flowaug/derandom.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "flowaug/flow.hpp"
#include "flowaug/rng.hpp"

namespace flowaug {

namespace {

constexpr long long kPatternGuard = 400000;   // greedy set-cover regime
constexpr long long kFullEnumGuard = 8192;    // b^n full-enumeration regime

long long checked_pow(long long base, int exp, long long cap) {
  long long v = 1;
  for (int i = 0; i < exp; ++i) {
    v *= base;
    if (v > cap) return cap + 1;
  }
  return v;
}

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
    if (r > (1LL << 50)) return 1LL << 50;
  }
  return r;
}

// All k-subsets of [n] in lexicographic order, visitor style.
template <class F>
void for_each_subset(int n, int k, F f) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k == 0) {
    f(idx);
    return;
  }
  if (k > n) return;
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

template <class F>
void for_each_tuple(int slots, int b, F f) {
  std::vector<std::uint8_t> vals(slots, 0);
  while (true) {
    f(vals);
    int i = slots - 1;
    while (i >= 0 && vals[i] == b - 1) {
      vals[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++vals[i];
  }
}

struct GreedyPattern {
  std::vector<int> points;
  std::vector<std::uint8_t> vals;
};

// Seeded-deterministic cover: extend the first uncovered pattern with
// pseudo-random values, which removes an expected b^{-k} share of the rest,
// so the family lands near b^k * ln(#patterns) members.
std::vector<FuncTable> greedy_cover(int n, int b, int k) {
  std::vector<GreedyPattern> todo;
  for_each_subset(n, k, [&](const std::vector<int>& s) {
    for_each_tuple(k, b, [&](const std::vector<std::uint8_t>& vals) {
      todo.push_back({s, vals});
    });
  });
  std::vector<FuncTable> fam;
  SplitRng rng(0x5eedf00dULL ^ (static_cast<std::uint64_t>(n) << 20) ^
               (static_cast<std::uint64_t>(b) << 10) ^ static_cast<std::uint64_t>(k));
  while (!todo.empty()) {
    const GreedyPattern& seed = todo.front();
    FuncTable f(n);
    for (int x = 0; x < n; ++x) f[x] = static_cast<std::uint8_t>(rng.next_below(b));
    for (int i = 0; i < k; ++i) f[seed.points[i]] = seed.vals[i];
    std::vector<GreedyPattern> keep;
    keep.reserve(todo.size());
    for (auto& p : todo) {
      bool covered = true;
      for (int i = 0; i < k && covered; ++i)
        if (f[p.points[i]] != p.vals[i]) covered = false;
      if (!covered) keep.push_back(std::move(p));
    }
    check(keep.size() < todo.size(), "greedy_cover failed to make progress");
    todo.swap(keep);
    fam.push_back(std::move(f));
  }
  return fam;
}

std::vector<int> primes_from(int lo, int count) {
  std::vector<int> out;
  for (int p = std::max(2, lo); static_cast<int>(out.size()) < count; ++p) {
    bool prime = p >= 2;
    for (int d = 2; d * d <= p && prime; ++d)
      if (p % d == 0) prime = false;
    if (prime) out.push_back(p);
  }
  return out;
}

// Stage families mapping [n] -> [range] such that every k-subset of [n] is
// mapped injectively by some member.
struct Stage {
  std::vector<std::vector<int>> maps;
  int range = 0;
};

Stage prime_stage(int n, int k) {
  int log2n = 1;
  while ((1 << log2n) < n) ++log2n;
  int t = std::max(3, k * k * log2n);
  double pairs = static_cast<double>(k) * (k - 1) / 2.0;
  int m = static_cast<int>(pairs * log2n / std::log2(static_cast<double>(t))) + 1;
  auto ps = primes_from(t, m);
  Stage st;
  st.range = ps.back() ;
  for (int p : ps) {
    std::vector<int> f(n);
    for (int x = 0; x < n; ++x) f[x] = x % p;
    st.maps.push_back(std::move(f));
  }
  st.range = ps.back();
  return st;
}

Stage bit_stage(int n, int k) {
  int bits = 1;
  while ((1 << bits) < n) ++bits;
  int pick = std::min(k - 1, bits);
  Stage st;
  st.range = 1 << pick;
  for_each_subset(bits, pick, [&](const std::vector<int>& d) {
    std::vector<int> f(n);
    for (int x = 0; x < n; ++x) {
      int v = 0;
      for (int i = 0; i < pick; ++i) v |= ((x >> d[i]) & 1) << i;
      f[x] = v;
    }
    st.maps.push_back(std::move(f));
  });
  return st;
}

// Small-domain family: full enumeration or certified greedy cover, no
// composition. Empty when the parameters exceed both guards.
std::vector<FuncTable> base_family(int n, int b, int k) {
  if (n <= 0) return {FuncTable{}};
  k = std::min(k, n);
  if (b == 1 || k == 0) return {FuncTable(static_cast<size_t>(n), 0)};
  if (k == 1) {
    std::vector<FuncTable> fam;
    for (int v = 0; v < b; ++v)
      fam.push_back(FuncTable(static_cast<size_t>(n), static_cast<std::uint8_t>(v)));
    return fam;
  }
  long long patterns = binom(n, k) * checked_pow(b, k, 1LL << 40);
  if (patterns <= kPatternGuard) return greedy_cover(n, b, k);
  if (checked_pow(b, n, kFullEnumGuard) <= kFullEnumGuard) {
    std::vector<FuncTable> fam;
    for_each_tuple(n, b, [&](const std::vector<std::uint8_t>& vals) { fam.push_back(vals); });
    return fam;
  }
  return {};
}

std::vector<FuncTable> splitter_impl(int n, int b, int k) {
  if (b < 1) throw std::invalid_argument("splitter_functions: empty codomain");
  k = std::min(k, n);
  if (auto fam = base_family(n, b, k); !fam.empty() || n <= 0) return fam;
  // One pass of domain reduction: a prime-residue stage when it shrinks the
  // domain, then a bit-projection stage, then the certified base family.
  // Every stage maps each k-subset injectively under some member, so the
  // extension property survives composition.
  std::vector<Stage> stages;
  int cur = n;
  Stage ps = prime_stage(cur, k);
  if (ps.range < cur && ps.range > k) {
    stages.push_back(std::move(ps));
    cur = stages.back().range;
  }
  if (base_family(cur, b, k).empty()) {
    Stage bs = bit_stage(cur, k);
    if (bs.range < cur) {
      // offset handling: the bit stage maps [cur] -> [2^pick]
      stages.push_back(std::move(bs));
      cur = stages.back().range;
    }
  }
  auto base = base_family(cur, b, k);
  if (base.empty())
    throw GuardError("splitter_functions: parameters outside supported range (n=" +
                     std::to_string(n) + " b=" + std::to_string(b) +
                     " k=" + std::to_string(k) + ")");
  // flatten the stage product
  std::vector<std::vector<int>> maps{std::vector<int>(n)};
  for (int x = 0; x < n; ++x) maps[0][x] = x;
  for (const Stage& st : stages) {
    std::vector<std::vector<int>> next;
    for (const auto& outer : maps)
      for (const auto& h : st.maps) {
        std::vector<int> combined(n);
        for (int x = 0; x < n; ++x) combined[x] = h[outer[x]];
        next.push_back(std::move(combined));
      }
    maps = std::move(next);
  }
  std::vector<FuncTable> fam;
  fam.reserve(maps.size() * base.size());
  for (const auto& h : maps)
    for (const auto& g : base) {
      FuncTable f(n);
      for (int x = 0; x < n; ++x) f[x] = g[h[x]];
      fam.push_back(std::move(f));
    }
  std::sort(fam.begin(), fam.end());
  fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
  return fam;
}

std::map<std::tuple<int, int, int>, std::vector<FuncTable>>& splitter_cache() {
  static std::map<std::tuple<int, int, int>, std::vector<FuncTable>> c;
  return c;
}
std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::vector<FuncTable> splitter_functions(int n, int b, int k) {
  if (b < 1 && n > 0) throw std::invalid_argument("splitter_functions: empty B with nonempty A");
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto key = std::make_tuple(n, b, k);
  auto it = splitter_cache().find(key);
  if (it != splitter_cache().end()) return it->second;
  auto fam = splitter_impl(n, b, k);
  splitter_cache()[key] = fam;
  return fam;
}

std::vector<std::vector<char>> separation_sets(int n, int a, int b) {
  if (n < 0 || a < 0 || b < 0) throw std::invalid_argument("separation_sets: negative size");
  a = std::min(a, n);
  b = std::min(b, n);
  std::vector<std::vector<char>> fam;
  if (n == 0) {
    fam.push_back({});
    return fam;
  }
  if (a == 0) {
    fam.emplace_back(n, 0);
    return fam;
  }
  if (b == 0) {
    fam.emplace_back(n, 1);
    return fam;
  }
  if (a + b >= n) {
    // S = A must be realizable exactly; emit every subset of size <= a
    for (int sz = 0; sz <= a; ++sz)
      for_each_subset(n, sz, [&](const std::vector<int>& s) {
        std::vector<char> mask(n, 0);
        for (int x : s) mask[x] = 1;
        fam.push_back(std::move(mask));
      });
    return fam;
  }
  auto fs = splitter_functions(n, 2, a + b);
  for (const auto& f : fs) {
    std::vector<char> mask(n, 0);
    for (int x = 0; x < n; ++x) mask[x] = f[x] == 1;
    fam.push_back(std::move(mask));
  }
  std::sort(fam.begin(), fam.end());
  fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
  return fam;
}

long long verify_splitter(const std::vector<FuncTable>& fam, int n, int b, int k) {
  k = std::min(k, n);
  long long misses = 0;
  for_each_subset(n, k, [&](const std::vector<int>& s) {
    for_each_tuple(k, b, [&](const std::vector<std::uint8_t>& vals) {
      for (const auto& f : fam) {
        bool ok = true;
        for (int i = 0; i < k && ok; ++i)
          if (f[s[i]] != vals[i]) ok = false;
        if (ok) return;
      }
      ++misses;
    });
  });
  return misses;
}

long long verify_separation(const std::vector<std::vector<char>>& fam, int n, int a, int b) {
  a = std::min(a, n);
  b = std::min(b, n);
  long long misses = 0;
  // enumerate A as subset of size <= a, B as subset of the complement, size <= b
  for (int sa = 0; sa <= a; ++sa) {
    for_each_subset(n, sa, [&](const std::vector<int>& aset) {
      std::vector<int> rest;
      for (int x = 0; x < n; ++x)
        if (std::find(aset.begin(), aset.end(), x) == aset.end()) rest.push_back(x);
      for (int sb = 0; sb <= b && sb <= static_cast<int>(rest.size()); ++sb) {
        for_each_subset(static_cast<int>(rest.size()), sb, [&](const std::vector<int>& bidx) {
          for (const auto& mask : fam) {
            bool ok = true;
            for (int x : aset)
              if (!mask[x]) ok = false;
            for (int j : bidx)
              if (mask[rest[j]]) ok = false;
            if (ok) return;
          }
          ++misses;
        });
      }
    });
  }
  return misses;
}

long long spot_check_splitter(const std::vector<FuncTable>& fam, int n, int b, int k,
                              int trials, std::uint64_t seed) {
  SplitRng rng(seed);
  k = std::min(k, n);
  long long misses = 0;
  for (int tr = 0; tr < trials; ++tr) {
    std::vector<int> pts;
    while (static_cast<int>(pts.size()) < k) {
      int x = static_cast<int>(rng.next_below(n));
      if (std::find(pts.begin(), pts.end(), x) == pts.end()) pts.push_back(x);
    }
    std::vector<std::uint8_t> vals(k);
    for (int i = 0; i < k; ++i) vals[i] = static_cast<std::uint8_t>(rng.next_below(b));
    bool hit = false;
    for (const auto& f : fam) {
      bool ok = true;
      for (int i = 0; i < k && ok; ++i)
        if (f[pts[i]] != vals[i]) ok = false;
      if (ok) {
        hit = true;
        break;
      }
    }
    if (!hit) ++misses;
  }
  return misses;
}

}  // namespace flowaug
