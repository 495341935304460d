#pragma once

// Shared fixtures and deterministic generators for the test suites.

#include <cstdint>
#include <initializer_list>
#include <map>
#include <set>
#include <vector>

#include "recomb/measure.hpp"
#include "recomb/rho.hpp"

namespace recomb::testutil {

inline Mask S(std::initializer_list<int> sites) {
  Mask m = 0;
  for (int s : sites) m |= Mask(1) << (s - 1);
  return m;
}

// Running example: three sites, weight 1/4 on each of {1}, {2,3}, {1,2}, {3}.
inline RecombDistribution three_site() {
  SiteSet sites = make_site_set(3);
  std::map<Mask, Rat, SubsetLess> w;
  w[S({1})] = Rat(1, 4);
  w[S({2, 3})] = Rat(1, 4);
  w[S({1, 2})] = Rat(1, 4);
  w[S({3})] = Rat(1, 4);
  return make_distribution(sites, w);
}

// Two sites, half the weight on the full set: survival decays at rate 1/2
// driven by the full set itself.
inline RecombDistribution two_site_mix() {
  SiteSet sites = make_site_set(2);
  std::map<Mask, Rat, SubsetLess> w;
  w[sites.full()] = Rat(1, 2);
  w[S({1})] = Rat(1, 4);
  w[S({2})] = Rat(1, 4);
  return make_distribution(sites, w);
}

// Four sites, two interleaved complementary split directions.
inline RecombDistribution crossover_pairs() {
  SiteSet sites = make_site_set(4);
  std::map<Mask, Rat, SubsetLess> w;
  w[S({1, 2})] = Rat(1, 4);
  w[S({3, 4})] = Rat(1, 4);
  w[S({1, 3})] = Rat(1, 4);
  w[S({2, 4})] = Rat(1, 4);
  return make_distribution(sites, w);
}

// n sites, uniform weight on every prefix {1..k} and suffix {k+1..n}: the
// closure is all intervals and chain states are interval partitions.
inline RecombDistribution single_crossover(int n) {
  SiteSet sites = make_site_set(n);
  std::map<Mask, Rat, SubsetLess> w;
  Mask full = sites.full();
  for (int k = 1; k < n; ++k) {
    Mask prefix = (Mask(1) << k) - 1;
    w[prefix] = Rat(1, 2 * (n - 1));
    w[full & ~prefix] = Rat(1, 2 * (n - 1));
  }
  return make_distribution(sites, w);
}

// Three sites with two survival levels, both carrying a conditionally
// stationary law: {2,3} at rate 2/3 and {1,3} at rate 1/3.
inline RecombDistribution uneven_three() {
  SiteSet sites = make_site_set(3);
  std::map<Mask, Rat, SubsetLess> w;
  w[S({1})] = Rat(1, 3);
  w[S({2, 3})] = Rat(1, 3);
  w[S({2})] = Rat(1, 6);
  w[S({1, 3})] = Rat(1, 6);
  return make_distribution(sites, w);
}

// SplitMix64: deterministic, seed-stable across platforms.
struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  int pick(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

// Random measure with small exact rational entries summing to 1.
inline DenseMeasure random_measure(const AlphabetSpec& alphabet, Mask support,
                                   TestRng& rng) {
  std::size_t cells = 1;
  for (std::size_t p = 0; p < alphabet.sizes.size(); ++p) {
    if (support & (Mask(1) << p)) cells *= static_cast<std::size_t>(alphabet.sizes[p]);
  }
  std::vector<int> nums(cells);
  Int total = 0;
  for (int& v : nums) {
    v = rng.pick(1, 24);
    total += v;
  }
  std::vector<Rat> table(cells);
  for (std::size_t i = 0; i < cells; ++i) table[i] = Rat(Int(nums[i]), total);
  return make_measure(alphabet, support, std::move(table));
}

// Random recombination distribution on n sites. Symmetric instances put equal
// weight on a few complementary pairs (plus optionally the full set); general
// instances weight a handful of arbitrary nonempty subsets. Never the
// identity.
inline RecombDistribution random_instance(int n, TestRng& rng, bool symmetric,
                                          bool allow_full = true) {
  SiteSet sites = make_site_set(n);
  Mask full = sites.full();
  std::map<Mask, Int, SubsetLess> nums;
  if (symmetric) {
    int pairs = rng.pick(1, 3);
    std::set<Mask> seen;
    for (int i = 0; i < pairs; ++i) {
      Mask j = 1 + (rng.next() % (full - 1));  // proper nonempty subset
      Mask key = std::min(j, full & ~j);
      if (!seen.insert(key).second) continue;
      Int w = rng.pick(1, 6);
      nums[key] += w;
      nums[full & ~key] += w;
    }
    if (allow_full && rng.pick(0, 1) == 1) nums[full] += rng.pick(1, 3);
  } else {
    int count = rng.pick(2, 5);
    for (int i = 0; i < count; ++i) {
      Mask j = 1 + (rng.next() % (allow_full ? full : full - 1));
      nums[j] += rng.pick(1, 6);
    }
    bool has_proper = false;
    for (const auto& [j, w] : nums) {
      if (j != full) has_proper = true;
    }
    if (!has_proper) nums[Mask(1)] += 1;  // keep it non-identity
  }
  Int total = 0;
  for (const auto& [j, w] : nums) total += w;
  std::map<Mask, Rat, SubsetLess> raw;
  for (const auto& [j, w] : nums) raw[j] = Rat(w, total);
  return make_distribution(sites, raw);
}

}  // namespace recomb::testutil
