#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "recomb/errors.hpp"

namespace recomb {

// A subset of the site set is one machine word; bit i stands for site i+1.
using Mask = std::uint64_t;

struct SiteSet {
  int n_sites = 0;
  std::vector<std::string> site_labels;  // optional; empty or one per site

  // Exhaustive analyses (closure enumeration, chain building) stay below this.
  static constexpr int kEnumerationCap = 16;
  // Simulation-only use may go up to one full mask word.
  static constexpr int kSimulationCap = 64;

  Mask full() const {
    return n_sites == 64 ? ~Mask(0) : ((Mask(1) << n_sites) - 1);
  }
};

// Validates 2 <= n <= cap; enumeration_mode selects which cap applies.
SiteSet make_site_set(int n_sites, std::vector<std::string> site_labels = {},
                      bool enumeration_mode = true);

int bit_count(Mask m);
// 0-based index of the lowest site in a nonempty mask.
int lowest_bit(Mask m);

// Ascending 1-based site indices of a mask.
std::vector<int> sites_of(Mask m);

// Serializes as a sorted 1-based index list, e.g. "[1,3]".
std::string format_subset(Mask m);
// Parses the same form; validates indices against n_sites.
Mask parse_subset(const std::string& text, int n_sites);

// Orders subsets by their ascending index lists (lexicographic, prefix-first).
// Returns <0, 0, >0.
int compare_subsets(Mask a, Mask b);

struct SubsetLess {
  bool operator()(Mask a, Mask b) const { return compare_subsets(a, b) < 0; }
};

// Canonical partition: nonempty pairwise-disjoint blocks covering the site
// set, sorted ascending by smallest element. Equality is block-list equality.
struct Partition {
  std::vector<Mask> blocks;
  bool operator==(const Partition&) const = default;
};

int compare_partitions(const Partition& a, const Partition& b);

struct PartitionLess {
  bool operator()(const Partition& a, const Partition& b) const {
    return compare_partitions(a, b) < 0;
  }
};

// Sorts blocks into canonical order and validates the partition laws against
// the given universe.
Partition make_partition(std::vector<Mask> blocks, Mask universe);

Partition singleton_partition(const SiteSet& sites);

// "[[1],[2,3]]" in canonical block order.
std::string format_partition(const Partition& p);

// True iff every block of a lies inside a block of b (finer includes equal).
bool is_finer(const Partition& a, const Partition& b);

// True iff `subset` equals the union of the partition blocks contained in it.
bool union_check(Mask subset, const Partition& p);

// All nonempty intersections of family members, computed as a worklist fixed
// point. The family must be nonempty and free of the empty set.
std::set<Mask> closure(const std::set<Mask>& family);

// The atoms generated by the family: closure elements that every family member
// either contains or misses entirely. For a complement-closed family these
// tile the universe; otherwise this throws, since the caller was required to
// close the family under complements first.
Partition atoms(const std::set<Mask>& family, Mask universe);

}  // namespace recomb
