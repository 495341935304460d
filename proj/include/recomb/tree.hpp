#pragma once

#include <functional>
#include <map>

#include "recomb/measure.hpp"
#include "recomb/rho.hpp"

namespace recomb {

// A recursive splitting history, stored as its sequence of partitions:
// level 0 is the one-block partition of the full set, and each later level
// refines the previous one block by block (every block either stays or
// splits into two pieces).
struct DyadicTree {
  std::vector<Partition> levels;
};

inline constexpr int kMaxTreeDepth = 6;
inline constexpr int kMaxTreeSites = 5;

// Enumerates every positive-weight depth-n splitting history together with
// its weight: the product over levels and blocks of the per-block kernel
// entries. The weights over the whole enumeration sum to 1. Histories are
// only materialized for small inputs; beyond the caps this throws
// resource_limit_error.
void enumerate_trees(const CoefficientTable& table, int depth,
                     const std::function<void(const DyadicTree&, const Rat&)>& visit);

// Total weight reaching each depth-n leaf partition.
std::map<Partition, Rat, PartitionLess> tree_weights(const CoefficientTable& table,
                                                     int depth);

struct DecompositionReport {
  bool ok = true;
  DenseMeasure iterated;    // n-fold recombination of mu
  DenseMeasure decomposed;  // weighted sum of product laws over leaf partitions
  std::map<Partition, Rat, PartitionLess> weights;
  Rat total_weight;
};

// Cross-checks the splitting-history expansion of the n-th iterate against
// direct iteration, in exact arithmetic.
DecompositionReport check_decomposition(const CoefficientTable& table,
                                        const DenseMeasure& mu, int depth);

// Stops the histories at level j and lets each block evolve on its own for
// the remaining depth - j steps; the result must reproduce the depth-n
// iterate for every j from 0 to depth.
CheckReport check_partial_expansion(const CoefficientTable& table,
                                    const DenseMeasure& mu, int depth);

}  // namespace recomb
