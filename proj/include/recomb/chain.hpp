#pragma once

#include <map>
#include <utility>
#include <vector>

#include "recomb/rho.hpp"

namespace recomb {

inline constexpr long kDefaultStateCap = 1000000;

// The partition-valued Markov chain induced by recursive splitting: from a
// partition, each block independently keeps or splits according to its dyadic
// kernel, and the transition weight is the product of the per-block factors.
// The atom partition is the unique absorbing state.
struct ChainModel {
  CoefficientTable table;
  std::vector<Partition> states;  // discovery order; the initial state first
  std::map<Partition, int, PartitionLess> index;
  std::vector<std::vector<std::pair<int, Rat>>> rows;  // positive entries, columns ascending
  int initial = 0;
  int absorbing = -1;  // index of the atom partition
};

// Breadth-first exploration from the one-block partition; new successors are
// indexed in canonical partition order. Throws resource_limit_error past
// max_states.
ChainModel build_chain(const CoefficientTable& table, long max_states = kDefaultStateCap);

// One step of a distribution row vector.
std::vector<Rat> step(const ChainModel& model, const std::vector<Rat>& v);

// Distribution after n steps from the initial state.
std::vector<Rat> distribution_at(const ChainModel& model, int n);

// Positive-probability partitions after n steps; matches the depth-n tree
// weights.
std::map<Partition, Rat, PartitionLess> chain_weights(const ChainModel& model, int n);

struct AbsorptionProfile {
  std::vector<Rat> survival;                // survival[n] = P(not yet absorbed at n)
  std::vector<std::vector<Rat>> occupancy;  // full distribution at each time
};
AbsorptionProfile survival_profile(const ChainModel& model, int horizon, int start = -1);

// Probability of ever visiting one of the target states, from every state,
// solved exactly backwards along the refinement order.
std::vector<Rat> hit_probability(const ChainModel& model, const std::vector<int>& targets);

// Exact law of the first visit time to the targets, cut at a horizon.
struct HittingDistribution {
  std::vector<Rat> mass;  // mass[n] = P(first visit at time n)
  Rat beyond_horizon;     // visits eventually, but after the horizon
  Rat never;              // no visit, ever
};
HittingDistribution hitting_distribution(const ChainModel& model,
                                         const std::vector<int>& targets, int horizon,
                                         int start = -1);

// State indices ordered by increasing block count (ties keep discovery
// order). Every transition either stays put or moves strictly forward.
std::vector<int> topological_order(const ChainModel& model);

// Longest self-loop-free path length from the initial state.
int dag_depth(const ChainModel& model);

}  // namespace recomb
