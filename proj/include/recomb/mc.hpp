#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "recomb/rho.hpp"

namespace recomb {

// Standard 64-bit avalanche mix (the SplitMix64 finalizer); bijective.
std::uint64_t mix64(std::uint64_t x);

// Keyed counter draw: one uniform 64-bit word per (seed, trajectory, step,
// block). A draw depends only on its key, never on how many draws happened
// before, so skipped draws cost nothing and threads cannot perturb streams.
std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t trajectory,
                           std::uint64_t step, Mask block);

struct SimConfig {
  std::uint64_t seed = 1;
  std::int64_t trajectories = 10000;
  int horizon = 32;
  // Both modes run the same per-block keyed draws and produce bit-identical
  // trajectories; they differ in where the split law comes from.
  // exact_chain reads the precomputed coefficient rows; kernel_draws
  // rebuilds each block's law directly from the raw weights on the fly.
  enum class Mode { exact_chain, kernel_draws } mode = Mode::exact_chain;
  int threads = 1;
};

struct SimReport {
  // occupancy[n][partition] = trajectories standing there after n steps
  std::vector<std::map<Partition, std::int64_t, PartitionLess>> occupancy;
  std::vector<std::int64_t> survival;  // trajectories not fully split at n
  std::map<int, std::int64_t> absorption_times;  // first fully-split step
  std::int64_t beyond_horizon = 0;  // still alive when the horizon ended
};

SimReport simulate(const RecombDistribution& rho, const SimConfig& cfg);

}  // namespace recomb
