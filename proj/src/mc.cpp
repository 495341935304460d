#include "recomb/mc.hpp"

#include <algorithm>
#include <thread>
#include <utility>

#include "recomb/errors.hpp"

namespace recomb {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t trajectory,
                           std::uint64_t step, Mask block) {
  std::uint64_t h = mix64(seed ^ 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ trajectory);
  h = mix64(h ^ step);
  h = mix64(h ^ block);
  return h;
}

namespace {

constexpr std::uint64_t kOne63 = std::uint64_t(1) << 63;

// r * 2^63 rounded half to even; exact for r = 1.
std::uint64_t fixed63(const Rat& r) {
  Int n = numerator(r) << 63;
  const Int d = denominator(r);
  Int q = n / d;
  const Int twice = (n % d) * 2;
  if (twice > d || (twice == d && (q & 1) != 0)) ++q;
  return static_cast<std::uint64_t>(q);
}

// One block's one-step law, laid out for sampling: stay first (when present),
// then split sides ascending, with cumulative 63-bit thresholds. Entry i is
// chosen when u >> 1 falls below cum[i] first; the final threshold is exactly
// 2^63, so every 64-bit word selects something.
struct PreparedRow {
  bool inert = false;           // stay weight is 1: never draw for this block
  std::vector<Mask> side;       // 0 means stay; otherwise the canonical side
  std::vector<std::uint64_t> cum;
};

PreparedRow prepare_row(const std::map<Mask, Rat, SubsetLess>& kernel,
                        Mask block) {
  PreparedRow row;
  Rat stay(0);
  if (auto it = kernel.find(block); it != kernel.end()) stay = it->second;
  if (stay == 1) {
    row.inert = true;
    return row;
  }
  Rat cum(0);
  auto push = [&](Mask side, const Rat& w) {
    cum += w;
    row.side.push_back(side);
    row.cum.push_back(fixed63(cum));
  };
  if (stay > 0) push(0, stay);
  for (const auto& [m, w] : kernel)
    if (m != block) push(m, w);
  if (row.cum.empty() || row.cum.back() != kOne63)
    throw invariant_violation("block law does not sum to 1 for " +
                              format_subset(block));
  return row;
}

// The per-block law rebuilt from the raw weights alone, bypassing the
// coefficient table: classify every support set by its trace on the block.
// Matching the table-derived law entry for entry is what the cross-mode
// comparison in simulate() is for.
std::map<Mask, Rat, SubsetLess> law_from_support(const RecombDistribution& rho,
                                                 Mask block) {
  std::map<Mask, Rat, SubsetLess> law;
  const Mask low = block & (~block + 1);
  for (const auto& [j, w] : rho.weights) {
    const Mask trace = j & block;
    if (trace == 0 || trace == block)
      law[block] += w;
    else
      law[(trace & low) != 0 ? trace : block & ~trace] += w;
  }
  return law;
}

class RowSource {
 public:
  RowSource(const RecombDistribution& rho, SimConfig::Mode mode)
      : rho_(rho), mode_(mode) {
    if (mode_ == SimConfig::Mode::exact_chain)
      table_ = coefficient_table(rho);
  }

  const PreparedRow& row(Mask block) {
    auto it = cache_.find(block);
    if (it != cache_.end()) return it->second;
    auto law = mode_ == SimConfig::Mode::exact_chain
                   ? dyadic_kernel(table_, block)
                   : law_from_support(rho_, block);
    return cache_.emplace(block, prepare_row(law, block)).first->second;
  }

 private:
  const RecombDistribution& rho_;
  SimConfig::Mode mode_;
  CoefficientTable table_;
  std::map<Mask, PreparedRow, SubsetLess> cache_;
};

void run_range(const SimConfig& cfg, Mask full, RowSource& source,
               std::int64_t lo, std::int64_t hi, SimReport& out) {
  std::vector<Mask> blocks, next;
  for (std::int64_t traj = lo; traj < hi; ++traj) {
    blocks.assign(1, full);
    int absorbed_at = -1;
    for (int n = 0; n <= cfg.horizon; ++n) {
      bool alive = false;
      for (Mask b : blocks)
        if (!source.row(b).inert) alive = true;
      if (!alive && absorbed_at < 0) absorbed_at = n;
      if (!alive) {
        // Nothing moves from here on: flush the remaining steps and stop.
        Partition p{blocks};
        for (int m = n; m <= cfg.horizon; ++m) ++out.occupancy[m][p];
        break;
      }
      ++out.occupancy[n][Partition{blocks}];
      ++out.survival[n];
      if (n == cfg.horizon) break;
      next.clear();
      for (Mask b : blocks) {
        const PreparedRow& row = source.row(b);
        if (row.inert) {
          next.push_back(b);
          continue;
        }
        const std::uint64_t v =
            counter_draw(cfg.seed, std::uint64_t(traj), std::uint64_t(n), b) >>
            1;
        std::size_t i = 0;
        while (v >= row.cum[i]) ++i;
        if (row.side[i] == 0) {
          next.push_back(b);
        } else {
          next.push_back(row.side[i]);
          next.push_back(b & ~row.side[i]);
        }
      }
      std::sort(next.begin(), next.end(),
                [](Mask a, Mask b) { return lowest_bit(a) < lowest_bit(b); });
      blocks.swap(next);
    }
    if (absorbed_at >= 0)
      ++out.absorption_times[absorbed_at];
    else
      ++out.beyond_horizon;
  }
}

void merge_into(SimReport& total, const SimReport& part) {
  for (std::size_t n = 0; n < total.occupancy.size(); ++n)
    for (const auto& [p, c] : part.occupancy[n]) total.occupancy[n][p] += c;
  for (std::size_t n = 0; n < total.survival.size(); ++n)
    total.survival[n] += part.survival[n];
  for (const auto& [t, c] : part.absorption_times)
    total.absorption_times[t] += c;
  total.beyond_horizon += part.beyond_horizon;
}

SimReport blank_report(int horizon) {
  SimReport r;
  r.occupancy.resize(horizon + 1);
  r.survival.assign(horizon + 1, 0);
  return r;
}

}  // namespace

SimReport simulate(const RecombDistribution& rho, const SimConfig& cfg) {
  if (cfg.trajectories < 0)
    throw validation_error("trajectory count must be nonnegative");
  if (cfg.horizon < 0) throw validation_error("horizon must be nonnegative");
  if (cfg.threads < 1 || cfg.threads > 256)
    throw validation_error("thread count must be between 1 and 256");

  const Mask full = rho.sites.full();
  SimReport total = blank_report(cfg.horizon);
  const int threads =
      int(std::min<std::int64_t>(cfg.threads, std::max<std::int64_t>(
                                                  cfg.trajectories, 1)));
  if (threads == 1) {
    RowSource source(rho, cfg.mode);
    run_range(cfg, full, source, 0, cfg.trajectories, total);
    return total;
  }
  std::vector<SimReport> parts;
  std::vector<RowSource> sources;
  parts.reserve(threads);
  sources.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    parts.push_back(blank_report(cfg.horizon));
    sources.emplace_back(rho, cfg.mode);
  }
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    const std::int64_t lo = cfg.trajectories * t / threads;
    const std::int64_t hi = cfg.trajectories * (t + 1) / threads;
    workers.emplace_back([&, t, lo, hi] {
      run_range(cfg, full, sources[t], lo, hi, parts[t]);
    });
  }
  for (auto& w : workers) w.join();
  // Keyed draws make the result independent of the partitioning; merging in
  // thread order keeps even the in-memory layout deterministic.
  for (const auto& part : parts) merge_into(total, part);
  return total;
}

}  // namespace recomb
