#include "recomb/chain.hpp"

#include <algorithm>
#include <string>

#include "recomb/errors.hpp"

namespace recomb {

namespace {

struct BlockOption {
  std::vector<Mask> pieces;
  Rat weight;
};

using OptionCache = std::map<Mask, std::vector<BlockOption>, SubsetLess>;

const std::vector<BlockOption>& options_for(const CoefficientTable& table,
                                            Mask block, OptionCache& cache) {
  auto it = cache.find(block);
  if (it != cache.end()) return it->second;
  std::vector<BlockOption> opts;
  for (const auto& [key, w] : dyadic_kernel(table, block)) {
    if (key == block) {
      opts.push_back({{block}, w});
    } else {
      opts.push_back({{key, block & ~key}, w});
    }
  }
  return cache.emplace(block, std::move(opts)).first->second;
}

// All positive-weight successors of one partition, keyed canonically.
std::map<Partition, Rat, PartitionLess> successors(const CoefficientTable& table,
                                                   const Partition& from,
                                                   OptionCache& cache) {
  Mask full = table.rho.sites.full();
  std::size_t nb = from.blocks.size();
  std::vector<const std::vector<BlockOption>*> menu(nb);
  for (std::size_t b = 0; b < nb; ++b) menu[b] = &options_for(table, from.blocks[b], cache);
  std::map<Partition, Rat, PartitionLess> out;
  std::vector<std::size_t> choice(nb, 0);
  while (true) {
    std::vector<Mask> blocks;
    Rat w(1);
    for (std::size_t b = 0; b < nb; ++b) {
      const BlockOption& opt = (*menu[b])[choice[b]];
      blocks.insert(blocks.end(), opt.pieces.begin(), opt.pieces.end());
      w *= opt.weight;
    }
    out[make_partition(std::move(blocks), full)] += w;
    std::size_t b = nb;
    bool done = true;
    while (b-- > 0) {
      if (++choice[b] < menu[b]->size()) {
        done = false;
        break;
      }
      choice[b] = 0;
    }
    if (done) return out;
  }
}

void check_state(const ChainModel& model, int s, const char* what) {
  if (s < 0 || s >= static_cast<int>(model.states.size())) {
    throw validation_error(std::string(what) + " index " + std::to_string(s) +
                           " is out of range");
  }
}

}  // namespace

ChainModel build_chain(const CoefficientTable& table, long max_states) {
  if (max_states < 1) throw validation_error("state cap must be positive");
  ChainModel model{table, {}, {}, {}, 0, -1};
  Partition init{{table.rho.sites.full()}};
  model.states.push_back(init);
  model.index[init] = 0;
  OptionCache cache;
  for (std::size_t head = 0; head < model.states.size(); ++head) {
    Partition current = model.states[head];  // copy: states grows below
    std::map<Partition, Rat, PartitionLess> succ = successors(table, current, cache);
    std::vector<std::pair<int, Rat>> row;
    row.reserve(succ.size());
    for (auto& [p, w] : succ) {
      auto [it, inserted] = model.index.try_emplace(p, static_cast<int>(model.states.size()));
      if (inserted) {
        if (static_cast<long>(model.states.size()) >= max_states) {
          throw resource_limit_error("chain would exceed " + std::to_string(max_states) +
                                     " states");
        }
        model.states.push_back(p);
      }
      row.emplace_back(it->second, w);
    }
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    model.rows.push_back(std::move(row));
  }
  auto it = model.index.find(table.atom_partition);
  if (it == model.index.end()) {
    throw invariant_violation("the atom partition was never discovered");
  }
  model.absorbing = it->second;
  return model;
}

std::vector<Rat> step(const ChainModel& model, const std::vector<Rat>& v) {
  if (v.size() != model.states.size()) {
    throw validation_error("distribution vector has the wrong length");
  }
  std::vector<Rat> out(v.size(), Rat(0));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (const auto& [j, w] : model.rows[i]) out[static_cast<std::size_t>(j)] += v[i] * w;
  }
  return out;
}

std::vector<Rat> distribution_at(const ChainModel& model, int n) {
  if (n < 0) throw validation_error("step count must be nonnegative");
  std::vector<Rat> v(model.states.size(), Rat(0));
  v[static_cast<std::size_t>(model.initial)] = 1;
  for (int t = 0; t < n; ++t) v = step(model, v);
  return v;
}

std::map<Partition, Rat, PartitionLess> chain_weights(const ChainModel& model, int n) {
  std::vector<Rat> v = distribution_at(model, n);
  std::map<Partition, Rat, PartitionLess> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) out[model.states[i]] = v[i];
  }
  return out;
}

AbsorptionProfile survival_profile(const ChainModel& model, int horizon, int start) {
  if (horizon < 0) throw validation_error("horizon must be nonnegative");
  if (start < 0) start = model.initial;
  check_state(model, start, "start state");
  AbsorptionProfile prof;
  std::vector<Rat> v(model.states.size(), Rat(0));
  v[static_cast<std::size_t>(start)] = 1;
  for (int n = 0;; ++n) {
    prof.survival.push_back(Rat(1) - v[static_cast<std::size_t>(model.absorbing)]);
    prof.occupancy.push_back(v);
    if (n == horizon) break;
    v = step(model, v);
  }
  return prof;
}

std::vector<Rat> hit_probability(const ChainModel& model, const std::vector<int>& targets) {
  if (targets.empty()) throw validation_error("need at least one target state");
  std::vector<bool> is_target(model.states.size(), false);
  for (int t : targets) {
    check_state(model, t, "target state");
    is_target[static_cast<std::size_t>(t)] = true;
  }
  std::vector<Rat> h(model.states.size(), Rat(0));
  std::vector<int> order = topological_order(model);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::size_t i = static_cast<std::size_t>(*it);
    if (is_target[i]) {
      h[i] = 1;
      continue;
    }
    Rat self(0), reach(0);
    for (const auto& [j, w] : model.rows[i]) {
      if (j == *it) {
        self = w;
      } else {
        reach += w * h[static_cast<std::size_t>(j)];
      }
    }
    if (reach == 0) continue;  // h stays 0; covers the absorbing self-loop
    h[i] = reach / (Rat(1) - self);
  }
  return h;
}

HittingDistribution hitting_distribution(const ChainModel& model,
                                         const std::vector<int>& targets, int horizon,
                                         int start) {
  if (horizon < 0) throw validation_error("horizon must be nonnegative");
  if (start < 0) start = model.initial;
  check_state(model, start, "start state");
  std::vector<Rat> ever = hit_probability(model, targets);
  std::vector<bool> is_target(model.states.size(), false);
  for (int t : targets) is_target[static_cast<std::size_t>(t)] = true;

  HittingDistribution out;
  Rat arrived(0);
  std::vector<Rat> v(model.states.size(), Rat(0));
  v[static_cast<std::size_t>(start)] = 1;
  for (int n = 0;; ++n) {
    Rat at_targets(0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (is_target[i]) {
        at_targets += v[i];
        v[i] = 0;  // stop counting trajectories that have arrived
      }
    }
    out.mass.push_back(at_targets);
    arrived += at_targets;
    if (n == horizon) break;
    v = step(model, v);
  }
  out.beyond_horizon = ever[static_cast<std::size_t>(start)] - arrived;
  out.never = Rat(1) - ever[static_cast<std::size_t>(start)];
  return out;
}

std::vector<int> topological_order(const ChainModel& model) {
  std::vector<int> order(model.states.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&model](int a, int b) {
    return model.states[static_cast<std::size_t>(a)].blocks.size() <
           model.states[static_cast<std::size_t>(b)].blocks.size();
  });
  return order;
}

int dag_depth(const ChainModel& model) {
  std::vector<int> depth(model.states.size(), 0);
  int best = 0;
  for (int i : topological_order(model)) {
    std::size_t si = static_cast<std::size_t>(i);
    for (const auto& [j, w] : model.rows[si]) {
      if (j == i) continue;
      std::size_t sj = static_cast<std::size_t>(j);
      if (depth[si] + 1 > depth[sj]) depth[sj] = depth[si] + 1;
      if (depth[sj] > best) best = depth[sj];
    }
  }
  return best;
}

}  // namespace recomb
