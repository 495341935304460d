#include "recomb/tree.hpp"

#include <string>
#include <utility>
#include <vector>

#include "recomb/errors.hpp"

namespace recomb {

namespace {

struct BlockOption {
  std::vector<Mask> pieces;  // {block} for a stay, {side, rest} for a split
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

void recurse(const CoefficientTable& table, int depth, DyadicTree& tree,
             const Rat& weight, OptionCache& cache,
             const std::function<void(const DyadicTree&, const Rat&)>& visit) {
  if (static_cast<int>(tree.levels.size()) == depth + 1) {
    visit(tree, weight);
    return;
  }
  const Partition& current = tree.levels.back();
  std::size_t nb = current.blocks.size();
  std::vector<const std::vector<BlockOption>*> menu(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    menu[b] = &options_for(table, current.blocks[b], cache);
  }
  std::vector<std::size_t> choice(nb, 0);
  Mask full = table.rho.sites.full();
  while (true) {
    std::vector<Mask> blocks;
    Rat w = weight;
    for (std::size_t b = 0; b < nb; ++b) {
      const BlockOption& opt = (*menu[b])[choice[b]];
      blocks.insert(blocks.end(), opt.pieces.begin(), opt.pieces.end());
      w *= opt.weight;
    }
    tree.levels.push_back(make_partition(std::move(blocks), full));
    recurse(table, depth, tree, w, cache, visit);
    tree.levels.pop_back();
    std::size_t b = nb;
    while (b-- > 0) {
      if (++choice[b] < menu[b]->size()) break;
      choice[b] = 0;
      if (b == 0) return;
    }
  }
}

DenseMeasure zero_like(const DenseMeasure& shape) {
  return DenseMeasure{shape.support, shape.dims,
                      std::vector<Rat>(shape.table.size(), Rat(0))};
}

void add_scaled(DenseMeasure& acc, const Rat& w, const DenseMeasure& term) {
  for (std::size_t i = 0; i < acc.table.size(); ++i) acc.table[i] += w * term.table[i];
}

}  // namespace

void enumerate_trees(const CoefficientTable& table, int depth,
                     const std::function<void(const DyadicTree&, const Rat&)>& visit) {
  if (depth < 0) throw validation_error("tree depth must be nonnegative");
  if (depth > kMaxTreeDepth) {
    throw resource_limit_error("tree depth " + std::to_string(depth) +
                               " exceeds the cap of " + std::to_string(kMaxTreeDepth));
  }
  if (table.rho.sites.n_sites > kMaxTreeSites) {
    throw resource_limit_error("tree enumeration is capped at " +
                               std::to_string(kMaxTreeSites) + " sites");
  }
  DyadicTree tree;
  tree.levels.push_back(Partition{{table.rho.sites.full()}});
  OptionCache cache;
  recurse(table, depth, tree, Rat(1), cache, visit);
}

std::map<Partition, Rat, PartitionLess> tree_weights(const CoefficientTable& table,
                                                     int depth) {
  std::map<Partition, Rat, PartitionLess> out;
  enumerate_trees(table, depth, [&out](const DyadicTree& tree, const Rat& w) {
    out[tree.levels.back()] += w;
  });
  return out;
}

DecompositionReport check_decomposition(const CoefficientTable& table,
                                        const DenseMeasure& mu, int depth) {
  DecompositionReport rep;
  rep.iterated = xi_iterate(table.rho, mu, depth);
  rep.weights = tree_weights(table, depth);
  rep.total_weight = Rat(0);
  DenseMeasure acc = zero_like(mu);
  for (const auto& [p, w] : rep.weights) {
    add_scaled(acc, w, product_over_partition(mu, p));
    rep.total_weight += w;
  }
  rep.decomposed = std::move(acc);
  rep.ok = rep.total_weight == 1 && rep.decomposed == rep.iterated;
  return rep;
}

CheckReport check_partial_expansion(const CoefficientTable& table,
                                    const DenseMeasure& mu, int depth) {
  CheckReport rep;
  DenseMeasure target = xi_iterate(table.rho, mu, depth);
  for (int j = 0; j <= depth; ++j) {
    DenseMeasure acc = zero_like(mu);
    for (const auto& [p, w] : tree_weights(table, j)) {
      DenseMeasure term = scalar_measure();
      for (Mask block : p.blocks) {
        DenseMeasure nu = marginal(mu, block);
        for (int t = 0; t < depth - j; ++t) nu = xi_on_block(table, block, nu);
        term = product(term, nu);
      }
      add_scaled(acc, w, term);
    }
    if (!(acc == target)) {
      rep.fail("stopping the histories at level " + std::to_string(j) +
               " does not reproduce the depth-" + std::to_string(depth) +
               " iterate");
    }
  }
  return rep;
}

}  // namespace recomb
