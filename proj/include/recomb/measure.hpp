#pragma once

#include <cstddef>
#include <vector>

#include "recomb/rho.hpp"

namespace recomb {

// Per-site alphabet sizes. The product of all sizes is capped so dense tables
// stay in memory.
struct AlphabetSpec {
  std::vector<int> sizes;  // one per site, each >= 2

  int size_of_site(int site_index0) const { return sizes[static_cast<std::size_t>(site_index0)]; }
};

inline constexpr std::size_t kDefaultDenseCap = std::size_t(1) << 20;

AlphabetSpec make_alphabets(const SiteSet& sites, std::vector<int> sizes,
                            std::size_t max_cells = kDefaultDenseCap);
AlphabetSpec binary_alphabets(const SiteSet& sites);

// An exact probability table over the sites in `support`. Configurations are
// indexed row-major with sites in ascending order (the last site varies
// fastest). The empty-support measure is the scalar 1: a single entry.
struct DenseMeasure {
  Mask support = 0;
  std::vector<int> dims;   // alphabet sizes of the support sites, ascending
  std::vector<Rat> table;  // length = product of dims (1 when support empty)

  bool operator==(const DenseMeasure&) const = default;
  std::size_t size() const { return table.size(); }
};

// Validates entry count, nonnegativity, and exact total mass 1.
DenseMeasure make_measure(const AlphabetSpec& alphabet, Mask support,
                          std::vector<Rat> table);

// The scalar 1 on the empty support.
DenseMeasure scalar_measure();

// Expands per-site marginal vectors into their product measure on the full
// site set.
DenseMeasure measure_from_marginals(const AlphabetSpec& alphabet,
                                    const std::vector<std::vector<Rat>>& per_site);

// Sums out every coordinate outside K; K must lie inside the support.
DenseMeasure marginal(const DenseMeasure& mu, Mask k);

// Product measure on the disjoint union of the supports.
DenseMeasure product(const DenseMeasure& a, const DenseMeasure& b);

// Product of the marginals over the blocks of a partition of the support.
DenseMeasure product_over_partition(const DenseMeasure& mu, const Partition& p);

// One recombination step, straight from the definition: the weighted sum over
// support sets J of (marginal on J) x (marginal on the complement). mu must
// live on the full site set.
DenseMeasure xi_apply(const RecombDistribution& rho, const DenseMeasure& mu);

// n-fold application; n = 0 returns mu.
DenseMeasure xi_iterate(const RecombDistribution& rho, DenseMeasure mu, int n);

// One recombination step restricted to a single block, driven by the block's
// coefficient row instead of the raw support: stay weight times nu plus the
// split terms. nu must live exactly on `block`. Agrees with xi_apply when the
// block is the full site set.
DenseMeasure xi_on_block(const CoefficientTable& table, Mask block,
                         const DenseMeasure& nu);

// Verifies that one step preserves every marginal inside an atom, and that
// products of marginals over the atom partition (and anything finer) are fixed
// points.
CheckReport check_marginal_preservation(const CoefficientTable& table,
                                        const DenseMeasure& mu);

// Verifies the closed form of each closure-set marginal after one step:
// marginal(xi[mu], K) = stay(K) mu_K + sum over splits of coeff(K,M) mu_M x mu_{K\M}.
CheckReport check_marginal_formula(const CoefficientTable& table,
                                   const DenseMeasure& mu);

}  // namespace recomb
