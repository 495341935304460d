#pragma once

#include <map>
#include <set>

#include "recomb/check.hpp"
#include "recomb/rational.hpp"
#include "recomb/subset.hpp"

namespace recomb {

// A probability vector over nonempty subsets of the site set: weight(J) is the
// chance that an offspring takes the sites in J from one parent and the rest
// from the other.
struct RecombDistribution {
  SiteSet sites;
  std::map<Mask, Rat, SubsetLess> weights;  // keys nonempty, values > 0, sum 1

  Rat weight(Mask j) const {
    auto it = weights.find(j);
    return it == weights.end() ? Rat(0) : it->second;
  }
  // weight(I) = 1 makes the recombination operator the identity map.
  bool is_identity() const { return weight(sites.full()) == 1; }
};

// Validates: no empty-set weight, no negative weights, total exactly 1.
// Zero weights are dropped; weight(I) = 1 is accepted (identity case).
RecombDistribution make_distribution(const SiteSet& sites,
                                     const std::map<Mask, Rat, SubsetLess>& raw);

// Averages each complementary pair: weight'(J) = weight'(J^c) =
// (weight(J) + weight(J^c)) / 2, leaving weight(I) alone. The recombination
// operator is unchanged because the two sides of a split are exchangeable.
RecombDistribution symmetrize(const RecombDistribution& rho);

// The split calculus of a distribution. For each block K the row
// coeff(K, .) is a probability vector over traces M = J cap K:
//   coeff(K, M) = total weight of support sets whose trace on K is M  (M != K)
//   coeff(K, K) = total weight of support sets containing or missing K
// (those draws leave K intact). Rows exist for every K in the closure of the
// complement-closed support, plus the full set I itself (whose "stay" weight
// is weight(I) and may be 0). Absent entries read as 0.
struct CoefficientTable {
  RecombDistribution rho;
  std::set<Mask> closure_sets;  // closure of support union complements
  Partition atom_partition;     // finest blocks never cut by recombination
  std::map<Mask, std::map<Mask, Rat, SubsetLess>, SubsetLess> entries;

  bool is_atom(Mask l) const;
  bool has_row(Mask k) const { return entries.count(k) != 0; }
  const std::map<Mask, Rat, SubsetLess>& row(Mask k) const;
  Rat coeff(Mask k, Mask m) const;
  // The stay weight coeff(K, K).
  Rat stay(Mask k) const { return coeff(k, k); }
};

// Closure and atoms are always computed on the complement-closed family
// (support plus complements of proper support sets); the coefficients always
// use the raw, possibly asymmetric weights.
CoefficientTable coefficient_table(const RecombDistribution& rho);

// One-step law of a single block K: the key K means "keep K whole"; a key M
// with the lowest site of K means "split K into {M, K minus M}", carrying
// weight coeff(K,M) + coeff(K, K minus M). Only positive entries are stored,
// and the weights sum to 1. K must have a coefficient row (closure or I).
std::map<Mask, Rat, SubsetLess> dyadic_kernel(const CoefficientTable& table, Mask k);

// Checks the three coefficient laws over the whole table:
//  - strict monotonicity: a proper trace M = J cap K has coeff(M,M) strictly
//    above coeff(K,K) (smaller blocks are harder to cut);
//  - split symmetry coeff(K,M) = coeff(K, K minus M), only when
//    expect_split_symmetry (requires symmetrized weights);
//  - stay weight 1 exactly for atoms, below 1 for everything else.
CheckReport check_coefficient_laws(const CoefficientTable& table,
                                   bool expect_split_symmetry);

}  // namespace recomb
