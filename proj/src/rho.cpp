#include "recomb/rho.hpp"

namespace recomb {

RecombDistribution make_distribution(const SiteSet& sites,
                                     const std::map<Mask, Rat, SubsetLess>& raw) {
  RecombDistribution out;
  out.sites = sites;
  Rat total(0);
  for (const auto& [j, w] : raw) {
    if (j == 0 && w != 0)
      throw validation_error("recombination weight on the empty set must be 0, got " +
                             format_fraction(w));
    if ((j & sites.full()) != j)
      throw validation_error("support set " + format_subset(j) + " leaves the site set");
    if (w < 0)
      throw validation_error("negative weight " + format_fraction(w) + " on " +
                             format_subset(j));
    if (j != 0 && w > 0) out.weights[j] = w;
    total += w;
  }
  if (total != 1)
    throw validation_error("recombination weights sum to " + format_fraction(total) +
                           ", expected exactly 1");
  return out;
}

RecombDistribution symmetrize(const RecombDistribution& rho) {
  RecombDistribution out;
  out.sites = rho.sites;
  Mask full = rho.sites.full();
  for (const auto& [j, w] : rho.weights) {
    if (j == full) {
      out.weights[j] = w;
      continue;
    }
    Rat avg = (w + rho.weight(full & ~j)) / 2;
    out.weights[j] = avg;
    out.weights[full & ~j] = avg;
  }
  return out;
}

bool CoefficientTable::is_atom(Mask l) const {
  for (Mask b : atom_partition.blocks)
    if (b == l) return true;
  return false;
}

const std::map<Mask, Rat, SubsetLess>& CoefficientTable::row(Mask k) const {
  auto it = entries.find(k);
  if (it == entries.end())
    throw validation_error("no coefficient row for " + format_subset(k) +
                           ": not in the support closure (or the full site set)");
  return it->second;
}

Rat CoefficientTable::coeff(Mask k, Mask m) const {
  const auto& r = row(k);
  auto it = r.find(m);
  return it == r.end() ? Rat(0) : it->second;
}

CoefficientTable coefficient_table(const RecombDistribution& rho) {
  CoefficientTable out;
  out.rho = rho;
  Mask full = rho.sites.full();

  // Complement-closed family generated by the support.
  std::set<Mask> family;
  for (const auto& [j, w] : rho.weights) {
    family.insert(j);
    if (j != full) family.insert(full & ~j);
  }
  out.closure_sets = closure(family);
  out.atom_partition = atoms(family, full);

  std::set<Mask> domain = out.closure_sets;
  domain.insert(full);  // the chain needs the one-step law of I even when weight(I) = 0
  for (Mask k : domain) {
    auto& row = out.entries[k];
    for (const auto& [j, w] : rho.weights) {
      Mask trace = j & k;
      if (trace == 0 || trace == k) {
        row[k] += w;  // the draw leaves block K whole
      } else {
        row[trace] += w;
      }
    }
    // Positive entries only ever enter rows, so a closure set (always contained
    // in, or disjoint from, some support set) must have a positive stay weight.
    if (k != full && row.find(k) == row.end())
      throw invariant_violation("stay weight of closure set " + format_subset(k) +
                                " is zero");
  }
  return out;
}

std::map<Mask, Rat, SubsetLess> dyadic_kernel(const CoefficientTable& table, Mask k) {
  const auto& row = table.row(k);
  std::map<Mask, Rat, SubsetLess> kernel;
  Mask low = Mask(1) << lowest_bit(k);
  for (const auto& [m, w] : row) {
    if (m == k) {
      kernel[k] += w;
    } else {
      // Both orientations of the same unordered split accumulate on the side
      // holding K's lowest site.
      Mask side = (m & low) ? m : (k & ~m);
      kernel[side] += w;
    }
  }
  return kernel;
}

CheckReport check_coefficient_laws(const CoefficientTable& table,
                                   bool expect_split_symmetry) {
  CheckReport report;
  for (const auto& [k, row] : table.entries) {
    // Strict monotonicity over every achieved proper trace.
    for (const auto& entry : table.rho.weights) {
      Mask m = entry.first & k;
      if (m == 0 || m == k) continue;
      if (!(table.stay(k) < table.stay(m)))
        report.fail("stay(" + format_subset(k) + ") = " + format_fraction(table.stay(k)) +
                    " not strictly below stay(" + format_subset(m) + ") = " +
                    format_fraction(table.stay(m)));
    }
    // Split symmetry.
    if (expect_split_symmetry) {
      for (const auto& [m, w] : row) {
        if (m == k) continue;
        if (table.coeff(k, k & ~m) != w)
          report.fail("coeff(" + format_subset(k) + "," + format_subset(m) +
                      ") = " + format_fraction(w) + " but the mirror side carries " +
                      format_fraction(table.coeff(k, k & ~m)));
      }
    }
    // Atoms are exactly the blocks with stay weight 1.
    bool atom = table.is_atom(k);
    if (atom != (table.stay(k) == 1))
      report.fail("stay(" + format_subset(k) + ") = " + format_fraction(table.stay(k)) +
                  (atom ? " but the block is an atom" : " but the block is not an atom"));
  }
  return report;
}

}  // namespace recomb
