#include "recomb/measure.hpp"

#include <string>
#include <utility>

#include "recomb/errors.hpp"

namespace recomb {

namespace {

std::vector<std::size_t> strides_for(const std::vector<int>& dims) {
  std::vector<std::size_t> strides(dims.size());
  std::size_t acc = 1;
  for (std::size_t p = dims.size(); p-- > 0;) {
    strides[p] = acc;
    acc *= static_cast<std::size_t>(dims[p]);
  }
  return strides;
}

std::size_t cell_count(const std::vector<int>& dims) {
  std::size_t acc = 1;
  for (int d : dims) acc *= static_cast<std::size_t>(d);
  return acc;
}

// Advances a mixed-radix counter with the last digit fastest.
void advance(std::vector<int>& digits, const std::vector<int>& dims) {
  for (std::size_t p = digits.size(); p-- > 0;) {
    if (++digits[p] < dims[p]) return;
    digits[p] = 0;
  }
}

void add_scaled(DenseMeasure& acc, const Rat& w, const DenseMeasure& term) {
  for (std::size_t i = 0; i < acc.table.size(); ++i) acc.table[i] += w * term.table[i];
}

DenseMeasure zeros_like(const DenseMeasure& shape) {
  return DenseMeasure{shape.support, shape.dims,
                      std::vector<Rat>(shape.table.size(), Rat(0))};
}

}  // namespace

AlphabetSpec make_alphabets(const SiteSet& sites, std::vector<int> sizes,
                            std::size_t max_cells) {
  if (sizes.size() != static_cast<std::size_t>(sites.n_sites)) {
    throw validation_error("alphabet list must have one size per site");
  }
  std::size_t cells = 1;
  for (int s : sizes) {
    if (s < 2) throw validation_error("every alphabet needs at least 2 letters");
    if (cells > max_cells / static_cast<std::size_t>(s)) {
      throw resource_limit_error("dense table would exceed " +
                                 std::to_string(max_cells) + " cells");
    }
    cells *= static_cast<std::size_t>(s);
  }
  return AlphabetSpec{std::move(sizes)};
}

AlphabetSpec binary_alphabets(const SiteSet& sites) {
  return make_alphabets(sites, std::vector<int>(static_cast<std::size_t>(sites.n_sites), 2));
}

DenseMeasure make_measure(const AlphabetSpec& alphabet, Mask support,
                          std::vector<Rat> table) {
  int n = static_cast<int>(alphabet.sizes.size());
  if (n < 64 && (support >> n) != 0) {
    throw validation_error("measure support mentions a site with no alphabet");
  }
  std::vector<int> dims;
  for (int site0 = 0; site0 < n; ++site0) {
    if (support & (Mask(1) << site0)) dims.push_back(alphabet.sizes[static_cast<std::size_t>(site0)]);
  }
  if (table.size() != cell_count(dims)) {
    throw validation_error("measure table has " + std::to_string(table.size()) +
                           " entries, expected " + std::to_string(cell_count(dims)));
  }
  Rat total(0);
  for (const Rat& v : table) {
    if (v < 0) throw validation_error("measure entries must be nonnegative");
    total += v;
  }
  if (total != 1) throw validation_error("measure entries must sum to 1");
  return DenseMeasure{support, std::move(dims), std::move(table)};
}

DenseMeasure scalar_measure() { return DenseMeasure{0, {}, {Rat(1)}}; }

DenseMeasure measure_from_marginals(const AlphabetSpec& alphabet,
                                    const std::vector<std::vector<Rat>>& per_site) {
  if (per_site.size() != alphabet.sizes.size()) {
    throw validation_error("need one marginal vector per site");
  }
  std::vector<int> dims = alphabet.sizes;
  for (std::size_t p = 0; p < per_site.size(); ++p) {
    if (per_site[p].size() != static_cast<std::size_t>(dims[p])) {
      throw validation_error("marginal for site " + std::to_string(p + 1) +
                             " has the wrong length");
    }
    Rat total(0);
    for (const Rat& v : per_site[p]) {
      if (v < 0) throw validation_error("marginal entries must be nonnegative");
      total += v;
    }
    if (total != 1) throw validation_error("marginal for site " + std::to_string(p + 1) +
                                           " must sum to 1");
  }
  std::size_t cells = cell_count(dims);
  std::vector<Rat> table(cells);
  std::vector<int> digits(dims.size(), 0);
  for (std::size_t i = 0; i < cells; ++i) {
    Rat v(1);
    for (std::size_t p = 0; p < digits.size(); ++p) {
      v *= per_site[p][static_cast<std::size_t>(digits[p])];
    }
    table[i] = std::move(v);
    advance(digits, dims);
  }
  Mask support = (dims.size() == 64) ? ~Mask(0) : ((Mask(1) << dims.size()) - 1);
  return DenseMeasure{support, std::move(dims), std::move(table)};
}

DenseMeasure marginal(const DenseMeasure& mu, Mask k) {
  if ((k & mu.support) != k) {
    throw validation_error("marginal target " + format_subset(k) +
                           " is not inside the measure support " +
                           format_subset(mu.support));
  }
  if (k == mu.support) return mu;
  std::vector<int> src_sites = sites_of(mu.support);
  std::vector<int> tdims;
  for (std::size_t p = 0; p < src_sites.size(); ++p) {
    if (k & (Mask(1) << (src_sites[p] - 1))) tdims.push_back(mu.dims[p]);
  }
  std::vector<std::size_t> tstrides = strides_for(tdims);
  std::vector<std::size_t> pos_stride(src_sites.size(), 0);
  std::size_t tp = 0;
  for (std::size_t p = 0; p < src_sites.size(); ++p) {
    if (k & (Mask(1) << (src_sites[p] - 1))) pos_stride[p] = tstrides[tp++];
  }
  DenseMeasure out{k, tdims, std::vector<Rat>(cell_count(tdims), Rat(0))};
  std::vector<int> digits(mu.dims.size(), 0);
  for (std::size_t i = 0; i < mu.table.size(); ++i) {
    std::size_t t = 0;
    for (std::size_t p = 0; p < digits.size(); ++p) {
      t += static_cast<std::size_t>(digits[p]) * pos_stride[p];
    }
    out.table[t] += mu.table[i];
    advance(digits, mu.dims);
  }
  return out;
}

DenseMeasure product(const DenseMeasure& a, const DenseMeasure& b) {
  if (a.support & b.support) {
    throw validation_error("product factors must live on disjoint site sets");
  }
  Mask u = a.support | b.support;
  std::vector<int> sites = sites_of(u);
  std::vector<int> dims;
  std::vector<std::size_t> a_stride(sites.size(), 0), b_stride(sites.size(), 0);
  std::vector<std::size_t> a_str = strides_for(a.dims), b_str = strides_for(b.dims);
  std::size_t ap = 0, bp = 0;
  for (std::size_t p = 0; p < sites.size(); ++p) {
    Mask bit = Mask(1) << (sites[p] - 1);
    if (a.support & bit) {
      dims.push_back(a.dims[ap]);
      a_stride[p] = a_str[ap++];
    } else {
      dims.push_back(b.dims[bp]);
      b_stride[p] = b_str[bp++];
    }
  }
  std::size_t cells = cell_count(dims);
  std::vector<Rat> table(cells);
  std::vector<int> digits(dims.size(), 0);
  for (std::size_t i = 0; i < cells; ++i) {
    std::size_t ai = 0, bi = 0;
    for (std::size_t p = 0; p < digits.size(); ++p) {
      ai += static_cast<std::size_t>(digits[p]) * a_stride[p];
      bi += static_cast<std::size_t>(digits[p]) * b_stride[p];
    }
    table[i] = a.table[ai] * b.table[bi];
    advance(digits, dims);
  }
  return DenseMeasure{u, std::move(dims), std::move(table)};
}

DenseMeasure product_over_partition(const DenseMeasure& mu, const Partition& p) {
  make_partition(p.blocks, mu.support);  // validates blocks cover the support exactly
  DenseMeasure acc = scalar_measure();
  for (Mask block : p.blocks) acc = product(acc, marginal(mu, block));
  return acc;
}

DenseMeasure xi_apply(const RecombDistribution& rho, const DenseMeasure& mu) {
  Mask full = rho.sites.full();
  if (mu.support != full) {
    throw validation_error("recombination acts on measures over the full site set");
  }
  DenseMeasure acc = zeros_like(mu);
  for (const auto& [j, w] : rho.weights) {
    if (j == full) {
      add_scaled(acc, w, mu);
    } else {
      add_scaled(acc, w, product(marginal(mu, j), marginal(mu, full & ~j)));
    }
  }
  return acc;
}

DenseMeasure xi_iterate(const RecombDistribution& rho, DenseMeasure mu, int n) {
  if (n < 0) throw validation_error("step count must be nonnegative");
  for (int i = 0; i < n; ++i) mu = xi_apply(rho, mu);
  return mu;
}

DenseMeasure xi_on_block(const CoefficientTable& table, Mask block,
                         const DenseMeasure& nu) {
  if (!table.has_row(block)) {
    throw validation_error("no coefficient row for " + format_subset(block));
  }
  if (nu.support != block) {
    throw validation_error("measure support must equal the block " + format_subset(block));
  }
  DenseMeasure acc = zeros_like(nu);
  for (const auto& [m, w] : table.row(block)) {
    if (m == block) {
      add_scaled(acc, w, nu);
    } else {
      add_scaled(acc, w, product(marginal(nu, m), marginal(nu, block & ~m)));
    }
  }
  return acc;
}

CheckReport check_marginal_preservation(const CoefficientTable& table,
                                        const DenseMeasure& mu) {
  CheckReport rep;
  const RecombDistribution& rho = table.rho;
  DenseMeasure xi = xi_apply(rho, mu);
  for (Mask atom : table.atom_partition.blocks) {
    for (Mask m = atom; m != 0; m = (m - 1) & atom) {
      if (marginal(xi, m) != marginal(mu, m)) {
        rep.fail("one step changed the marginal on " + format_subset(m) +
                 " inside the atom " + format_subset(atom));
      }
    }
  }
  std::vector<Partition> finers;
  finers.push_back(table.atom_partition);
  Partition singles = singleton_partition(rho.sites);
  if (!(singles == table.atom_partition)) finers.push_back(singles);
  for (const Partition& d : finers) {
    DenseMeasure nu = product_over_partition(mu, d);
    if (!(xi_apply(rho, nu) == nu)) {
      rep.fail("product of marginals over " + format_partition(d) +
               " is not a fixed point");
    }
  }
  return rep;
}

CheckReport check_marginal_formula(const CoefficientTable& table,
                                   const DenseMeasure& mu) {
  CheckReport rep;
  DenseMeasure xi = xi_apply(table.rho, mu);
  for (const auto& [k, row] : table.entries) {
    DenseMeasure lhs = marginal(xi, k);
    DenseMeasure acc = zeros_like(lhs);
    for (const auto& [m, w] : row) {
      if (m == k) {
        add_scaled(acc, w, marginal(mu, k));
      } else {
        add_scaled(acc, w, product(marginal(mu, m), marginal(mu, k & ~m)));
      }
    }
    if (!(lhs == acc)) {
      rep.fail("coefficient formula missed the marginal on " + format_subset(k));
    }
  }
  return rep;
}

}  // namespace recomb
