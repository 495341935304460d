#include "recomb/subset.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <deque>

namespace recomb {

SiteSet make_site_set(int n_sites, std::vector<std::string> site_labels,
                      bool enumeration_mode) {
  int cap = enumeration_mode ? SiteSet::kEnumerationCap : SiteSet::kSimulationCap;
  if (n_sites < 2)
    throw validation_error("site set needs at least 2 sites, got " + std::to_string(n_sites));
  if (n_sites > cap)
    throw resource_limit_error("site set of " + std::to_string(n_sites) +
                               " sites exceeds the cap of " + std::to_string(cap) +
                               (enumeration_mode ? " for exhaustive analyses" : ""));
  if (!site_labels.empty() && static_cast<int>(site_labels.size()) != n_sites)
    throw validation_error("site_labels must be empty or name every site");
  return SiteSet{n_sites, std::move(site_labels)};
}

int bit_count(Mask m) { return std::popcount(m); }

int lowest_bit(Mask m) { return std::countr_zero(m); }

std::vector<int> sites_of(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m) + 1);
    m &= m - 1;
  }
  return out;
}

std::string format_subset(Mask m) {
  std::string out = "[";
  bool first = true;
  for (int i : sites_of(m)) {
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  }
  return out + "]";
}

Mask parse_subset(const std::string& text, int n_sites) {
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  skip_space();
  if (i >= text.size() || text[i] != '[')
    throw validation_error("bad subset '" + text + "': expected '['");
  ++i;
  Mask m = 0;
  skip_space();
  if (i < text.size() && text[i] == ']') {
    ++i;
  } else {
    while (true) {
      skip_space();
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i == start) throw validation_error("bad subset '" + text + "': expected site index");
      int site = std::stoi(text.substr(start, i - start));
      if (site < 1 || site > n_sites)
        throw validation_error("bad subset '" + text + "': site " + std::to_string(site) +
                               " outside 1.." + std::to_string(n_sites));
      Mask bit = Mask(1) << (site - 1);
      if (m & bit)
        throw validation_error("bad subset '" + text + "': repeated site " + std::to_string(site));
      m |= bit;
      skip_space();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == ']') {
        ++i;
        break;
      }
      throw validation_error("bad subset '" + text + "': expected ',' or ']'");
    }
  }
  skip_space();
  if (i != text.size())
    throw validation_error("bad subset '" + text + "': trailing characters");
  return m;
}

int compare_subsets(Mask a, Mask b) {
  // Walk common low bits; the first differing site decides, a prefix sorts first.
  while (a && b) {
    int ia = std::countr_zero(a), ib = std::countr_zero(b);
    if (ia != ib) return ia < ib ? -1 : 1;
    a &= a - 1;
    b &= b - 1;
  }
  if (a == b) return 0;
  return a == 0 ? -1 : 1;
}

int compare_partitions(const Partition& a, const Partition& b) {
  std::size_t n = std::min(a.blocks.size(), b.blocks.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_subsets(a.blocks[i], b.blocks[i]);
    if (c != 0) return c;
  }
  if (a.blocks.size() == b.blocks.size()) return 0;
  return a.blocks.size() < b.blocks.size() ? -1 : 1;
}

Partition make_partition(std::vector<Mask> blocks, Mask universe) {
  Mask seen = 0;
  for (Mask b : blocks) {
    if (b == 0) throw validation_error("partition contains an empty block");
    if ((b & universe) != b)
      throw validation_error("partition block " + format_subset(b) + " leaves the site set");
    if (seen & b)
      throw validation_error("partition blocks overlap at " + format_subset(seen & b));
    seen |= b;
  }
  if (seen != universe)
    throw validation_error("partition does not cover the site set; missing " +
                           format_subset(universe & ~seen));
  std::sort(blocks.begin(), blocks.end(),
            [](Mask x, Mask y) { return lowest_bit(x) < lowest_bit(y); });
  return Partition{std::move(blocks)};
}

Partition singleton_partition(const SiteSet& sites) {
  std::vector<Mask> blocks;
  blocks.reserve(static_cast<std::size_t>(sites.n_sites));
  for (int i = 0; i < sites.n_sites; ++i) blocks.push_back(Mask(1) << i);
  return Partition{std::move(blocks)};
}

std::string format_partition(const Partition& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    if (i) out += ",";
    out += format_subset(p.blocks[i]);
  }
  return out + "]";
}

bool is_finer(const Partition& a, const Partition& b) {
  for (Mask block : a.blocks) {
    bool inside = false;
    for (Mask big : b.blocks) {
      if ((block & big) == block) {
        inside = true;
        break;
      }
    }
    if (!inside) return false;
  }
  return true;
}

bool union_check(Mask subset, const Partition& p) {
  Mask covered = 0;
  for (Mask block : p.blocks)
    if ((block & subset) == block) covered |= block;
  return covered == subset;
}

std::set<Mask> closure(const std::set<Mask>& family) {
  if (family.empty()) throw validation_error("closure of an empty family");
  if (family.count(0)) throw validation_error("closure: family contains the empty set");
  std::set<Mask> out = family;
  std::deque<Mask> work(family.begin(), family.end());
  // Intersecting with generators until nothing new appears yields every
  // nonempty intersection of family members.
  while (!work.empty()) {
    Mask a = work.front();
    work.pop_front();
    for (Mask j : family) {
      Mask b = a & j;
      if (b && !out.count(b)) {
        out.insert(b);
        work.push_back(b);
      }
    }
  }
  return out;
}

Partition atoms(const std::set<Mask>& family, Mask universe) {
  std::set<Mask> closed = closure(family);
  std::vector<Mask> blocks;
  for (Mask l : closed) {
    bool atom = true;
    for (Mask j : family) {
      Mask cut = l & j;
      if (cut != 0 && cut != l) {
        atom = false;
        break;
      }
    }
    if (atom) blocks.push_back(l);
  }
  // Distinct atoms are automatically disjoint; coverage needs the family to be
  // complement-closed, which is the caller's obligation.
  Mask covered = 0;
  for (Mask b : blocks) {
    if (covered & b) throw invariant_violation("atoms overlap");
    covered |= b;
  }
  if (covered != universe)
    throw validation_error(
        "atoms do not cover the site set (family not complement-closed); missing " +
        format_subset(universe & ~covered));
  return make_partition(std::move(blocks), universe);
}

}  // namespace recomb
