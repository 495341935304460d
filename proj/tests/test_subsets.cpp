#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "recomb/subset.hpp"

using namespace recomb;

namespace {

Mask S(std::initializer_list<int> sites) {
  Mask m = 0;
  for (int i : sites) m |= Mask(1) << (i - 1);
  return m;
}

// Brute-force oracle: every nonempty intersection over all subfamilies,
// enumerated directly (exponential, test-only).
std::set<Mask> closure_oracle(const std::set<Mask>& family) {
  std::vector<Mask> f(family.begin(), family.end());
  std::set<Mask> out;
  for (std::size_t pick = 1; pick < (std::size_t(1) << f.size()); ++pick) {
    Mask inter = ~Mask(0);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (pick & (std::size_t(1) << i)) inter &= f[i];
    if (inter) out.insert(inter);
  }
  return out;
}

std::set<Mask> minimal_elements(const std::set<Mask>& sets) {
  std::set<Mask> out;
  for (Mask a : sets) {
    bool minimal = true;
    for (Mask b : sets) {
      if (b != a && (b & a) == b) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.insert(a);
  }
  return out;
}

}  // namespace

TEST_CASE("site set construction and caps") {
  SiteSet s = make_site_set(3);
  CHECK(s.full() == S({1, 2, 3}));
  CHECK_THROWS_AS(make_site_set(1), validation_error);
  CHECK_THROWS_AS(make_site_set(17), resource_limit_error);
  CHECK(make_site_set(17, {}, false).n_sites == 17);
  CHECK_THROWS_AS(make_site_set(65, {}, false), resource_limit_error);
  CHECK_THROWS_AS(make_site_set(3, {"a", "b"}), validation_error);
}

TEST_CASE("subset formatting and parsing round-trip") {
  CHECK(format_subset(S({1, 3})) == "[1,3]");
  CHECK(format_subset(0) == "[]");
  CHECK(parse_subset("[1,3]", 3) == S({1, 3}));
  CHECK(parse_subset("[ 2 , 3 ]", 3) == S({2, 3}));
  CHECK(parse_subset("[]", 3) == 0);
  CHECK_THROWS_AS(parse_subset("[4]", 3), validation_error);
  CHECK_THROWS_AS(parse_subset("[1,1]", 3), validation_error);
  CHECK_THROWS_AS(parse_subset("[1", 3), validation_error);
  CHECK_THROWS_AS(parse_subset("1,2", 3), validation_error);
  for (Mask m = 1; m < 32; ++m) CHECK(parse_subset(format_subset(m), 5) == m);
}

TEST_CASE("subset ordering is lexicographic on index lists") {
  CHECK(compare_subsets(S({1, 3}), S({2})) < 0);  // 1 < 2
  CHECK(compare_subsets(S({1}), S({1, 3})) < 0);  // prefix first
  CHECK(compare_subsets(S({2}), S({1, 3})) > 0);
  CHECK(compare_subsets(S({2, 3}), S({2, 3})) == 0);
}

TEST_CASE("partition canonical form and validation") {
  Mask universe = S({1, 2, 3, 4});
  Partition p = make_partition({S({2, 3}), S({1, 4})}, universe);
  CHECK(p.blocks == std::vector<Mask>{S({1, 4}), S({2, 3})});
  CHECK(format_partition(p) == "[[1,4],[2,3]]");
  CHECK_THROWS_AS(make_partition({S({1, 2}), S({2, 3}), S({4})}, universe), validation_error);
  CHECK_THROWS_AS(make_partition({S({1, 2})}, universe), validation_error);
  CHECK_THROWS_AS(make_partition({S({1, 2}), 0, S({3, 4})}, universe), validation_error);
  CHECK(singleton_partition(make_site_set(3)).blocks ==
        std::vector<Mask>{S({1}), S({2}), S({3})});
}

TEST_CASE("is_finer is a partial order") {
  SiteSet s = make_site_set(3);
  Mask universe = s.full();
  Partition coarse = make_partition({universe}, universe);
  Partition mid = make_partition({S({1, 2}), S({3})}, universe);
  Partition fine = singleton_partition(s);

  CHECK(is_finer(fine, coarse));
  CHECK(is_finer(fine, mid));
  CHECK(is_finer(mid, coarse));
  CHECK_FALSE(is_finer(coarse, fine));
  CHECK_FALSE(is_finer(mid, fine));
  // Reflexive, and antisymmetry on canonical forms.
  CHECK(is_finer(mid, mid));
  Partition other = make_partition({S({1}), S({2, 3})}, universe);
  CHECK_FALSE(is_finer(mid, other));
  CHECK_FALSE(is_finer(other, mid));
}

TEST_CASE("union_check") {
  Mask universe = S({1, 2, 3});
  Partition atoms3 = make_partition({S({1}), S({2}), S({3})}, universe);
  CHECK(union_check(S({1, 2}), atoms3));
  Partition two = make_partition({S({1}), S({2, 3})}, universe);
  CHECK_FALSE(union_check(S({1, 3}), two));
  CHECK(union_check(universe, two));
  CHECK(union_check(0, two));  // empty union
}

TEST_CASE("closure fixed point, worked example") {
  // Single set closes to itself.
  std::set<Mask> just_i = {S({1, 2, 3})};
  CHECK(closure(just_i) == just_i);

  // Crossover support on three sites.
  std::set<Mask> family = {S({1}), S({2, 3}), S({1, 2}), S({3})};
  std::set<Mask> expect = {S({1}), S({2}), S({3}), S({1, 2}), S({2, 3})};
  CHECK(closure(family) == expect);

  // A complementary pair produces no new intersections.
  std::set<Mask> pair = {S({1, 2}), S({3, 4})};
  CHECK(closure(pair) == pair);

  CHECK_THROWS_AS(closure({}), validation_error);
  CHECK_THROWS_AS(closure({S({1}), 0}), validation_error);
}

TEST_CASE("closure equals the brute-force oracle and is idempotent") {
  std::vector<std::set<Mask>> families = {
      {S({1}), S({2, 3}), S({1, 2}), S({3})},
      {S({1, 2}), S({3, 4}), S({1, 3}), S({2, 4})},
      {S({1, 2, 3}), S({4}), S({1, 4}), S({2, 3})},
      {S({1, 2, 3, 4})},
      {S({1, 3, 5}), S({2, 4}), S({1, 2}), S({3, 4, 5})},
  };
  for (const auto& f : families) {
    auto got = closure(f);
    CHECK(got == closure_oracle(f));
    CHECK(closure(got) == got);
    for (Mask m : f) CHECK(got.count(m) == 1);
  }
}

TEST_CASE("atoms: worked example and laws") {
  Mask universe = S({1, 2, 3});
  CHECK(atoms({universe}, universe) == make_partition({universe}, universe));

  std::set<Mask> family = {S({1}), S({2, 3}), S({1, 2}), S({3})};
  Partition d = atoms(family, universe);
  CHECK(d == make_partition({S({1}), S({2}), S({3})}, universe));

  std::set<Mask> pair = {S({1, 2}), S({3})};
  CHECK(atoms(pair, universe) == make_partition({S({1, 2}), S({3})}, universe));

  // Atoms are the minimal closure elements, and every closure element is a
  // union of the atoms it contains.
  std::set<Mask> family4 = {S({1, 2}), S({3, 4}), S({1, 3}), S({2, 4})};
  Mask u4 = S({1, 2, 3, 4});
  Partition d4 = atoms(family4, u4);
  auto closed = closure(family4);
  std::set<Mask> blocks(d4.blocks.begin(), d4.blocks.end());
  CHECK(blocks == minimal_elements(closed));
  for (Mask k : closed) CHECK(union_check(k, d4));

  // A family that is not complement-closed cannot tile the universe.
  CHECK_THROWS_AS(atoms({S({1})}, universe), validation_error);
}
