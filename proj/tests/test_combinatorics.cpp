#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "stochlab/combinatorics.hpp"

using namespace stochlab;

namespace {

// Brute-force oracle: number of ways to write r as an ordered sum of n
// nonnegative integers.
unsigned long count_compositions(unsigned long r, unsigned long n) {
  if (n == 1) return 1;
  unsigned long total = 0;
  for (unsigned long first = 0; first <= r; ++first)
    total += count_compositions(r - first, n - 1);
  return total;
}

// Brute-force oracle: permutations of {0..n-1} with at least one fixed point.
std::pair<unsigned long, unsigned long> count_fixed_point_perms(unsigned n) {
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  unsigned long with_fp = 0, total = 0;
  do {
    ++total;
    for (unsigned i = 0; i < n; ++i)
      if (perm[i] == i) {
        ++with_fp;
        break;
      }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {with_fp, total};
}

// The inclusion-exclusion inputs of the matching problem: for any r-subset
// of positions, P[all r positions fixed] = (N-r)!/N!.
std::map<unsigned long, Rational> matching_subset_probs(unsigned n) {
  std::map<unsigned long, Rational> probs;
  const Integer nfact = factorial(n);
  for (unsigned long mask = 1; mask < (1UL << n); ++mask) {
    const int r = __builtin_popcountl(mask);
    probs[mask] = Rational(factorial(n - r), nfact);
  }
  return probs;
}

}  // namespace

TEST_CASE("binomial: boundary values and spot checks") {
  CHECK(binomial(52, 5) == 2598960);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(13, 8) == 1287);
  CHECK(binomial(4, -1) == 0);
  CHECK(binomial(4, 5) == 0);
  CHECK(binomial(0, 0) == 1);
}

TEST_CASE("binomial: Pascal recurrence and symmetry") {
  for (unsigned long n = 1; n <= 40; ++n)
    for (long long k = 0; k <= static_cast<long long>(n); ++k) {
      CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
      CHECK(binomial(n, k) == binomial(n, static_cast<long long>(n) - k));
    }
}

TEST_CASE("multinomial: examples and error") {
  CHECK(multinomial(4, {2, 2}) == 6);
  CHECK(multinomial(3, {3}) == 1);
  CHECK(multinomial(12, {2, 2, 2, 2, 2, 2}) == 7484400);
  CHECK_THROWS_WITH_AS(multinomial(4, {2, 3}), doctest::Contains("PartsMismatch"),
                       DomainError);
}

TEST_CASE("multinomial: binomial special case") {
  for (unsigned long n = 0; n <= 12; ++n)
    for (unsigned long k = 0; k <= n; ++k)
      CHECK(multinomial(n, {k, n - k}) == binomial(n, static_cast<long long>(k)));
}

TEST_CASE("sampling_counts: examples") {
  const auto words = sampling_counts(26, 10);
  CHECK(words.with_replacement == pow(Integer(26), 10));
  CHECK(words.without_replacement == factorial(26) / factorial(16));

  const auto empty = sampling_counts(7, 0);
  CHECK(empty.with_replacement == 1);
  CHECK(empty.without_replacement == 1);

  const auto birthday = sampling_counts(10, 4);
  CHECK(birthday.with_replacement == 10000);
  CHECK(birthday.without_replacement == 5040);
  const Rational no_repeat(birthday.without_replacement, birthday.with_replacement);
  CHECK(no_repeat == Rational(5040, 10000));

  CHECK(sampling_counts(3, 5).without_replacement == 0);
}

TEST_CASE("occupancy_count: closed form vs composition enumeration") {
  CHECK(occupancy_count(8, 6) == 1287);
  CHECK(occupancy_count(0, 5) == 1);
  CHECK(occupancy_count(2, 2) == 3);
  for (unsigned long r = 0; r <= 8; ++r)
    for (unsigned long n = 1; n <= 8; ++n)
      CHECK(occupancy_count(r, n) == count_compositions(r, n));
  CHECK_THROWS_AS(occupancy_count(3, 0), DomainError);
}

TEST_CASE("stirling_bounds: brackets n! exactly for n <= 50") {
  for (unsigned long n = 1; n <= 50; ++n) {
    const auto [lo, hi] = stirling_bounds(n);
    const Rational exact(factorial(n));
    CHECK(lo <= exact);
    CHECK(exact <= hi);
  }
}

TEST_CASE("stirling_bounds: window is tight at n = 20") {
  const auto [lo, hi] = stirling_bounds(20);
  const Rational exact(factorial(20));
  CHECK((hi - lo) / exact <= Rational(1, 1000));
}

TEST_CASE("union_probability: matching inputs, trivial case, errors") {
  CHECK(union_probability(3, matching_subset_probs(3)) == Rational(2, 3));
  CHECK(union_probability(4, matching_subset_probs(4)) == Rational(5, 8));

  std::map<unsigned long, Rational> single{{1UL, Rational(3, 7)}};
  CHECK(union_probability(1, single) == Rational(3, 7));

  auto missing = matching_subset_probs(3);
  missing.erase(5);
  CHECK_THROWS_WITH_AS(union_probability(3, missing),
                       doctest::Contains("MissingSubset"), DomainError);

  std::map<unsigned long, Rational> bad{{1UL, Rational(9, 7)}};
  CHECK_THROWS_WITH_AS(union_probability(1, bad), doctest::Contains("OutOfRange"),
                       DomainError);
}

TEST_CASE("matching_probability: enumeration oracle and e^{-1} limit") {
  CHECK(matching_probability(1) == 1);
  CHECK(matching_probability(3) == Rational(2, 3));
  for (unsigned n = 1; n <= 8; ++n) {
    const auto [with_fp, total] = count_fixed_point_perms(n);
    CHECK(matching_probability(n) == Rational(with_fp, total));
  }
  const double p10 = to_double(matching_probability(10));
  CHECK(std::fabs(p10 - (1.0 - std::exp(-1.0))) <= 1e-6);
}

TEST_CASE("matching_probability equals union_probability on matching inputs") {
  for (unsigned n = 1; n <= 8; ++n)
    CHECK(matching_probability(n) == union_probability(n, matching_subset_probs(n)));
}
