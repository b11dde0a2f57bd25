#include "stochlab/combinatorics.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <numeric>

namespace stochlab {

CountResult binomial(unsigned long n, long long k) {
  if (k < 0 || static_cast<unsigned long long>(k) > n) return 0;
  auto r = static_cast<unsigned long>(k);
  if (n - r < r) r = n - r;  // C(n,k) = C(n,n-k); use the shorter product
  Integer acc(1);
  for (unsigned long i = 1; i <= r; ++i) {
    acc *= n - r + i;
    acc /= i;  // exact: acc is C(n-r+i, i) after each step
  }
  return acc;
}

CountResult multinomial(unsigned long n, const std::vector<unsigned long>& parts) {
  unsigned long long total = 0;
  for (unsigned long r : parts) total += r;
  if (total != n)
    raise("PartsMismatch", "parts sum to " + std::to_string(total) +
                               ", expected " + std::to_string(n));
  Integer acc = factorial(n);
  for (unsigned long r : parts) acc /= factorial(r);
  return acc;
}

SamplingCounts sampling_counts(unsigned long n, unsigned long r) {
  Integer with(1), without(1);
  for (unsigned long i = 0; i < r; ++i) {
    with *= n;
    without *= (i < n) ? Integer(n - i) : Integer(0);
  }
  return {with, without};
}

CountResult occupancy_count(unsigned long r, unsigned long n) {
  if (n < 1) raise("BadArgument", "occupancy_count needs n >= 1 cells");
  return binomial(n + r - 1, static_cast<long long>(r));
}

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

Rational to_rational(const Float50& x) {
  return x.convert_to<Rational>();
}

Float50 stirling_value(unsigned long n, const Float50& theta) {
  const Float50 nn(n);
  const Float50 root_two_pi =
      sqrt(2 * boost::math::constants::pi<Float50>());
  return root_two_pi * pow(nn, nn + Float50(0.5)) *
         exp(-nn + theta / (12 * nn));
}

}  // namespace

StirlingBounds stirling_bounds(unsigned long n) {
  if (n < 1) raise("BadArgument", "stirling_bounds needs n >= 1");
  const Float50 theta_lo = Float50(1) - Float50(1) / (12 * Float50(n) + 1);
  const Float50 slack("1e-40");  // outward widening beyond evaluation error
  Float50 lo = stirling_value(n, theta_lo) * (Float50(1) - slack);
  Float50 hi = stirling_value(n, Float50(1)) * (Float50(1) + slack);
  return {to_rational(lo), to_rational(hi)};
}

Rational union_probability(
    unsigned n_events, const std::map<unsigned long, Rational>& subset_probs) {
  if (n_events == 0 || n_events > 30)
    raise("BadArgument", "n_events must be in [1, 30]");
  const unsigned long full = (1UL << n_events) - 1;
  Rational total(0);
  for (unsigned long mask = 1; mask <= full; ++mask) {
    const auto it = subset_probs.find(mask);
    if (it == subset_probs.end())
      raise("MissingSubset",
            "no probability for subset mask " + std::to_string(mask));
    const Rational& p = it->second;
    if (p < 0 || p > 1)
      raise("OutOfRange", "subset probability outside [0,1] at mask " +
                              std::to_string(mask));
    const int bits = __builtin_popcountl(mask);
    total += (bits % 2 == 1) ? p : -p;
  }
  if (total < 0 || total > 1)
    raise("OutOfRange", "inclusion-exclusion result outside [0,1]: " +
                            format_rational(total));
  return total;
}

Rational matching_probability(unsigned long n) {
  if (n < 1) raise("BadArgument", "matching_probability needs N >= 1");
  // 1 - 1/2! + 1/3! - ... +- 1/N!
  Rational total(0);
  Integer kfact(1);
  for (unsigned long k = 1; k <= n; ++k) {
    kfact *= k;
    const Rational term(Integer(1), kfact);
    total += (k % 2 == 1) ? term : -term;
  }
  return total;
}

}  // namespace stochlab
