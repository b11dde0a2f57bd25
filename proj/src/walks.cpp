#include "stochlab/walks.hpp"

namespace stochlab {

CountResult path_count(unsigned long n, long long x) {
  const long long nn = static_cast<long long>(n);
  if (x > nn || x < -nn) return 0;
  if ((nn + x) % 2 != 0) return 0;
  return binomial(n, (nn + x) / 2);
}

Rational ballot_probability(unsigned long p, unsigned long q) {
  if (p <= q)
    raise("NotMajority", "ballot theorem needs p > q, got p = " +
                             std::to_string(p) + ", q = " + std::to_string(q));
  return Rational(Integer(p) - Integer(q), Integer(p) + Integer(q));
}

ReflectionCount reflection_count(unsigned long a, unsigned long alpha,
                                 unsigned long b, unsigned long beta) {
  if (b <= a) raise("BadArgument", "reflection_count needs b > a");
  if (alpha == 0 || beta == 0)
    raise("BadArgument", "reflection_count needs alpha, beta > 0");
  const unsigned long m = b - a;
  const long long rise = static_cast<long long>(beta) - static_cast<long long>(alpha);
  // Paths between heights are origin paths shifted; touching ones reflect to
  // paths climbing from -alpha, i.e. displacement beta + alpha.
  return {path_count(m, static_cast<long long>(beta) + static_cast<long long>(alpha)),
          path_count(m, rise)};
}

Rational position_pmf(unsigned long n, long long r) {
  return Rational(path_count(n, r), pow(Integer(2), n));
}

Rational position_pmf(unsigned long n, long long r, const Rational& p) {
  if (p < 0 || p > 1) raise("BadArgument", "up-step probability outside [0,1]");
  const CountResult count = path_count(n, r);
  if (count == 0) return Rational(0);
  const long long ups = (static_cast<long long>(n) + r) / 2;
  const long long downs = static_cast<long long>(n) - ups;
  return Rational(count) * pow_rational(p, ups) * pow_rational(1 - p, downs);
}

Rational return_probability(unsigned long nu) {
  return Rational(binomial(2 * nu, static_cast<long long>(nu)),
                  pow(Integer(2), 2 * nu));
}

Rational first_return_probability(unsigned long nu) {
  if (nu < 1) raise("BadArgument", "first return needs nu >= 1");
  const Rational via_ratio = return_probability(nu) / Rational(2 * nu - 1);
  const Rational via_difference =
      return_probability(nu - 1) - return_probability(nu);
  if (via_ratio != via_difference)
    raise("InternalError", "first-return closed forms disagree at nu = " +
                               std::to_string(nu));
  return via_ratio;
}

Rational no_zero_probability(unsigned long n, bool strictly_positive) {
  if (n == 0) return Rational(1);  // empty condition, in either mode
  const Rational u = return_probability(n);
  return strictly_positive ? u / 2 : u;
}

Rational last_visit_pmf(unsigned long k, unsigned long n) {
  if (k > n)
    raise("IndexOutOfRange", "last_visit_pmf needs k <= n, got k = " +
                                 std::to_string(k) + ", n = " + std::to_string(n));
  return return_probability(k) * return_probability(n - k);
}

std::vector<Path> enumerate_paths(unsigned long n) {
  if (n > 24)
    raise("HorizonTooLarge", "enumerate_paths is capped at n = 24, got " +
                                 std::to_string(n));
  std::vector<Path> paths;
  paths.reserve(1UL << n);
  for (unsigned long bits = 0; bits < (1UL << n); ++bits) {
    Path path;
    path.steps.reserve(n);
    path.partials.reserve(n + 1);
    path.partials.push_back(0);
    int s = 0;
    for (unsigned long i = 0; i < n; ++i) {
      const int step = (bits >> i) & 1 ? +1 : -1;
      s += step;
      path.steps.push_back(step);
      path.partials.push_back(s);
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

}  // namespace stochlab
