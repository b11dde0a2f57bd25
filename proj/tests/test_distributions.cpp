#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "stochlab/distributions.hpp"
#include "stochlab/linalg.hpp"

using namespace stochlab;

namespace {

std::vector<Distribution> catalog() {
  return {bernoulli(Rational(1, 3)),
          binomial(7, Rational(2, 5)),
          geometric(Rational(1, 3)),
          geometric_shifted(Rational(1, 2)),
          poisson(Rational(3, 2)),
          discrete_uniform({Rational(-1), Rational(1)}),
          zeta_law(4.5),
          continuous_uniform(Rational(-1), Rational(2)),
          exponential(Rational(3, 2)),
          gaussian(Rational(1, 2), Rational(9, 4))};
}

double moment2(const Distribution& d) {
  const double mu = mean(d).value;
  return variance(d).value + mu * mu;
}

}  // namespace

TEST_CASE("factories reject out-of-range parameters") {
  CHECK_THROWS_WITH_AS(bernoulli(Rational(3, 2)), doctest::Contains("BadParameter"),
                       DomainError);
  CHECK_THROWS_AS(binomial(0, Rational(1, 2)), DomainError);
  CHECK_THROWS_AS(geometric(Rational(1)), DomainError);
  CHECK_THROWS_AS(poisson(Rational(0)), DomainError);
  CHECK_THROWS_AS(discrete_uniform({}), DomainError);
  CHECK_THROWS_AS(zeta_law(1.0), DomainError);
  CHECK_THROWS_AS(continuous_uniform(Rational(2), Rational(2)), DomainError);
  CHECK_THROWS_AS(exponential(Rational(-1)), DomainError);
  CHECK_THROWS_AS(gaussian(Rational(0), Rational(0)), DomainError);
}

TEST_CASE("riemann_zeta matches reference values") {
  CHECK(std::fabs(riemann_zeta(2.0) - M_PI * M_PI / 6.0) < 1e-13);
  CHECK(std::fabs(riemann_zeta(4.0) - std::pow(M_PI, 4) / 90.0) < 1e-13);
  CHECK(std::fabs(riemann_zeta(3.0) - 1.2020569031595943) < 1e-13);
  CHECK(std::fabs(riemann_zeta(1.5) - 2.6123753486854883) < 1e-12);
  CHECK_THROWS_AS(riemann_zeta(1.0), DomainError);
}

TEST_CASE("pmf spot values") {
  CHECK(mass_or_density(geometric(Rational(1, 2)), Rational(2)).exact ==
        Rational(1, 8));
  CHECK(mass_or_density(binomial(5, Rational(1, 3)), Rational(5)).exact ==
        Rational(1, 243));
  CHECK(std::fabs(mass_or_density(poisson(Rational(1)), Rational(0)).value -
                  std::exp(-1.0)) < 1e-12);
  CHECK(mass_or_density(geometric_shifted(Rational(1, 2)), Rational(3)).exact ==
        Rational(1, 8));
  CHECK(mass_or_density(geometric_shifted(Rational(1, 2)), Rational(0)).exact ==
        Rational(0));
  CHECK(mass_or_density(discrete_uniform({Rational(-1), Rational(1)}), Rational(1))
            .exact == Rational(1, 2));
  CHECK(mass_or_density(continuous_uniform(Rational(0), Rational(4)), Rational(1))
            .exact == Rational(1, 4));
  CHECK(mass_or_density(exponential(Rational(1)), Rational(-1)).exact ==
        Rational(0));
  CHECK(std::fabs(mass_or_density(gaussian(Rational(0), Rational(1)), Rational(0))
                      .value -
                  1.0 / std::sqrt(2.0 * M_PI)) < 1e-12);
}

TEST_CASE("non-integer points on integer laws raise UnsupportedPoint") {
  CHECK_THROWS_WITH_AS(mass_or_density(binomial(4, Rational(1, 2)), Rational(1, 2)),
                       doctest::Contains("UnsupportedPoint"), DomainError);
  CHECK_THROWS_AS(mass_or_density(poisson(Rational(2)), Rational(3, 7)),
                  DomainError);
  // Out-of-support integers are legal zero-mass points, not errors.
  CHECK(mass_or_density(geometric(Rational(1, 3)), Rational(-2)).exact ==
        Rational(0));
}

TEST_CASE("finite rational laws have exactly unit total mass") {
  for (unsigned long n = 1; n <= 25; ++n)
    for (const Rational p : {Rational(1, 3), Rational(7, 10)}) {
      Rational total(0);
      for (unsigned long k = 0; k <= n; ++k)
        total += *mass_or_density(binomial(n, p), Rational(k)).exact;
      CHECK(total == 1);
    }
  const auto rademacher = discrete_uniform({Rational(-1), Rational(1)});
  CHECK(*mass_or_density(rademacher, Rational(-1)).exact +
            *mass_or_density(rademacher, Rational(1)).exact ==
        1);
}

TEST_CASE("geometric partial sums match the closed form exactly") {
  const Rational p(2, 7);
  Rational total(0);
  for (long long k = 0; k <= 300; ++k)
    total += *mass_or_density(geometric(p), Rational(k)).exact;
  CHECK(total == 1 - pow_rational(p, 301));

  const Rational r(3, 5);
  Rational shifted_total(0);
  for (long long k = 1; k <= 300; ++k)
    shifted_total += *mass_or_density(geometric_shifted(r), Rational(k)).exact;
  CHECK(shifted_total == 1 - pow_rational(r, 300));
}

TEST_CASE("infinite-support masses sum to one within 1e-12") {
  for (const Rational lam : {Rational(1, 2), Rational(3), Rational(10)}) {
    double total = 0.0;
    for (long long k = 0; k <= 200; ++k)
      total += mass_or_density(poisson(lam), Rational(k)).value;
    CHECK(std::fabs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("zeta tail is sandwiched by the integral bounds") {
  const double s = 2.5;
  const auto d = zeta_law(s);
  const double z = riemann_zeta(s);
  const double n = 1000.0;
  const double tail = 1.0 - cdf(d, n);
  CHECK(tail <= std::pow(n, 1.0 - s) / (s - 1.0) / z + 1e-12);
  CHECK(tail >= std::pow(n + 1.0, 1.0 - s) / (s - 1.0) / z - 1e-12);
}

TEST_CASE("means and variances match closed forms and direct sums") {
  CHECK(mean(binomial(10, Rational(1, 2))).exact == Rational(5));
  CHECK(mean(exponential(Rational(2))).exact == Rational(1, 2));
  CHECK(mean(geometric(Rational(1, 2))).exact == Rational(1));
  CHECK(mean(geometric_shifted(Rational(1, 2))).exact == Rational(2));
  CHECK(variance(bernoulli(Rational(1, 4))).exact == Rational(3, 16));
  CHECK(variance(gaussian(Rational(0), Rational(7, 2))).exact == Rational(7, 2));
  CHECK(variance(discrete_uniform({Rational(5)})).exact == Rational(0));
  CHECK(variance(continuous_uniform(Rational(0), Rational(1))).exact ==
        Rational(1, 12));

  // Direct-sum oracles for the infinite discrete laws.
  const auto geo = geometric(Rational(1, 3));
  double geo_mean = 0.0;
  for (long long k = 0; k <= 200; ++k)
    geo_mean += static_cast<double>(k) *
                mass_or_density(geo, Rational(k)).value;
  CHECK(std::fabs(geo_mean - mean(geo).value) < 1e-12);

  const auto poi = poisson(Rational(5, 2));
  double poi_mean = 0.0, poi_m2 = 0.0;
  for (long long k = 0; k <= 150; ++k) {
    const double mass = mass_or_density(poi, Rational(k)).value;
    poi_mean += static_cast<double>(k) * mass;
    poi_m2 += static_cast<double>(k * k) * mass;
  }
  CHECK(std::fabs(poi_mean - mean(poi).value) < 1e-12);
  CHECK(std::fabs(poi_m2 - poi_mean * poi_mean - variance(poi).value) < 1e-12);

  const auto zl = zeta_law(3.5);
  const double z = riemann_zeta(3.5);
  double zeta_mean = 0.0;
  for (double k = 1.0; k <= 1.0e6; k += 1.0) zeta_mean += std::pow(k, -2.5) / z;
  CHECK(std::fabs(zeta_mean - mean(zl).value) < 2e-9);

  const auto zl2 = zeta_law(4.5);
  const double z2 = riemann_zeta(4.5);
  double zeta_m2 = 0.0;
  for (double k = 1.0; k <= 1.0e6; k += 1.0) zeta_m2 += std::pow(k, -2.5) / z2;
  CHECK(std::fabs(zeta_m2 - moment2(zl2)) < 2e-9);
}

TEST_CASE("undefined moments raise MomentUndefined") {
  CHECK_THROWS_WITH_AS(mean(zeta_law(1.5)), doctest::Contains("MomentUndefined"),
                       DomainError);
  CHECK_THROWS_AS(mean(zeta_law(2.0)), DomainError);
  CHECK_THROWS_AS(variance(zeta_law(2.5)), DomainError);
  CHECK(mean(zeta_law(2.5)).value > 0.0);
}

TEST_CASE("cdf: limits, monotonicity, spot values") {
  CHECK(std::fabs(cdf(exponential(Rational(1)), std::log(2.0)) - 0.5) < 1e-12);
  CHECK(cdf(gaussian(Rational(0), Rational(1)), 0.0) == doctest::Approx(0.5));
  CHECK(cdf(binomial(6, Rational(1, 2)), 6.0) == doctest::Approx(1.0));
  CHECK(cdf(bernoulli(Rational(1, 3)), 0.5) == doctest::Approx(2.0 / 3.0));
  CHECK(cdf(geometric_shifted(Rational(1, 2)), 0.9) == 0.0);

  for (const auto& d : catalog()) {
    CHECK(cdf(d, -1.0e6) < 1e-6);
    CHECK(cdf(d, 1.0e6) > 1.0 - 1e-6);
    double prev = -1.0;
    for (double t = -10.0; t <= 10.0; t += 0.25) {
      const double now = cdf(d, t);
      CHECK(now >= prev - 1e-15);
      CHECK(now >= 0.0);
      CHECK(now <= 1.0);
      prev = now;
    }
  }
}

TEST_CASE("jump is the point mass for discrete laws, zero otherwise") {
  CHECK(jump(bernoulli(Rational(1, 3)), Rational(1)).exact == Rational(1, 3));
  CHECK(jump(exponential(Rational(1)), Rational(7, 3)).exact == Rational(0));
  CHECK(jump(gaussian(Rational(0), Rational(1)), Rational(0)).exact == Rational(0));
  CHECK(jump(discrete_uniform({Rational(-1), Rational(1)}), Rational(-1)).exact ==
        Rational(1, 2));
  // The jump reproduces cdf(a) - cdf(a-) numerically.
  const auto d = binomial(5, Rational(2, 5));
  for (long long k = 0; k <= 5; ++k) {
    const double step = cdf(d, static_cast<double>(k)) -
                        cdf(d, static_cast<double>(k) - 1e-9);
    CHECK(std::fabs(step - jump(d, Rational(k)).value) < 1e-9);
  }
}

TEST_CASE("characteristic functions: unit value at zero, modulus bound, symmetry") {
  for (const auto& d : catalog()) {
    if (d.tag == DistTag::Zeta) {
      CHECK_THROWS_WITH_AS(char_fn(d, 1.0), doctest::Contains("Unsupported"),
                           DomainError);
      continue;
    }
    CHECK(std::abs(char_fn(d, 0.0) - std::complex<double>(1.0, 0.0)) < 1e-15);
    for (double xi = -20.0; xi <= 20.0; xi += 0.5) {
      CHECK(std::abs(char_fn(d, xi)) <= 1.0 + 1e-12);
      CHECK(std::abs(char_fn(d, -xi) - std::conj(char_fn(d, xi))) < 1e-12);
    }
  }
}

TEST_CASE("characteristic function spot values") {
  CHECK(std::abs(char_fn(gaussian(Rational(0), Rational(1)), 1.0) -
                 std::complex<double>(std::exp(-0.5), 0.0)) < 1e-12);
  CHECK(std::abs(char_fn(poisson(Rational(1)), M_PI) -
                 std::complex<double>(std::exp(-2.0), 0.0)) < 1e-12);
  const auto rademacher = discrete_uniform({Rational(-1), Rational(1)});
  for (double xi = -3.0; xi <= 3.0; xi += 0.37)
    CHECK(std::abs(char_fn(rademacher, xi) -
                   std::complex<double>(std::cos(xi), 0.0)) < 1e-12);
}

TEST_CASE("characteristic functions match brute-force transform sums") {
  const auto bin = binomial(9, Rational(2, 7));
  const auto geo = geometric(Rational(2, 5));
  for (double xi = -5.0; xi <= 5.0; xi += 0.5) {
    std::complex<double> bsum(0.0, 0.0);
    for (long long k = 0; k <= 9; ++k)
      bsum += mass_or_density(bin, Rational(k)).value * std::polar(1.0, xi * k);
    CHECK(std::abs(bsum - char_fn(bin, xi)) < 1e-12);

    std::complex<double> gsum(0.0, 0.0);
    for (long long k = 0; k <= 200; ++k)
      gsum += mass_or_density(geo, Rational(k)).value * std::polar(1.0, xi * k);
    CHECK(std::abs(gsum - char_fn(geo, xi)) < 1e-12);
  }
}

TEST_CASE("numerically differentiated CF recovers the first two moments") {
  for (const auto& d : catalog()) {
    if (d.tag == DistTag::Zeta) continue;
    const double mu = mean(d).value;
    const double m2 = moment2(d);
    const double h1 = 1e-5;
    const double d1 =
        ((char_fn(d, h1) - char_fn(d, -h1)) / (2.0 * h1)).imag();
    CHECK(std::fabs(d1 - mu) < 1e-6 * (1.0 + std::fabs(mu)));
    const double h2 = 1e-4;
    const double d2 =
        ((char_fn(d, h2) - 2.0 * char_fn(d, 0.0) + char_fn(d, -h2)) / (h2 * h2))
            .real();
    CHECK(std::fabs(d2 + m2) < 1e-5 * (1.0 + m2));
  }
}

TEST_CASE("closed-form convolutions and the CF product identity") {
  const auto p12 = convolve(poisson(Rational(1)), poisson(Rational(2)));
  CHECK(p12.tag == DistTag::Poisson);
  CHECK(p12.lambda == Rational(3));

  const auto g = convolve(gaussian(Rational(0), Rational(1)),
                          gaussian(Rational(1), Rational(3)));
  CHECK(g.tag == DistTag::Gaussian);
  CHECK(g.m == Rational(1));
  CHECK(g.sigma2 == Rational(4));

  const auto bb = convolve(binomial(4, Rational(1, 3)), binomial(6, Rational(1, 3)));
  CHECK(bb.n == 10);
  const auto bber = convolve(bernoulli(Rational(2, 5)), binomial(6, Rational(2, 5)));
  CHECK(bber.tag == DistTag::Binomial);
  CHECK(bber.n == 7);
  const auto two = convolve(bernoulli(Rational(1, 2)), bernoulli(Rational(1, 2)));
  CHECK(two.n == 2);

  const std::vector<std::pair<Distribution, Distribution>> pairs = {
      {poisson(Rational(1)), poisson(Rational(2))},
      {gaussian(Rational(0), Rational(1)), gaussian(Rational(1), Rational(3))},
      {binomial(4, Rational(1, 3)), binomial(6, Rational(1, 3))},
      {bernoulli(Rational(2, 5)), binomial(6, Rational(2, 5))}};
  for (const auto& [d1, d2] : pairs) {
    const auto sum = convolve(d1, d2);
    for (double xi = -10.0; xi <= 10.0; xi += 0.4)
      CHECK(std::abs(char_fn(sum, xi) - char_fn(d1, xi) * char_fn(d2, xi)) <
            1e-12);
  }
}

TEST_CASE("Bernoulli + Binomial convolution matches the pmf convolution oracle") {
  const Rational p(2, 5);
  for (unsigned long n = 1; n <= 6; ++n) {
    const auto bern = bernoulli(p);
    const auto bin = binomial(n, p);
    const auto sum = convolve(bern, bin);
    REQUIRE(sum.n == n + 1);
    for (long long k = 0; k <= static_cast<long long>(n) + 1; ++k) {
      Rational direct(0);
      for (long long j = 0; j <= 1; ++j)
        direct += *mass_or_density(bern, Rational(j)).exact *
                  *mass_or_density(bin, Rational(k - j)).exact;
      CHECK(*mass_or_density(sum, Rational(k)).exact == direct);
    }
  }
}

TEST_CASE("unsupported convolutions raise NoClosedForm") {
  CHECK_THROWS_WITH_AS(
      convolve(binomial(3, Rational(1, 2)), binomial(3, Rational(1, 3))),
      doctest::Contains("NoClosedForm"), DomainError);
  CHECK_THROWS_AS(convolve(exponential(Rational(1)), gaussian(Rational(0), Rational(1))),
                  DomainError);
  CHECK_THROWS_AS(convolve(poisson(Rational(1)), binomial(3, Rational(1, 2))),
                  DomainError);
}

TEST_CASE("poisson approximation error shrinks as n grows") {
  const double e10 = poisson_approx_error(10, 1.0);
  const double e100 = poisson_approx_error(100, 1.0);
  CHECK(e10 > e100);
  CHECK(e100 > 0.0);
  // Degenerate rate lambda = n compares a point mass against Poisson(n);
  // the gap is largest at k = n itself.
  const double degenerate = poisson_approx_error(4, 4.0);
  const double at_four = std::exp(-4.0) * std::pow(4.0, 4.0) / 24.0;
  CHECK(degenerate == doctest::Approx(1.0 - at_four));
  CHECK_THROWS_WITH_AS(poisson_approx_error(3, 5.0), doctest::Contains("BadRate"),
                       DomainError);
  CHECK_THROWS_AS(poisson_approx_error(3, 0.0), DomainError);
}

TEST_CASE("tail bounds dominate the exact tails") {
  const auto tb = tail_bounds(exponential(Rational(1)), 2.0);
  REQUIRE(tb.markov.has_value());
  CHECK(*tb.markov == doctest::Approx(0.5));
  CHECK(tb.exact_upper == doctest::Approx(std::exp(-2.0)));

  const auto bern = tail_bounds(bernoulli(Rational(1, 2)), 0.4);
  CHECK(bern.chebyshev == doctest::Approx(0.25 / 0.16));
  CHECK(bern.exact_centered == doctest::Approx(1.0));
  CHECK(*bern.markov == doctest::Approx(1.25));
  CHECK(bern.exact_upper == doctest::Approx(0.5));

  // a below the mean gives a vacuous Markov bound.
  CHECK(*tail_bounds(exponential(Rational(1)), 0.5).markov >= 1.0);

  CHECK(!tail_bounds(gaussian(Rational(0), Rational(1)), 1.0).markov.has_value());

  for (const auto& d : {binomial(10, Rational(1, 2)), geometric(Rational(1, 3)),
                        poisson(Rational(2)), exponential(Rational(1))})
    for (double a : {0.5, 1.0, 2.0, 5.0}) {
      const auto bounds = tail_bounds(d, a);
      REQUIRE(bounds.markov.has_value());
      CHECK(bounds.exact_upper <= *bounds.markov + 1e-12);
      CHECK(bounds.exact_centered <= bounds.chebyshev + 1e-12);
    }
  CHECK_THROWS_AS(tail_bounds(exponential(Rational(1)), 0.0), DomainError);
}

TEST_CASE("exponential law is memoryless") {
  const auto d = exponential(Rational(3, 4));
  for (double a = 0.25; a <= 3.0; a += 0.25)
    for (double b = 0.25; b <= 3.0; b += 0.25) {
      const double joint = 1.0 - cdf(d, a + b);
      const double split = (1.0 - cdf(d, a)) * (1.0 - cdf(d, b));
      CHECK(std::fabs(joint - split) < 1e-12);
    }
}

TEST_CASE("gaussian vectors: validation and characteristic function") {
  CHECK_THROWS_WITH_AS(gaussian_vector({0.0}, {{1.0, 0.0}, {0.0, 1.0}}),
                       doctest::Contains("DimensionMismatch"), DomainError);
  CHECK_THROWS_WITH_AS(gaussian_vector({0.0, 0.0}, {{1.0, 0.5}, {0.4, 1.0}}),
                       doctest::Contains("BadParameter"), DomainError);
  CHECK_THROWS_WITH_AS(gaussian_vector({0.0, 0.0}, {{1.0, 2.0}, {2.0, 1.0}}),
                       doctest::Contains("BadParameter"), DomainError);

  const auto v = gaussian_vector({0.0, 0.0}, {{1.0, 0.0}, {0.0, 1.0}});
  CHECK(std::abs(gaussian_vector_cf(v, {0.0, 0.0}) -
                 std::complex<double>(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(gaussian_vector_cf(v, {1.0, 0.0}) -
                 std::complex<double>(std::exp(-0.5), 0.0)) < 1e-12);
  CHECK_THROWS_AS(gaussian_vector_cf(v, {1.0}), DomainError);

  // Diagonal covariance: the joint CF factors into marginal Gaussian CFs.
  const auto diag =
      gaussian_vector({0.5, -1.0, 2.0},
                      {{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 0.5}});
  const std::vector<Distribution> marginals = {
      gaussian(Rational(1, 2), Rational(1)), gaussian(Rational(-1), Rational(2)),
      gaussian(Rational(2), Rational(1, 2))};
  for (double u1 = -2.0; u1 <= 2.0; u1 += 1.0)
    for (double u2 = -2.0; u2 <= 2.0; u2 += 1.0)
      for (double u3 = -2.0; u3 <= 2.0; u3 += 1.0) {
        const auto joint = gaussian_vector_cf(diag, {u1, u2, u3});
        const auto product = char_fn(marginals[0], u1) *
                             char_fn(marginals[1], u2) *
                             char_fn(marginals[2], u3);
        CHECK(std::abs(joint - product) < 1e-12);
      }

  // A rank-deficient (PSD, singular) covariance is accepted.
  CHECK_NOTHROW(gaussian_vector({0.0, 0.0}, {{1.0, 1.0}, {1.0, 1.0}}));
}

TEST_CASE("exact linear algebra round-trips") {
  using namespace stochlab::linalg;
  const Matrix A = {{Rational(2), Rational(1)}, {Rational(1), Rational(3)}};
  const Vector b = {Rational(5), Rational(10)};
  const Vector x = solve_unique(A, b);
  CHECK(mat_vec(A, x) == b);
  CHECK(x[0] == Rational(1));
  CHECK(x[1] == Rational(3));

  const Matrix inv = invert(A);
  CHECK(mat_mul(A, inv) == identity(2));

  const Matrix singular = {{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
  CHECK_THROWS_WITH_AS(solve_unique(singular, {Rational(1), Rational(1)}),
                       doctest::Contains("SingularMatrix"), DomainError);
  const auto consistent = solve_general(singular, {Rational(1), Rational(2)});
  CHECK(consistent.consistent);
  CHECK(!consistent.unique);
  CHECK(mat_vec(singular, consistent.x) ==
        Vector{Rational(1), Rational(2)});
  const auto inconsistent = solve_general(singular, {Rational(1), Rational(3)});
  CHECK(!inconsistent.consistent);
  CHECK_THROWS_AS(invert(singular), DomainError);
}
