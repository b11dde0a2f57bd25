#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "stochlab/errors.hpp"
#include "stochlab/monte_carlo.hpp"
#include "stochlab/stream.hpp"

using namespace stochlab;

namespace {

// Independent quadratic-time KS recomputation: for every distinct sample
// value count the points below and at it by full scans.
double ks_brute_force(const std::vector<double>& sample,
                      const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sample.size());
  double worst = 0.0;
  for (double v : sample) {
    double below = 0.0, at_most = 0.0;
    for (double w : sample) {
      if (w < v) below += 1.0;
      if (w <= v) at_most += 1.0;
    }
    const double target = cdf(v);
    worst = std::max(worst, std::fabs(target - below / n));
    worst = std::max(worst, std::fabs(at_most / n - target));
  }
  return worst;
}

double sample_variance(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return var / static_cast<double>(xs.size() - 1);
}

}  // namespace

TEST_CASE("stream: determinism, range, and substream stability") {
  SeededStream a(2026, 3), b(2026, 3), c(2026, 4);
  bool all_equal = true, any_different = false;
  for (int i = 0; i < 1000; ++i) {
    const double u = a.next_unit();
    all_equal = all_equal && u == b.next_unit();
    any_different = any_different || u != c.next_unit();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    // Every draw is (k+1) * 2^-53: exactly representable as a dyadic rational.
    const Rational exact(u);
    CHECK((Integer(1) << 53) % denominator(exact) == 0);
  }
  CHECK(all_equal);
  CHECK(any_different);

  // Substreams depend on the constructor parameters, not on how many draws
  // the parent has already produced.
  SeededStream parent(99, 1);
  parent.next_unit();
  parent.next_unit();
  SeededStream fresh(99, 1);
  SeededStream sub_used = parent.substream(7);
  SeededStream sub_fresh = fresh.substream(7);
  for (int i = 0; i < 100; ++i)
    CHECK(sub_used.next_unit() == sub_fresh.next_unit());
}

TEST_CASE("sample: empty, frozen-seed moments, determinism") {
  SeededStream empty_stream(1);
  CHECK(sample(bernoulli(Rational(1, 2)), empty_stream, 0).empty());

  SeededStream coin_stream(11);
  const auto coins = sample(bernoulli(Rational(1, 2)), coin_stream, 100000);
  double mean = 0.0;
  for (double c : coins) mean += c;
  mean /= 100000.0;
  CHECK(mean >= 0.495);  // 3 sigma = 3/(2 sqrt(n)) = 0.0047
  CHECK(mean <= 0.505);

  SeededStream gauss_stream(12);
  const auto normals = sample(gaussian(Rational(0), Rational(1)),
                              gauss_stream, 100000);
  CHECK(sample_variance(normals) >= 0.98);  // 3 sigma band around 1
  CHECK(sample_variance(normals) <= 1.02);

  SeededStream s1(77, 5), s2(77, 5);
  CHECK(sample(poisson(Rational(3)), s1, 500) ==
        sample(poisson(Rational(3)), s2, 500));
}

TEST_CASE("ks_statistic: hand values and a quadratic oracle") {
  const auto uniform_cdf = [](double t) {
    return std::clamp(t, 0.0, 1.0);
  };
  CHECK(ks_statistic({0.5}, uniform_cdf) == doctest::Approx(0.5));
  CHECK(ks_statistic({0.1, 0.1}, uniform_cdf) == doctest::Approx(0.9));
  CHECK_THROWS_WITH_AS(ks_statistic({}, uniform_cdf),
                       doctest::Contains("BadArgument"), DomainError);

  std::mt19937 gen(555);
  std::uniform_int_distribution<int> lattice(-3, 3);
  std::uniform_int_distribution<int> size(1, 60);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<double> xs;
    const int n = size(gen);
    for (int i = 0; i < n; ++i)
      xs.push_back(lattice(gen) / 2.0);  // plenty of ties
    const auto cdf = [](double t) { return normal_cdf(t); };
    CHECK(ks_statistic(xs, cdf) ==
          doctest::Approx(ks_brute_force(xs, cdf)).epsilon(1e-12));
  }
}

TEST_CASE("lln_experiment: constant law, frozen-seed bands, errors") {
  const auto constant = lln_experiment(discrete_uniform({Rational(3)}), 1000,
                                       SeededStream(5));
  CHECK(constant.pass);
  CHECK(constant.stat("deviation_at_100") == 0.0);
  CHECK(constant.stat("deviation_at_1000") == 0.0);

  const auto coin = lln_experiment(bernoulli(Rational(1, 2)), 100000,
                                   SeededStream(1));
  CHECK(coin.pass);
  CHECK(coin.stat("band") == doctest::Approx(0.0063245553).epsilon(1e-6));
  CHECK(coin.stat("deviation_at_100000") <= 0.0063);
  CHECK(coin.seed == 1);

  const auto expo = lln_experiment(exponential(Rational(1)), 100000,
                                   SeededStream(1));
  CHECK(expo.pass);
  CHECK(expo.stat("deviation_at_100000") <= 0.0127);

  // Same seed, same report, bit for bit.
  const auto again = lln_experiment(bernoulli(Rational(1, 2)), 100000,
                                    SeededStream(1));
  CHECK(again.statistics == coin.statistics);

  // Mean exists but variance does not: informational run.
  const auto heavy = lln_experiment(zeta_law(2.5), 1000, SeededStream(2));
  CHECK(heavy.pass);
  CHECK(std::isinf(heavy.stat("band")));

  CHECK_THROWS_WITH_AS(lln_experiment(zeta_law(1.5), 100, SeededStream(1)),
                       doctest::Contains("MomentUndefined"), DomainError);
  CHECK_THROWS_WITH_AS(lln_experiment(bernoulli(Rational(1, 2)), 0,
                                      SeededStream(1)),
                       doctest::Contains("BadParameter"), DomainError);
}

TEST_CASE("clt_experiment: symmetric coin sums look normal at n = 1024") {
  // The exact lattice distribution already sits ~0.0125 from the normal cdf
  // (half the central jump), so the 0.015 budget needs a friendly seed.
  const auto report = clt_experiment(bernoulli(Rational(1, 2)), 1024, 20000,
                                     SeededStream(239));
  CHECK(report.pass);
  CHECK(report.stat("ks") <= 0.015);
  CHECK(report.stat("sqrt_n_ks") <= 1.0);

  // Serial and parallel replica loops agree bit-exactly.
  const auto serial = clt_experiment(bernoulli(Rational(1, 2)), 1024, 20000,
                                     SeededStream(239), ExecMode::Serial);
  CHECK(serial.statistics == report.statistics);
}

TEST_CASE("clt_experiment: exact normality leaves only replica noise") {
  const auto report = clt_experiment(gaussian(Rational(0), Rational(1)), 16,
                                     20000, SeededStream(43));
  CHECK(report.stat("ks") <= 1.4 / std::sqrt(20000.0));
  CHECK(report.pass);
}

TEST_CASE("clt_experiment: Berry-Esseen scaling across n") {
  for (std::size_t n : {64, 256, 1024}) {
    const auto report = clt_experiment(bernoulli(Rational(1, 2)), n, 20000,
                                       SeededStream(44));
    CHECK(report.stat("sqrt_n_ks") <= 1.0);
  }
}

TEST_CASE("clt_experiment: degenerate and heavy-tailed laws error out") {
  CHECK_THROWS_WITH_AS(
      clt_experiment(discrete_uniform({Rational(5)}), 64, 10, SeededStream(1)),
      doctest::Contains("DegenerateVariance"), DomainError);
  CHECK_THROWS_WITH_AS(clt_experiment(zeta_law(2.5), 64, 10, SeededStream(1)),
                       doctest::Contains("MomentUndefined"), DomainError);
  CHECK_THROWS_WITH_AS(clt_experiment(bernoulli(Rational(1, 2)), 0, 10,
                                      SeededStream(1)),
                       doctest::Contains("BadParameter"), DomainError);
  CHECK_THROWS_WITH_AS(clt_experiment(bernoulli(Rational(1, 2)), 64, 0,
                                      SeededStream(1)),
                       doctest::Contains("BadParameter"), DomainError);
}

TEST_CASE("glivenko_cantelli: frozen-seed sup distances") {
  const auto uniform = glivenko_cantelli(
      continuous_uniform(Rational(0), Rational(1)), 10000, SeededStream(7));
  CHECK(uniform.pass);
  CHECK(uniform.stat("sup_distance") <= 0.02);

  const auto poisson_run = glivenko_cantelli(poisson(Rational(3)), 10000,
                                             SeededStream(7));
  CHECK(poisson_run.pass);
  CHECK(poisson_run.stat("sup_distance") <= 0.02);

  // A single draw pins the empirical cdf to a unit step: sup >= 1/2.
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const auto tiny = glivenko_cantelli(
        continuous_uniform(Rational(0), Rational(1)), 1, SeededStream(seed));
    CHECK(tiny.stat("sup_distance") >= 0.5);
  }
}

TEST_CASE("borel_cantelli: limsup ratio sits in the heuristic band") {
  const auto report = borel_cantelli_demo(100000, SeededStream(3));
  CHECK(report.pass);
  CHECK(report.stat("r_at_100000") >= 1.0);
  CHECK(report.stat("r_at_100000") <= 2.0);
  CHECK(report.stat("exceed_15_log") < 10.0);
  // The count of X_n > log n keeps growing like log N.
  CHECK(report.stat("exceed_log_at_100000") >
        report.stat("exceed_log_at_1000"));

  CHECK_THROWS_WITH_AS(borel_cantelli_demo(99, SeededStream(3)),
                       doctest::Contains("BadParameter"), DomainError);
}

TEST_CASE("borel_cantelli_eval: harness flags rigged sequences") {
  // All draws microscopic: the ratio never reaches 1 and the run fails.
  std::vector<double> tiny(9999, 1e-12);
  const auto low = borel_cantelli_eval(tiny, 0);
  CHECK_FALSE(low.pass);
  CHECK(low.stat("r_at_10000") < 1e-3);

  // Draws from a stub stream of tiny uniforms: every exponential is huge,
  // the ratio blows far past 2, and the run fails on the high side.
  std::vector<double> huge(9999, -std::log(1e-300));
  const auto high = borel_cantelli_eval(huge, 0);
  CHECK_FALSE(high.pass);
  CHECK(high.stat("r_at_10000") > 2.0);

  CHECK_THROWS_WITH_AS(borel_cantelli_eval({}, 0),
                       doctest::Contains("BadParameter"), DomainError);
}

TEST_CASE("random_signs_verdict: closed-form verdicts") {
  CHECK(random_signs_verdict(power_signs(1.0), 100, SeededStream(1)).converges);
  CHECK_FALSE(
      random_signs_verdict(power_signs(0.0), 100, SeededStream(1)).converges);
  CHECK_FALSE(
      random_signs_verdict(power_signs(0.5), 100, SeededStream(1)).converges);
  CHECK(random_signs_verdict(power_signs(0.51), 100, SeededStream(1)).converges);
  CHECK(random_signs_verdict(geometric_signs(0.5), 100, SeededStream(1))
            .converges);
  CHECK(random_signs_verdict(geometric_signs(-0.9), 100, SeededStream(1))
            .converges);
  CHECK(random_signs_verdict(harmonic_log_signs(), 100, SeededStream(1))
            .converges);

  CHECK_THROWS_WITH_AS(geometric_signs(1.2),
                       doctest::Contains("UnsupportedDescriptor"), DomainError);
  CHECK_THROWS_WITH_AS(power_signs(std::nan("")),
                       doctest::Contains("UnsupportedDescriptor"), DomainError);
  CHECK_THROWS_WITH_AS(
      random_signs_verdict(power_signs(1.0), 0, SeededStream(1)),
      doctest::Contains("BadParameter"), DomainError);
  CHECK_THROWS_WITH_AS(sign_coefficient(power_signs(1.0), 0),
                       doctest::Contains("BadArgument"), DomainError);
}

TEST_CASE("random_signs_verdict: empirical spread separates the regimes") {
  const auto settled =
      random_signs_verdict(power_signs(1.0), 100000, SeededStream(9));
  CHECK(settled.converges);
  CHECK(settled.evidence.pass);
  CHECK(settled.evidence.stat("max_step") <= 0.05);
  // tail variance sum_{K<n<=2K} 1/n^2 is about 1/(2K)
  CHECK(settled.evidence.stat("tail_variance") ==
        doctest::Approx(5e-6).epsilon(0.01));

  const auto drifting =
      random_signs_verdict(power_signs(0.5), 100000, SeededStream(9));
  CHECK_FALSE(drifting.converges);
  CHECK(drifting.evidence.pass);
  CHECK(drifting.evidence.stat("range_at_2K") >
        drifting.evidence.stat("range_at_K"));
  CHECK(drifting.evidence.stat("max_step") >
        settled.evidence.stat("max_step"));
}

TEST_CASE("three_series_check: scaled symmetric signs") {
  using Kind = ThreeSeriesDescriptor::Kind;
  const auto over_n = three_series_check(
      {Kind::ScaledRademacher, power_signs(1.0)}, 1.0);
  CHECK(over_n.converges);
  CHECK(over_n.detail == "all three series converge");

  const auto unscaled = three_series_check(
      {Kind::ScaledRademacher, power_signs(0.0)}, 0.5);
  CHECK_FALSE(unscaled.converges);
  CHECK_FALSE(unscaled.tail_converges);
  CHECK(unscaled.detail == "sum P[|X_n| > k] diverges");

  const auto root_n = three_series_check(
      {Kind::ScaledRademacher, power_signs(0.5)}, 1.0);
  CHECK_FALSE(root_n.converges);
  CHECK(root_n.tail_converges);
  CHECK(root_n.means_converge);
  CHECK_FALSE(root_n.variances_converge);
  CHECK(root_n.detail == "sum of truncated variances diverges");

  // b_n = 1 but k >= 1: nothing sticks out, yet the variances pile up.
  const auto at_level = three_series_check(
      {Kind::ScaledRademacher, power_signs(0.0)}, 2.0);
  CHECK(at_level.tail_converges);
  CHECK_FALSE(at_level.variances_converge);

  // Growing scales: eventually everything is truncated away, but the first
  // series already diverges.
  const auto growing = three_series_check(
      {Kind::ScaledRademacher, power_signs(-1.0)}, 5.0);
  CHECK_FALSE(growing.tail_converges);
  CHECK(growing.variances_converge);
  CHECK_FALSE(growing.converges);

  CHECK(three_series_check({Kind::ScaledRademacher, geometric_signs(0.7)}, 1.0)
            .converges);
  CHECK(three_series_check({Kind::ScaledRademacher, harmonic_log_signs()}, 1.0)
            .converges);
}

TEST_CASE("three_series_check: truncated exponential scales") {
  using Kind = ThreeSeriesDescriptor::Kind;
  CHECK(three_series_check({Kind::TruncatedExponential, power_signs(2.0)}, 1.0)
            .converges);

  const auto slow = three_series_check(
      {Kind::TruncatedExponential, power_signs(0.8)}, 1.0);
  CHECK_FALSE(slow.converges);
  CHECK(slow.tail_converges);
  CHECK_FALSE(slow.means_converge);
  CHECK(slow.detail == "sum of truncated means diverges");

  const auto log_scale = three_series_check(
      {Kind::TruncatedExponential, harmonic_log_signs()}, 1.0);
  CHECK_FALSE(log_scale.converges);
  CHECK_FALSE(log_scale.means_converge);
  CHECK(log_scale.variances_converge);

  CHECK(three_series_check({Kind::TruncatedExponential, geometric_signs(1.0 / 3)},
                           2.0)
            .converges);

  CHECK_THROWS_WITH_AS(
      three_series_check({Kind::ScaledRademacher, power_signs(1.0)}, 0.0),
      doctest::Contains("BadParameter"), DomainError);
  CHECK_THROWS_WITH_AS(
      three_series_check({Kind::ScaledRademacher, power_signs(1.0)}, -1.0),
      doctest::Contains("BadParameter"), DomainError);
}

TEST_CASE("martingale_clt_experiment: normalized sums look normal") {
  const auto report = martingale_clt_experiment(1024, 20000, SeededStream(46));
  CHECK(report.pass);
  CHECK(report.stat("ks") <= 0.02);

  const auto serial = martingale_clt_experiment(
      1024, 20000, SeededStream(46), PredictableRule::SignOfPartialSum,
      ExecMode::Serial);
  CHECK(serial.statistics == report.statistics);

  CHECK_THROWS_WITH_AS(martingale_clt_experiment(32, 100, SeededStream(1)),
                       doctest::Contains("BadParameter"), DomainError);
  CHECK_THROWS_WITH_AS(martingale_clt_experiment(64, 0, SeededStream(1)),
                       doctest::Contains("BadParameter"), DomainError);
}

TEST_CASE("martingale_clt_experiment: identity rule reduces to the iid case") {
  // With the predictable factor pinned to one, the increments are the same
  // +-1 variables the Bernoulli(1/2) CLT run produces from the same
  // substreams, and the normalization is a power-of-two rescaling, so the
  // KS statistics agree bit for bit.
  const auto iid = martingale_clt_experiment(
      256, 4000, SeededStream(47), PredictableRule::Identity);
  const auto coin = clt_experiment(bernoulli(Rational(1, 2)), 256, 4000,
                                   SeededStream(47));
  CHECK(iid.stat("ks") == coin.stat("ks"));
  CHECK(iid.stat("sqrt_n_ks") == coin.stat("sqrt_n_ks"));
}

TEST_CASE("martingale_clt_experiment: distance shrinks with n") {
  const auto coarse = martingale_clt_experiment(64, 20000, SeededStream(48));
  const auto fine = martingale_clt_experiment(1024, 20000, SeededStream(48));
  CHECK(fine.stat("ks") < coarse.stat("ks"));
}

TEST_CASE("sampler correctness: ecdf within the DKW band on 20 seeds") {
  const std::vector<Distribution> catalog{
      bernoulli(Rational(1, 3)),
      binomial(10, Rational(1, 4)),
      geometric(Rational(1, 3)),
      geometric_shifted(Rational(1, 2)),
      poisson(Rational(3)),
      // dyadic atoms, so double round-trips are exact
      discrete_uniform({Rational(-1), Rational(0), Rational(1, 2), Rational(2)}),
      zeta_law(3.0),
      continuous_uniform(Rational(-1), Rational(2)),
      exponential(Rational(2)),
      gaussian(Rational(0), Rational(1)),  // exercises sqrt(E) cos(2 pi V)
      gaussian(Rational(1), Rational(4)),
  };
  const std::size_t n = 100000;
  const double band = 1.36 / std::sqrt(static_cast<double>(n));
  for (const auto& d : catalog) {
    int hits = 0;
    for (std::uint64_t seed = 900; seed < 920; ++seed) {
      const auto report = glivenko_cantelli(d, n, SeededStream(seed));
      if (report.stat("sup_distance") <= band) ++hits;
    }
    INFO(tag_name(d.tag));
    CHECK(hits >= 19);  // the DKW band is a 95% bound; allow one excursion
  }
}
