#include "stochlab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "stochlab/combinatorics.hpp"

namespace stochlab {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) raise("BadParameter", message);
}

bool is_probability(const Rational& p) { return p >= 0 && p <= 1; }

// Integer support point, or nullopt when x is not an integer.
std::optional<long long> as_integer(const Rational& x) {
  if (denominator(x) != 1) return std::nullopt;
  const Integer num = numerator(x);
  if (num < -(Integer(1) << 62) || num > (Integer(1) << 62)) return std::nullopt;
  return num.convert_to<long long>();
}

long long integer_point(const Distribution& d, const Rational& x) {
  const auto k = as_integer(x);
  if (!k)
    raise("UnsupportedPoint", tag_name(d.tag) + " is supported on integers, got " +
                                  format_rational(x));
  return *k;
}

std::complex<double> cpow_int(std::complex<double> base, unsigned long e) {
  std::complex<double> acc(1.0, 0.0);
  while (e != 0) {
    if (e & 1UL) acc *= base;
    base *= base;
    e >>= 1UL;
  }
  return acc;
}

double poisson_pmf(double lambda, unsigned long k) {
  if (lambda <= 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-lambda + static_cast<double>(k) * std::log(lambda) -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

double binomial_pmf(unsigned long n, double p, unsigned long k) {
  if (k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  const double log_choose = std::lgamma(static_cast<double>(n) + 1.0) -
                            std::lgamma(static_cast<double>(k) + 1.0) -
                            std::lgamma(static_cast<double>(n - k) + 1.0);
  return std::exp(log_choose + static_cast<double>(k) * std::log(p) +
                  static_cast<double>(n - k) * std::log1p(-p));
}

// Tail sum_{n >= N} n^{-s} by Euler-Maclaurin with corrections through B8.
double zeta_tail(double s, double N) {
  const double base = std::pow(N, -s);
  double tail = N * base / (s - 1.0) + base / 2.0;
  tail += s * base / (12.0 * N);
  tail -= s * (s + 1.0) * (s + 2.0) * base / (720.0 * N * N * N);
  tail += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * base /
          (30240.0 * std::pow(N, 5.0));
  tail -= s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * (s + 5.0) *
          (s + 6.0) * base / (1209600.0 * std::pow(N, 7.0));
  return tail;
}

bool is_nonnegative_law(const Distribution& d) {
  switch (d.tag) {
    case DistTag::Bernoulli:
    case DistTag::Binomial:
    case DistTag::Geometric:
    case DistTag::GeometricShifted:
    case DistTag::Poisson:
    case DistTag::Zeta:
    case DistTag::Exponential:
      return true;
    case DistTag::DiscreteUniform:
      return d.support.front() >= 0;
    case DistTag::ContinuousUniform:
      return d.a >= 0;
    case DistTag::Gaussian:
      return false;
  }
  return false;
}

// P[X = t] for a double query point; zero off the atoms.
double point_mass(const Distribution& d, double t) {
  if (!is_discrete(d)) return 0.0;
  if (d.tag == DistTag::DiscreteUniform) {
    const Rational rt(t);
    const auto hits = std::count(d.support.begin(), d.support.end(), rt);
    return static_cast<double>(hits) / static_cast<double>(d.support.size());
  }
  if (t != std::floor(t)) return 0.0;
  return mass_or_density(d, Rational(static_cast<long long>(t))).value;
}

std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> M) {
  const std::size_t n = M.size();
  double scale = 0.0;
  for (const auto& row : M)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) return std::vector<double>(n, 0.0);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::fabs(M[p][q]);
    if (off < 1e-15 * scale) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(M[p][q]) < 1e-18 * scale) continue;
        const double theta = (M[q][q] - M[p][p]) / (2.0 * M[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = M[k][p], mkq = M[k][q];
          M[k][p] = c * mkp - sn * mkq;
          M[k][q] = sn * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = M[p][k], mqk = M[q][k];
          M[p][k] = c * mpk - sn * mqk;
          M[q][k] = sn * mpk + c * mqk;
        }
      }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = M[i][i];
  return eig;
}

}  // namespace

Distribution bernoulli(const Rational& p) {
  require(is_probability(p), "bernoulli: p must lie in [0,1]");
  Distribution d;
  d.tag = DistTag::Bernoulli;
  d.p = p;
  return d;
}

Distribution binomial(unsigned long n, const Rational& p) {
  require(n >= 1, "binomial: need at least one trial");
  require(is_probability(p), "binomial: p must lie in [0,1]");
  Distribution d;
  d.tag = DistTag::Binomial;
  d.n = n;
  d.p = p;
  return d;
}

Distribution geometric(const Rational& p) {
  require(p >= 0 && p < 1, "geometric: p must lie in [0,1)");
  Distribution d;
  d.tag = DistTag::Geometric;
  d.p = p;
  return d;
}

Distribution geometric_shifted(const Rational& r) {
  require(r >= 0 && r < 1, "geometric_shifted: r must lie in [0,1)");
  Distribution d;
  d.tag = DistTag::GeometricShifted;
  d.p = r;
  return d;
}

Distribution poisson(const Rational& lambda) {
  require(lambda > 0, "poisson: lambda must be positive");
  Distribution d;
  d.tag = DistTag::Poisson;
  d.lambda = lambda;
  return d;
}

Distribution discrete_uniform(std::vector<Rational> support) {
  require(!support.empty(), "discrete_uniform: support must be nonempty");
  std::sort(support.begin(), support.end());
  Distribution d;
  d.tag = DistTag::DiscreteUniform;
  d.support = std::move(support);
  return d;
}

Distribution zeta_law(double s) {
  require(std::isfinite(s) && s > 1.0, "zeta: exponent must satisfy s > 1");
  Distribution d;
  d.tag = DistTag::Zeta;
  d.s = s;
  return d;
}

Distribution continuous_uniform(const Rational& a, const Rational& b) {
  require(a < b, "continuous_uniform: need a < b");
  Distribution d;
  d.tag = DistTag::ContinuousUniform;
  d.a = a;
  d.b = b;
  return d;
}

Distribution exponential(const Rational& lambda) {
  require(lambda > 0, "exponential: lambda must be positive");
  Distribution d;
  d.tag = DistTag::Exponential;
  d.lambda = lambda;
  return d;
}

Distribution gaussian(const Rational& m, const Rational& sigma2) {
  require(sigma2 > 0, "gaussian: variance must be positive");
  Distribution d;
  d.tag = DistTag::Gaussian;
  d.m = m;
  d.sigma2 = sigma2;
  return d;
}

std::string tag_name(DistTag tag) {
  switch (tag) {
    case DistTag::Bernoulli: return "bernoulli";
    case DistTag::Binomial: return "binomial";
    case DistTag::Geometric: return "geometric";
    case DistTag::GeometricShifted: return "geometric_shifted";
    case DistTag::Poisson: return "poisson";
    case DistTag::DiscreteUniform: return "discrete_uniform";
    case DistTag::Zeta: return "zeta";
    case DistTag::ContinuousUniform: return "continuous_uniform";
    case DistTag::Exponential: return "exponential";
    case DistTag::Gaussian: return "gaussian";
  }
  return "unknown";
}

bool is_discrete(const Distribution& d) {
  switch (d.tag) {
    case DistTag::ContinuousUniform:
    case DistTag::Exponential:
    case DistTag::Gaussian:
      return false;
    default:
      return true;
  }
}

Scalar mass_or_density(const Distribution& d, const Rational& x) {
  switch (d.tag) {
    case DistTag::Bernoulli: {
      const long long k = integer_point(d, x);
      if (k == 0) return Scalar::from_exact(1 - d.p);
      if (k == 1) return Scalar::from_exact(d.p);
      return Scalar::from_exact(Rational(0));
    }
    case DistTag::Binomial: {
      const long long k = integer_point(d, x);
      if (k < 0 || k > static_cast<long long>(d.n))
        return Scalar::from_exact(Rational(0));
      const Rational mass = Rational(binomial(d.n, k)) *
                            pow_rational(d.p, k) *
                            pow_rational(1 - d.p, static_cast<long long>(d.n) - k);
      return Scalar::from_exact(mass);
    }
    case DistTag::Geometric: {
      const long long k = integer_point(d, x);
      if (k < 0) return Scalar::from_exact(Rational(0));
      return Scalar::from_exact((1 - d.p) * pow_rational(d.p, k));
    }
    case DistTag::GeometricShifted: {
      const long long k = integer_point(d, x);
      if (k < 1) return Scalar::from_exact(Rational(0));
      return Scalar::from_exact((1 - d.p) * pow_rational(d.p, k - 1));
    }
    case DistTag::Poisson: {
      const long long k = integer_point(d, x);
      if (k < 0) return Scalar::from_exact(Rational(0));
      return Scalar::from_real(
          poisson_pmf(to_double(d.lambda), static_cast<unsigned long>(k)));
    }
    case DistTag::DiscreteUniform: {
      const auto hits = std::count(d.support.begin(), d.support.end(), x);
      return Scalar::from_exact(
          Rational(Integer(hits), Integer(d.support.size())));
    }
    case DistTag::Zeta: {
      const long long k = integer_point(d, x);
      if (k < 1) return Scalar::from_exact(Rational(0));
      return Scalar::from_real(std::pow(static_cast<double>(k), -d.s) /
                               riemann_zeta(d.s));
    }
    case DistTag::ContinuousUniform: {
      if (x < d.a || x > d.b) return Scalar::from_exact(Rational(0));
      return Scalar::from_exact(1 / (d.b - d.a));
    }
    case DistTag::Exponential: {
      if (x < 0) return Scalar::from_exact(Rational(0));
      const double rate = to_double(d.lambda);
      return Scalar::from_real(rate * std::exp(-rate * to_double(x)));
    }
    case DistTag::Gaussian: {
      const double sigma2 = to_double(d.sigma2);
      const double diff = to_double(x) - to_double(d.m);
      return Scalar::from_real(std::exp(-diff * diff / (2.0 * sigma2)) /
                               std::sqrt(2.0 * M_PI * sigma2));
    }
  }
  raise("InternalError", "mass_or_density: unhandled tag");
}

Scalar mean(const Distribution& d) {
  switch (d.tag) {
    case DistTag::Bernoulli: return Scalar::from_exact(d.p);
    case DistTag::Binomial: return Scalar::from_exact(Rational(d.n) * d.p);
    case DistTag::Geometric: return Scalar::from_exact(d.p / (1 - d.p));
    case DistTag::GeometricShifted:
      return Scalar::from_exact(1 / (1 - d.p));
    case DistTag::Poisson: return Scalar::from_exact(d.lambda);
    case DistTag::DiscreteUniform: {
      Rational total(0);
      for (const auto& atom : d.support) total += atom;
      return Scalar::from_exact(total / Integer(d.support.size()));
    }
    case DistTag::Zeta:
      if (d.s <= 2.0)
        raise("MomentUndefined",
              "zeta mean needs s > 2, got s = " + std::to_string(d.s));
      return Scalar::from_real(riemann_zeta(d.s - 1.0) / riemann_zeta(d.s));
    case DistTag::ContinuousUniform:
      return Scalar::from_exact((d.a + d.b) / 2);
    case DistTag::Exponential: return Scalar::from_exact(1 / d.lambda);
    case DistTag::Gaussian: return Scalar::from_exact(d.m);
  }
  raise("InternalError", "mean: unhandled tag");
}

Scalar variance(const Distribution& d) {
  switch (d.tag) {
    case DistTag::Bernoulli: return Scalar::from_exact(d.p * (1 - d.p));
    case DistTag::Binomial:
      return Scalar::from_exact(Rational(d.n) * d.p * (1 - d.p));
    case DistTag::Geometric:
      return Scalar::from_exact(d.p / ((1 - d.p) * (1 - d.p)));
    case DistTag::GeometricShifted:
      return Scalar::from_exact(d.p / ((1 - d.p) * (1 - d.p)));
    case DistTag::Poisson: return Scalar::from_exact(d.lambda);
    case DistTag::DiscreteUniform: {
      Rational total(0), squares(0);
      for (const auto& atom : d.support) {
        total += atom;
        squares += atom * atom;
      }
      const Rational mu = total / Integer(d.support.size());
      return Scalar::from_exact(squares / Integer(d.support.size()) - mu * mu);
    }
    case DistTag::Zeta: {
      if (d.s <= 3.0)
        raise("MomentUndefined",
              "zeta variance needs s > 3, got s = " + std::to_string(d.s));
      const double z = riemann_zeta(d.s);
      const double mu = riemann_zeta(d.s - 1.0) / z;
      return Scalar::from_real(riemann_zeta(d.s - 2.0) / z - mu * mu);
    }
    case DistTag::ContinuousUniform: {
      const Rational width = d.b - d.a;
      return Scalar::from_exact(width * width / 12);
    }
    case DistTag::Exponential:
      return Scalar::from_exact(1 / (d.lambda * d.lambda));
    case DistTag::Gaussian: return Scalar::from_exact(d.sigma2);
  }
  raise("InternalError", "variance: unhandled tag");
}

double cdf(const Distribution& d, double t) {
  switch (d.tag) {
    case DistTag::Bernoulli:
      if (t < 0.0) return 0.0;
      if (t < 1.0) return to_double(1 - d.p);
      return 1.0;
    case DistTag::Binomial: {
      if (t < 0.0) return 0.0;
      const double p = to_double(d.p);
      const auto cap = static_cast<unsigned long>(
          std::min(std::floor(t), static_cast<double>(d.n)));
      double acc = 0.0;
      for (unsigned long k = 0; k <= cap; ++k) acc += binomial_pmf(d.n, p, k);
      return std::min(acc, 1.0);
    }
    case DistTag::Geometric: {
      if (t < 0.0) return 0.0;
      return 1.0 - std::pow(to_double(d.p), std::floor(t) + 1.0);
    }
    case DistTag::GeometricShifted: {
      if (t < 1.0) return 0.0;
      return 1.0 - std::pow(to_double(d.p), std::floor(t));
    }
    case DistTag::Poisson: {
      if (t < 0.0) return 0.0;
      const double lam = to_double(d.lambda);
      const double cap = std::min(std::floor(t), 4.0e6);
      double term = std::exp(-lam), acc = term;
      for (double k = 1.0; k <= cap; k += 1.0) {
        term *= lam / k;
        acc += term;
      }
      return std::min(acc, 1.0);
    }
    case DistTag::DiscreteUniform: {
      const Rational rt(t);
      std::size_t hits = 0;
      for (const auto& atom : d.support) hits += atom <= rt ? 1 : 0;
      return static_cast<double>(hits) / static_cast<double>(d.support.size());
    }
    case DistTag::Zeta: {
      if (t < 1.0) return 0.0;
      const double z = riemann_zeta(d.s);
      const double cap = std::floor(t);
      if (cap > 2.0e6)  // sum the complement instead of a huge prefix
        return 1.0 - zeta_tail(d.s, cap + 1.0) / z;
      double acc = 0.0;
      for (double k = 1.0; k <= cap; k += 1.0) acc += std::pow(k, -d.s);
      return acc / z;
    }
    case DistTag::ContinuousUniform: {
      const double a = to_double(d.a), b = to_double(d.b);
      if (t <= a) return 0.0;
      if (t >= b) return 1.0;
      return (t - a) / (b - a);
    }
    case DistTag::Exponential:
      if (t <= 0.0) return 0.0;
      return -std::expm1(-to_double(d.lambda) * t);
    case DistTag::Gaussian:
      return normal_cdf((t - to_double(d.m)) / std::sqrt(to_double(d.sigma2)));
  }
  raise("InternalError", "cdf: unhandled tag");
}

Scalar jump(const Distribution& d, const Rational& a) {
  if (!is_discrete(d)) return Scalar::from_exact(Rational(0));
  return mass_or_density(d, a);
}

std::complex<double> char_fn(const Distribution& d, double xi) {
  const std::complex<double> eix = std::polar(1.0, xi);
  switch (d.tag) {
    case DistTag::Bernoulli: {
      const double p = to_double(d.p);
      return (1.0 - p) + p * eix;
    }
    case DistTag::Binomial: {
      const double p = to_double(d.p);
      return cpow_int((1.0 - p) + p * eix, d.n);
    }
    case DistTag::Geometric: {
      const double p = to_double(d.p);
      return (1.0 - p) / (1.0 - p * eix);
    }
    case DistTag::GeometricShifted: {
      const double r = to_double(d.p);
      return (1.0 - r) * eix / (1.0 - r * eix);
    }
    case DistTag::Poisson:
      return std::exp(-to_double(d.lambda) * (1.0 - eix));
    case DistTag::DiscreteUniform: {
      std::complex<double> acc(0.0, 0.0);
      for (const auto& atom : d.support) acc += std::polar(1.0, xi * to_double(atom));
      return acc / static_cast<double>(d.support.size());
    }
    case DistTag::Zeta:
      raise("Unsupported", "zeta law has no closed-form characteristic function");
    case DistTag::ContinuousUniform: {
      if (xi == 0.0) return {1.0, 0.0};
      const double a = to_double(d.a), b = to_double(d.b);
      const std::complex<double> num =
          std::polar(1.0, xi * b) - std::polar(1.0, xi * a);
      return num / (std::complex<double>(0.0, 1.0) * xi * (b - a));
    }
    case DistTag::Exponential: {
      const double rate = to_double(d.lambda);
      return rate / std::complex<double>(rate, -xi);
    }
    case DistTag::Gaussian: {
      const double magnitude = std::exp(-to_double(d.sigma2) * xi * xi / 2.0);
      return std::polar(magnitude, to_double(d.m) * xi);
    }
  }
  raise("InternalError", "char_fn: unhandled tag");
}

Distribution convolve(const Distribution& d1, const Distribution& d2) {
  if (d1.tag == DistTag::Poisson && d2.tag == DistTag::Poisson)
    return poisson(d1.lambda + d2.lambda);
  if (d1.tag == DistTag::Gaussian && d2.tag == DistTag::Gaussian)
    return gaussian(d1.m + d2.m, d1.sigma2 + d2.sigma2);

  // A Bernoulli(p) is a Binomial(1, p); sums of independent binomials with a
  // common success probability stay binomial.
  const auto as_binomial = [](const Distribution& d) -> std::optional<Distribution> {
    if (d.tag == DistTag::Binomial) return d;
    if (d.tag == DistTag::Bernoulli) return binomial(1, d.p);
    return std::nullopt;
  };
  const auto b1 = as_binomial(d1), b2 = as_binomial(d2);
  if (b1 && b2) {
    if (b1->p != b2->p)
      raise("NoClosedForm",
            "binomial convolution needs equal success probabilities, got " +
                format_rational(b1->p) + " and " + format_rational(b2->p));
    return binomial(b1->n + b2->n, b1->p);
  }
  raise("NoClosedForm", "no closed-form convolution for " + tag_name(d1.tag) +
                            " + " + tag_name(d2.tag));
}

double poisson_approx_error(unsigned long n, double lambda) {
  if (n < 1) raise("BadParameter", "poisson_approx_error: need n >= 1");
  if (!(lambda > 0.0))
    raise("BadParameter", "poisson_approx_error: lambda must be positive");
  if (lambda > static_cast<double>(n))
    raise("BadRate", "poisson_approx_error: lambda/n = " +
                         std::to_string(lambda / static_cast<double>(n)) +
                         " exceeds 1");
  const double p = lambda / static_cast<double>(n);
  double sup = 0.0;
  for (unsigned long k = 0; k <= n; ++k)
    sup = std::max(sup, std::fabs(binomial_pmf(n, p, k) - poisson_pmf(lambda, k)));
  return sup;
}

TailBounds tail_bounds(const Distribution& d, double a) {
  if (!(a > 0.0)) raise("BadArgument", "tail_bounds: need a > 0");
  const double mu = mean(d).value;
  const double var = variance(d).value;

  TailBounds out;
  if (is_nonnegative_law(d)) out.markov = mu / a;
  out.chebyshev = var / (a * a);
  out.exact_upper = std::clamp(1.0 - cdf(d, a), 0.0, 1.0);
  const double above = 1.0 - cdf(d, mu + a);
  const double below = cdf(d, mu - a) - point_mass(d, mu - a);
  out.exact_centered = std::clamp(above + below, 0.0, 1.0);

  if (out.markov && out.exact_upper > *out.markov + 1e-9)
    raise("InternalError", "tail_bounds: Markov bound violated");
  if (out.exact_centered > out.chebyshev + 1e-9)
    raise("InternalError", "tail_bounds: Chebyshev bound violated");
  return out;
}

GaussianVector gaussian_vector(std::vector<double> mean,
                               std::vector<std::vector<double>> covariance) {
  const std::size_t n = mean.size();
  if (covariance.size() != n)
    raise("DimensionMismatch", "gaussian_vector: mean has dimension " +
                                   std::to_string(n) + ", covariance has " +
                                   std::to_string(covariance.size()) + " rows");
  double scale = 0.0;
  for (const auto& row : covariance) {
    if (row.size() != n)
      raise("DimensionMismatch", "gaussian_vector: covariance is not square");
    for (double v : row) scale = std::max(scale, std::fabs(v));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::fabs(covariance[i][j] - covariance[j][i]) > 1e-12 * (1.0 + scale))
        raise("BadParameter", "gaussian_vector: covariance is not symmetric");
  for (double eig : jacobi_eigenvalues(covariance))
    if (eig < -1e-10)
      raise("BadParameter",
            "gaussian_vector: covariance has eigenvalue " + std::to_string(eig));
  return {std::move(mean), std::move(covariance)};
}

std::complex<double> gaussian_vector_cf(const GaussianVector& v,
                                        const std::vector<double>& u) {
  const std::size_t n = v.mean.size();
  if (u.size() != n)
    raise("DimensionMismatch", "gaussian_vector_cf: u has dimension " +
                                   std::to_string(u.size()) + ", expected " +
                                   std::to_string(n));
  double dot = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += u[i] * v.mean[i];
    for (std::size_t j = 0; j < n; ++j) quad += u[i] * v.covariance[i][j] * u[j];
  }
  return std::exp(std::complex<double>(-quad / 2.0, dot));
}

double riemann_zeta(double s) {
  if (!(s > 1.0)) raise("BadParameter", "riemann_zeta: need s > 1");
  constexpr double kCutoff = 200.0;
  double acc = 0.0;
  for (double n = 1.0; n < kCutoff; n += 1.0) acc += std::pow(n, -s);
  return acc + zeta_tail(s, kCutoff);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace stochlab
