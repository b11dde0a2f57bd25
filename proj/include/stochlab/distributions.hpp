#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "stochlab/errors.hpp"
#include "stochlab/rational.hpp"

namespace stochlab {

// A number that is exact whenever the closed form permits it.  `value` is
// always populated; `exact` is set only when the quantity is rational.
struct Scalar {
  std::optional<Rational> exact;
  double value = 0.0;

  static Scalar from_exact(const Rational& r) { return {r, to_double(r)}; }
  static Scalar from_real(double v) { return {std::nullopt, v}; }
};

enum class DistTag {
  Bernoulli,
  Binomial,
  Geometric,         // P[X=k] = (1-p) p^k on {0,1,...}
  GeometricShifted,  // P[X=n] = (1-r) r^{n-1} on {1,2,...}
  Poisson,
  DiscreteUniform,
  Zeta,
  ContinuousUniform,
  Exponential,
  Gaussian,
};

struct Distribution {
  DistTag tag{};
  Rational p;                     // Bernoulli / Binomial / Geometric weight
  unsigned long n = 0;            // Binomial trial count
  Rational lambda;                // Poisson mean, Exponential rate
  double s = 0.0;                 // Zeta exponent
  std::vector<Rational> support;  // DiscreteUniform atoms, kept sorted
  Rational a, b;                  // ContinuousUniform endpoints
  Rational m, sigma2;             // Gaussian mean and variance
};

// Factories validate parameters and raise DomainError("BadParameter").
Distribution bernoulli(const Rational& p);
Distribution binomial(unsigned long n, const Rational& p);
Distribution geometric(const Rational& p);
Distribution geometric_shifted(const Rational& r);
Distribution poisson(const Rational& lambda);
Distribution discrete_uniform(std::vector<Rational> support);
Distribution zeta_law(double s);
Distribution continuous_uniform(const Rational& a, const Rational& b);
Distribution exponential(const Rational& lambda);
Distribution gaussian(const Rational& m, const Rational& sigma2);

std::string tag_name(DistTag tag);
bool is_discrete(const Distribution& d);

// pmf value at x for discrete laws, density at x for continuous ones.
Scalar mass_or_density(const Distribution& d, const Rational& x);
Scalar mean(const Distribution& d);
Scalar variance(const Distribution& d);
double cdf(const Distribution& d, double t);
Scalar jump(const Distribution& d, const Rational& a);
std::complex<double> char_fn(const Distribution& d, double xi);
Distribution convolve(const Distribution& d1, const Distribution& d2);

// sup_{0 <= k <= n} |Binomial(n, lambda/n)(k) - Poisson(lambda)(k)|
double poisson_approx_error(unsigned long n, double lambda);

struct TailBounds {
  std::optional<double> markov;  // E[X]/a, absent when the law charges negatives
  double chebyshev = 0.0;        // Var(X)/a^2
  double exact_upper = 0.0;      // P[X > a]
  double exact_centered = 0.0;   // P[|X - E[X]| > a]
};
TailBounds tail_bounds(const Distribution& d, double a);

struct GaussianVector {
  std::vector<double> mean;
  std::vector<std::vector<double>> covariance;
};
GaussianVector gaussian_vector(std::vector<double> mean,
                               std::vector<std::vector<double>> covariance);
std::complex<double> gaussian_vector_cf(const GaussianVector& v,
                                        const std::vector<double>& u);

double riemann_zeta(double s);  // s > 1, Euler-Maclaurin tail correction
double normal_cdf(double z);

}  // namespace stochlab
