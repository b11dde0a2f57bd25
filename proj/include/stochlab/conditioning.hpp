#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stochlab/distributions.hpp"
#include "stochlab/errors.hpp"
#include "stochlab/linalg.hpp"
#include "stochlab/rational.hpp"

namespace stochlab {

// Finite probability space with exact rational weights.  Outcomes are
// addressed by index everywhere; the labels are for presentation only.
struct FiniteProbSpace {
  std::vector<std::string> outcomes;
  std::vector<Rational> weights;

  std::size_t size() const { return outcomes.size(); }
};

FiniteProbSpace make_space(std::vector<std::string> outcomes,
                           std::vector<Rational> weights);
FiniteProbSpace uniform_space(std::size_t n);

// Outcome subsets and partitions are index lists into the space.
using OutcomeSet = std::vector<std::size_t>;

struct Partition {
  std::vector<OutcomeSet> blocks;
};

// A random variable is total on the space: one rational per outcome.
struct RandomVariable {
  std::vector<Rational> values;
};

// Atoms of the sigma-algebra generated by `generators`: the coarsest
// partition on which every generator is a union of blocks.  Outcomes with
// the same membership pattern share a block.
Partition atoms(const FiniteProbSpace& space,
                const std::vector<OutcomeSet>& generators);

// Blockwise average of Y; blocks of probability zero get the value 0.
RandomVariable cond_expectation(const RandomVariable& y, const Partition& part,
                                const FiniteProbSpace& space);

struct ProjectionReport {
  std::vector<Rational> block_residuals;  // E[Y 1_A] - E[Yhat 1_A] per block
  Rational mean_residual;                 // E[Y] - E[Yhat]
  bool ok = false;                        // all residuals exactly zero
};

ProjectionReport verify_projection(const RandomVariable& y, const Partition& part,
                                   const FiniteProbSpace& space);

// Posterior over hypotheses from exact priors and likelihoods.
std::vector<Rational> bayes(const std::vector<Rational>& prior,
                            const std::vector<Rational>& likelihood);

// X ~ Poisson(lambda), S | X=k ~ Binomial(k, p).  Both conditional means are
// affine; the slopes/intercepts below are exact.
struct ThinningForms {
  Rational s_given_x_slope;      // E[S|X] = p X
  Rational s_given_x_intercept;  //          + 0
  Rational x_given_s_slope;      // E[X|S] = S
  Rational x_given_s_intercept;  //          + lambda (1 - p)
};

ThinningForms poisson_thinning(const Rational& lambda, const Rational& p);

struct AffinePredictor {
  Rational intercept;      // alpha_0 = E[X] - sum alpha_j E[Y_j]
  linalg::Vector slopes;   // alpha solving K_Y alpha = Cov(X, Y)
  bool non_unique = false; // K_Y singular but consistent: minimum-norm alpha
};

AffinePredictor best_affine_predictor(const linalg::Vector& cov_xy,
                                      const linalg::Matrix& cov_y,
                                      const Rational& mean_x,
                                      const linalg::Vector& mean_y);

struct GaussianConditional {
  linalg::Vector lambda;       // E[X | Y] = sum lambda_j Y_j (centered)
  Rational residual_variance;  // E[(X - sum lambda_j Y_j)^2]
};

// Conditioning inside a centered Gaussian vector with exact rational
// covariance: target coordinate regressed on the given coordinates.
GaussianConditional gaussian_condition(const linalg::Matrix& covariance,
                                       std::size_t target,
                                       const std::vector<std::size_t>& given);

// Same computation starting from a GaussianVector; the vector must be
// centered (NotCentered otherwise) and its floating covariance entries are
// converted to rationals exactly.
GaussianConditional gaussian_condition(const GaussianVector& joint,
                                       std::size_t target,
                                       const std::vector<std::size_t>& given);

}  // namespace stochlab
