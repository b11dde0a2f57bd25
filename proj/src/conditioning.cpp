#include "stochlab/conditioning.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace stochlab {

namespace {

void check_outcome_set(const OutcomeSet& set, std::size_t n, const char* who) {
  for (std::size_t idx : set)
    if (idx >= n)
      raise("IndexOutOfRange", std::string(who) + ": outcome index " +
                                   std::to_string(idx) + " outside space of size " +
                                   std::to_string(n));
}

void check_partition(const Partition& part, std::size_t n, const char* who) {
  std::vector<char> seen(n, 0);
  for (const auto& block : part.blocks) {
    if (block.empty())
      raise("BadPartition", std::string(who) + ": empty block");
    check_outcome_set(block, n, who);
    for (std::size_t idx : block) {
      if (seen[idx])
        raise("BadPartition", std::string(who) + ": outcome " +
                                  std::to_string(idx) + " appears twice");
      seen[idx] = 1;
    }
  }
  for (std::size_t idx = 0; idx < n; ++idx)
    if (!seen[idx])
      raise("BadPartition", std::string(who) + ": outcome " +
                                std::to_string(idx) + " not covered");
}

void check_variable(const RandomVariable& y, std::size_t n, const char* who) {
  if (y.values.size() != n)
    raise("DimensionMismatch", std::string(who) + ": variable defined on " +
                                   std::to_string(y.values.size()) +
                                   " outcomes, space has " + std::to_string(n));
}

}  // namespace

FiniteProbSpace make_space(std::vector<std::string> outcomes,
                           std::vector<Rational> weights) {
  if (outcomes.size() != weights.size())
    raise("DimensionMismatch", "make_space: " + std::to_string(outcomes.size()) +
                                   " outcomes vs " + std::to_string(weights.size()) +
                                   " weights");
  if (outcomes.empty()) raise("BadSpace", "make_space: empty outcome set");
  Rational total(0);
  for (const auto& w : weights) {
    if (w < 0) raise("BadSpace", "make_space: negative weight " + format_rational(w));
    total += w;
  }
  if (total != 1)
    raise("BadSpace", "make_space: weights sum to " + format_rational(total));
  return {std::move(outcomes), std::move(weights)};
}

FiniteProbSpace uniform_space(std::size_t n) {
  std::vector<std::string> outcomes(n);
  for (std::size_t i = 0; i < n; ++i) outcomes[i] = std::to_string(i + 1);
  return make_space(std::move(outcomes),
                    std::vector<Rational>(n, Rational(1, Integer(n))));
}

Partition atoms(const FiniteProbSpace& space,
                const std::vector<OutcomeSet>& generators) {
  const std::size_t n = space.size();
  for (const auto& g : generators) check_outcome_set(g, n, "atoms");

  std::vector<std::vector<bool>> pattern(n,
                                         std::vector<bool>(generators.size(), false));
  for (std::size_t g = 0; g < generators.size(); ++g)
    for (std::size_t idx : generators[g]) pattern[idx][g] = true;

  // Group outcomes by membership pattern; blocks keep first-appearance order.
  std::map<std::vector<bool>, std::size_t> block_of;
  Partition part;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const auto [it, inserted] = block_of.try_emplace(pattern[idx], part.blocks.size());
    if (inserted) part.blocks.emplace_back();
    part.blocks[it->second].push_back(idx);
  }
  return part;
}

RandomVariable cond_expectation(const RandomVariable& y, const Partition& part,
                                const FiniteProbSpace& space) {
  const std::size_t n = space.size();
  check_variable(y, n, "cond_expectation");
  check_partition(part, n, "cond_expectation");

  RandomVariable result;
  result.values.assign(n, Rational(0));
  for (const auto& block : part.blocks) {
    Rational mass(0), weighted(0);
    for (std::size_t idx : block) {
      mass += space.weights[idx];
      weighted += y.values[idx] * space.weights[idx];
    }
    const Rational value = mass == 0 ? Rational(0) : weighted / mass;
    for (std::size_t idx : block) result.values[idx] = value;
  }
  return result;
}

ProjectionReport verify_projection(const RandomVariable& y, const Partition& part,
                                   const FiniteProbSpace& space) {
  const RandomVariable yhat = cond_expectation(y, part, space);
  ProjectionReport report;
  report.ok = true;
  for (const auto& block : part.blocks) {
    Rational residual(0);
    for (std::size_t idx : block)
      residual += (y.values[idx] - yhat.values[idx]) * space.weights[idx];
    report.block_residuals.push_back(residual);
    if (residual != 0) report.ok = false;
  }
  report.mean_residual = 0;
  for (std::size_t idx = 0; idx < space.size(); ++idx)
    report.mean_residual += (y.values[idx] - yhat.values[idx]) * space.weights[idx];
  if (report.mean_residual != 0) report.ok = false;
  return report;
}

std::vector<Rational> bayes(const std::vector<Rational>& prior,
                            const std::vector<Rational>& likelihood) {
  if (prior.size() != likelihood.size())
    raise("DimensionMismatch", "bayes: " + std::to_string(prior.size()) +
                                   " priors vs " + std::to_string(likelihood.size()) +
                                   " likelihoods");
  Rational prior_total(0);
  for (const auto& p : prior) {
    if (p < 0) raise("BadPrior", "bayes: negative prior " + format_rational(p));
    prior_total += p;
  }
  if (prior_total != 1)
    raise("BadPrior", "bayes: prior sums to " + format_rational(prior_total));
  Rational evidence(0);
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (likelihood[i] < 0 || likelihood[i] > 1)
      raise("BadLikelihood",
            "bayes: likelihood " + format_rational(likelihood[i]) +
                " outside [0,1]");
    evidence += prior[i] * likelihood[i];
  }
  if (evidence == 0)
    raise("ZeroEvidence", "bayes: total evidence probability is zero");
  std::vector<Rational> posterior(prior.size());
  for (std::size_t i = 0; i < prior.size(); ++i)
    posterior[i] = prior[i] * likelihood[i] / evidence;
  return posterior;
}

ThinningForms poisson_thinning(const Rational& lambda, const Rational& p) {
  if (lambda <= 0)
    raise("BadParameter", "poisson_thinning: lambda must be positive");
  if (p < 0 || p > 1)
    raise("BadParameter", "poisson_thinning: p must lie in [0,1]");
  ThinningForms forms;
  forms.s_given_x_slope = p;
  forms.s_given_x_intercept = 0;
  forms.x_given_s_slope = 1;
  forms.x_given_s_intercept = lambda * (1 - p);
  return forms;
}

AffinePredictor best_affine_predictor(const linalg::Vector& cov_xy,
                                      const linalg::Matrix& cov_y,
                                      const Rational& mean_x,
                                      const linalg::Vector& mean_y) {
  const std::size_t n = cov_xy.size();
  if (cov_y.size() != n || mean_y.size() != n)
    raise("DimensionMismatch", "best_affine_predictor: inconsistent dimensions");
  for (const auto& row : cov_y)
    if (row.size() != n)
      raise("DimensionMismatch", "best_affine_predictor: covariance not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (cov_y[i][j] != cov_y[j][i])
        raise("BadCovariance", "best_affine_predictor: covariance not symmetric");

  AffinePredictor predictor;
  const auto direct = linalg::solve_general(cov_y, cov_xy);
  if (direct.consistent && direct.unique) {
    predictor.slopes = direct.x;
  } else if (!direct.consistent) {
    raise("SingularCovariance",
          "best_affine_predictor: Cov(X,Y) is outside the range of K_Y");
  } else {
    // Singular but consistent.  For symmetric K the minimum-norm solution of
    // K alpha = c is alpha = K z with K^2 z = c (both systems share their
    // range), and any particular z gives the same alpha.
    const auto squared = linalg::mat_mul(cov_y, cov_y);
    const auto z = linalg::solve_general(squared, cov_xy);
    if (!z.consistent)
      raise("SingularCovariance",
            "best_affine_predictor: normal equations are inconsistent");
    predictor.slopes = linalg::mat_vec(cov_y, z.x);
    predictor.non_unique = true;
  }

  predictor.intercept = mean_x;
  for (std::size_t j = 0; j < n; ++j)
    predictor.intercept -= predictor.slopes[j] * mean_y[j];
  return predictor;
}

GaussianConditional gaussian_condition(const linalg::Matrix& covariance,
                                       std::size_t target,
                                       const std::vector<std::size_t>& given) {
  const std::size_t n = covariance.size();
  for (const auto& row : covariance)
    if (row.size() != n)
      raise("DimensionMismatch", "gaussian_condition: covariance not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (covariance[i][j] != covariance[j][i])
        raise("BadCovariance", "gaussian_condition: covariance not symmetric");
  if (target >= n)
    raise("IndexOutOfRange", "gaussian_condition: target index " +
                                 std::to_string(target) + " outside dimension " +
                                 std::to_string(n));
  std::vector<char> used(n, 0);
  used[target] = 1;
  for (std::size_t idx : given) {
    if (idx >= n)
      raise("IndexOutOfRange", "gaussian_condition: given index " +
                                   std::to_string(idx) + " outside dimension " +
                                   std::to_string(n));
    if (used[idx])
      raise("BadArgument", "gaussian_condition: index " + std::to_string(idx) +
                               " repeated or equal to the target");
    used[idx] = 1;
  }

  const std::size_t p = given.size();
  linalg::Matrix q_yy(p, linalg::Vector(p));
  linalg::Vector q_yx(p);
  for (std::size_t i = 0; i < p; ++i) {
    q_yx[i] = covariance[given[i]][target];
    for (std::size_t j = 0; j < p; ++j) q_yy[i][j] = covariance[given[i]][given[j]];
  }

  const auto solved = linalg::solve_general(q_yy, q_yx);
  if (!solved.consistent || !solved.unique)
    raise("SingularBlock",
          "gaussian_condition: covariance block on the given coordinates is "
          "singular");

  GaussianConditional out;
  out.lambda = solved.x;
  out.residual_variance = covariance[target][target];
  for (std::size_t j = 0; j < p; ++j)
    out.residual_variance -= out.lambda[j] * q_yx[j];
  return out;
}

GaussianConditional gaussian_condition(const GaussianVector& joint,
                                       std::size_t target,
                                       const std::vector<std::size_t>& given) {
  for (double m : joint.mean)
    if (m != 0.0)
      raise("NotCentered",
            "gaussian_condition: vector must be centered, found mean " +
                std::to_string(m));
  const std::size_t n = joint.covariance.size();
  linalg::Matrix exact(n);
  for (std::size_t i = 0; i < n; ++i) {
    exact[i].reserve(n);
    for (double entry : joint.covariance[i]) exact[i].emplace_back(entry);
  }
  return gaussian_condition(exact, target, given);
}

}  // namespace stochlab
