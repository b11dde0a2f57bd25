/**
 * @file combinatorics.hpp
 * @brief Exact counting layer: binomials, multinomials, sampling counts,
 *        occupancy numbers, Stirling bounds, inclusion-exclusion, matching.
 *
 * All counts are arbitrary-precision integers and all probabilities exact
 * rationals.  binomial() is total: indices outside [0, n] count zero rather
 * than erroring, which keeps downstream walk formulas free of parity guards.
 */

#pragma once

#include <map>
#include <vector>

#include "stochlab/rational.hpp"

namespace stochlab {

/// Arbitrary-precision nonnegative count.
using CountResult = Integer;

/// C(n, k); 0 when k < 0 or k > n.  Satisfies C(n,k) = C(n,n-k).
CountResult binomial(unsigned long n, long long k);

/// n! / (r_1! ... r_k!).  Throws PartsMismatch unless sum(parts) == n.
CountResult multinomial(unsigned long n, const std::vector<unsigned long>& parts);

struct SamplingCounts {
  CountResult with_replacement;     ///< n^r ordered samples
  CountResult without_replacement;  ///< n(n-1)...(n-r+1); 0 when r > n
};

SamplingCounts sampling_counts(unsigned long n, unsigned long r);

/// Distinguishable placements of r indistinct balls into n >= 1 cells:
/// C(n+r-1, r), the number of nonnegative integer solutions of
/// r_1 + ... + r_n = r.
CountResult occupancy_count(unsigned long r, unsigned long n);

/// Two-sided bracket for n! from the factorial theorem with correction
/// exponent theta(n) in [1 - 1/(12n+1), 1]:
///   sqrt(2 pi) n^{n+1/2} exp(-n + theta/(12n)).
/// Endpoints are evaluated with ~50 significant digits and widened outward
/// by a relative 1e-40 before conversion, so `lower <= n! <= upper` is an
/// exact rational comparison that genuinely holds.
struct StirlingBounds {
  Rational lower;
  Rational upper;
};

StirlingBounds stirling_bounds(unsigned long n);

/// Inclusion-exclusion: P[union A_i] = S_1 - S_2 + ... for N events.
/// Keys are nonempty bitmask subsets of {0 .. n_events-1}; every one of the
/// 2^N - 1 subsets must be present (MissingSubset otherwise).  Inputs and
/// the result must land in [0, 1] (OutOfRange flags inconsistent data).
Rational union_probability(unsigned n_events,
                           const std::map<unsigned long, Rational>& subset_probs);

/// Probability that a uniformly random permutation of N items has at least
/// one fixed point: 1 - 1/2! + 1/3! - ... +- 1/N!.
Rational matching_probability(unsigned long n);

}  // namespace stochlab
