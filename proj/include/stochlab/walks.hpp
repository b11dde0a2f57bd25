/**
 * @file walks.hpp
 * @brief Exact statistics of the simple +-1 random walk.
 *
 * Path counts, the ballot theorem, the reflection principle, returns to the
 * origin, first returns, sign-free stretches and the last-visit (arcsine)
 * law, all as exact rationals.  Queries with no valid path (parity mismatch,
 * |x| > n) count zero rather than erroring.  A brute-force path enumerator
 * doubles as the oracle for everything else at small horizons.
 */

#pragma once

#include <vector>

#include "stochlab/combinatorics.hpp"

namespace stochlab {

/// One walk trajectory: the +-1 steps and the partial sums S_0 .. S_n.
struct Path {
  std::vector<int> steps;
  std::vector<int> partials;  ///< partials[k] = S_k, partials[0] = 0
};

/// N_{n,x}: number of paths of length n from the origin to x.
/// C(n, (n+x)/2) when n+x is even and |x| <= n, else 0.
CountResult path_count(unsigned long n, long long x);

/// Ballot theorem: with p votes for the winner and q < p for the loser, the
/// probability that the winner leads strictly throughout the count is
/// (p-q)/(p+q).  Throws NotMajority when p <= q.
Rational ballot_probability(unsigned long p, unsigned long q);

struct ReflectionCount {
  CountResult touching;  ///< paths from (a, alpha) to (b, beta) meeting height 0
  CountResult total;     ///< all paths from (a, alpha) to (b, beta)
};

/// Reflection principle: paths from (a, alpha) to (b, beta), alpha,beta > 0,
/// that touch or cross the axis are in bijection with all paths from
/// (a, -alpha) to (b, beta).
ReflectionCount reflection_count(unsigned long a, unsigned long alpha,
                                 unsigned long b, unsigned long beta);

/// P[S_n = r] for the symmetric walk: N_{n,r} 2^{-n}.
Rational position_pmf(unsigned long n, long long r);

/// P[S_n = r] for up-step probability p: N_{n,r} p^{(n+r)/2} (1-p)^{(n-r)/2}.
Rational position_pmf(unsigned long n, long long r, const Rational& p);

/// U_{2 nu} = P[S_{2 nu} = 0] = C(2 nu, nu) 2^{-2 nu}; U_0 = 1.
Rational return_probability(unsigned long nu);

/// f_{2 nu} = P[first return to 0 happens at time 2 nu], nu >= 1.  Both
/// closed forms, U_{2nu}/(2nu - 1) and U_{2nu-2} - U_{2nu}, are evaluated
/// and must agree.
Rational first_return_probability(unsigned long nu);

/// P[S_1 != 0, ..., S_{2n} != 0] = U_{2n}; with strictly_positive set,
/// P[S_1 > 0, ..., S_{2n} > 0] = U_{2n}/2.
Rational no_zero_probability(unsigned long n, bool strictly_positive = false);

/// Last-visit (arcsine) law: probability that the last zero of the walk up
/// to time 2n occurs at time 2k, equal to U_{2k} U_{2n-2k}.
/// Throws IndexOutOfRange when k > n.
Rational last_visit_pmf(unsigned long k, unsigned long n);

/// All 2^n paths of length n with partial sums.  Guarded at n <= 24
/// (HorizonTooLarge beyond); intended as the enumeration oracle.
std::vector<Path> enumerate_paths(unsigned long n);

}  // namespace stochlab
