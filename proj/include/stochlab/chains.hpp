#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stochlab/linalg.hpp"
#include "stochlab/rational.hpp"

namespace stochlab {

// Row-stochastic transition matrix over a finite named state space.
// Entries are exact rationals; every row sums to one exactly.
struct StochasticMatrix {
  std::vector<std::string> states;
  linalg::Matrix rows;

  std::size_t size() const { return states.size(); }
};

// Validates shape, entry range, and exact row sums.  Throws BadMatrix.
StochasticMatrix make_chain(std::vector<std::string> states,
                            linalg::Matrix rows);

// Exact n-step transition matrix Q^n (n = 0 gives the identity).
linalg::Matrix power(const StochasticMatrix& q, unsigned long n);

// One communicating class; `closed` when no mass leaks out of the class.
struct StateClass {
  std::vector<std::size_t> members;  // ascending state indices
  bool closed = false;
};

// Communication structure of the chain.  In a finite chain a state is
// recurrent exactly when its class is closed, so the recurrent/transient
// split is read off the class structure.
struct ChainReport {
  std::vector<StateClass> classes;
  std::vector<std::size_t> recurrent;
  std::vector<std::size_t> transient;
  bool irreducible = false;
};

ChainReport classify(const StochasticMatrix& q);

// Invariant probability measures.  `per_class` holds one full-length
// measure per closed class (zero off the class, unit total mass), in the
// order the classes appear in classify().  `measure` is per_class.front();
// it is the unique invariant measure exactly when non_unique is false.
struct InvariantResult {
  std::vector<Rational> measure;
  std::vector<std::vector<Rational>> per_class;
  bool non_unique = false;
};

InvariantResult invariant_measure(const StochasticMatrix& q);

// Detailed balance check for a nonnegative, not identically zero measure.
// On failure (x, y) is the lexicographically first violating pair.
struct ReversibilityReport {
  bool reversible = false;
  std::size_t x = 0;
  std::size_t y = 0;
};

ReversibilityReport is_reversible(const StochasticMatrix& q,
                                  const std::vector<Rational>& mu);

// h(x) = P_x[reach `target` before `forbidden`], solved exactly by the
// first-step linear system.  States from which neither set can be reached
// get probability zero and are listed in `unreachable`.
struct HittingResult {
  std::vector<Rational> probability;
  std::vector<std::size_t> unreachable;
};

HittingResult hitting_probability(const StochasticMatrix& q,
                                  const std::vector<std::size_t>& target,
                                  const std::vector<std::size_t>& forbidden);

// E_x[first return time to x] = 1 / mu(x) for an irreducible chain.
// Throws NotIrreducible otherwise.
std::vector<Rational> expected_return_time(const StochasticMatrix& q);

// Same quantity computed a different way: condition on the first step and
// solve the mean-hitting-time system on the complement of x.  Exists so the
// two derivations can be checked against each other.
Rational expected_return_time_by_first_step(const StochasticMatrix& q,
                                            std::size_t x);

// Expected number of visits among the transient states:
// u = (I - Q_TT)^{-1}, indexed by `transient`, so u[i][j] is the expected
// total number of visits to transient[j] starting from transient[i].
struct PotentialResult {
  std::vector<std::size_t> transient;
  linalg::Matrix u;
};

PotentialResult potential_matrix(const StochasticMatrix& q);

// Recurrence of simple random walk on the d-dimensional integer lattice via
// the return-probability series sum_k u_k^d with u_k the probability that a
// one-dimensional walk is back at zero after 2k steps.  The series diverges
// exactly when d <= 2 (terms decay like (pi k)^{-d/2}); partial sums at the
// checkpoints are reported as numeric evidence, and for transient d the
// integral bound on the tail past the last checkpoint shows convergence.
struct ZdReport {
  unsigned dimension = 0;
  bool recurrent = false;
  std::vector<std::pair<unsigned long, double>> partial_sums;
  double tail_bound = 0.0;  // only meaningful when transient
  std::string note;
};

ZdReport zd_recurrence(unsigned dimension);

// Simulates `steps` transitions from x0 by cumulative-row inversion with one
// uniform draw per step, using exact rational comparisons so the trajectory
// is a deterministic function of (seed, q, x0, steps).  The returned path
// includes the initial state, so it has steps + 1 entries.
std::vector<std::size_t> simulate(const StochasticMatrix& q, std::size_t x0,
                                  unsigned long steps, std::uint64_t seed);

// Urn exchange chain on {0, ..., k}: from j, move to j - 1 with probability
// j/k and to j + 1 with probability (k - j)/k.
StochasticMatrix ehrenfest(unsigned long k);

// Simple random walk on an undirected graph given by adjacency lists:
// from x, jump to a uniformly chosen neighbour.  Lists must be symmetric
// and duplicate-free; every vertex needs at least one neighbour
// (IsolatedVertex).
StochasticMatrix graph_walk(const std::vector<std::vector<std::size_t>>& adjacency);

// Birth-death chain on {0, ..., m} with absorbing endpoints: interior states
// step up with probability p and down with probability 1 - p.
StochasticMatrix birth_death(const Rational& p, unsigned long m);

}  // namespace stochlab
