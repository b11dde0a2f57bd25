#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stochlab/errors.hpp"
#include "stochlab/rational.hpp"

namespace stochlab {

// Finite filtered space: the binary tree of +-1 step prefixes up to `depth`,
// with i.i.d. up-probability p on every edge.  A node is (level n, code c),
// c < 2^n, where bit b extends code c to child 2c + b and b = 1 is an up
// step.  F_n is generated by the level-n prefixes.
struct PathTree {
  unsigned depth = 0;
  Rational p;

  std::size_t level_size(unsigned level) const {
    return static_cast<std::size_t>(1) << level;
  }
};

PathTree make_tree(unsigned depth, const Rational& p);

// P[prefix] and the partial sum S_n at a node.
Rational node_probability(const PathTree& tree, unsigned level,
                          unsigned long code);
long long node_sum(unsigned level, unsigned long code);

// A process adapted to the tree filtration: one value per prefix.
// values[n][c] is X_n on the prefix coded c.
struct AdaptedProcess {
  std::vector<std::vector<Rational>> values;
};

AdaptedProcess from_node_table(const PathTree& tree,
                               std::vector<std::vector<Rational>> values);
// X_n = f(n, S_n); covers every worked functional-of-the-walk example.
AdaptedProcess from_walk_function(
    const PathTree& tree,
    const std::function<Rational(unsigned, long long)>& f);
AdaptedProcess process_s(const PathTree& tree);
AdaptedProcess process_s2_minus_n(const PathTree& tree);
AdaptedProcess process_abs_s(const PathTree& tree);

// Bounded stopping time: stopped[n][c] says T <= n on that prefix, with
// "stopped stays stopped" enforced structurally; paths never flagged stop at
// the horizon (T is capped at depth).
struct StoppingTime {
  std::vector<std::vector<char>> stopped;
};

StoppingTime stopping_from_flags(const PathTree& tree,
                                 std::vector<std::vector<char>> flags);
StoppingTime constant_stopping(const PathTree& tree, unsigned t);
// First n with hit(n, S_n) true, capped at the horizon.
StoppingTime first_hit(const PathTree& tree,
                       const std::function<bool(unsigned, long long)>& hit);
// Probability that the cap at depth N was the only reason to stop.
Rational cap_mass(const PathTree& tree, const StoppingTime& time);

enum class ProcessClass { Martingale, Submartingale, Supermartingale, None };
std::string class_name(ProcessClass c);

// Sign pattern of the one-step drifts E[X_{n+1} | F_n] - X_n over all
// internal nodes.
ProcessClass classify(const AdaptedProcess& x, const PathTree& tree);

struct DoobDecomposition {
  AdaptedProcess martingale;   // M, with M_0 = 0
  AdaptedProcess compensator;  // A, predictable and nondecreasing, A_0 = 0
};

// X = X_0 + M + A for (sub)martingale X; NotSubmartingale otherwise.
DoobDecomposition doob_decomposition(const AdaptedProcess& x,
                                     const PathTree& tree);

// Exact E[X_T].
Rational optional_stopping(const AdaptedProcess& x, const StoppingTime& time,
                           const PathTree& tree);

// Probability that the +-1 walk started at k hits m before 0 (up-step
// probability p).
Rational gambler_ruin(const Rational& p, unsigned long k, unsigned long m);

// Completed upcrossings of [a, b] by a finite sequence.
unsigned long upcrossings(const std::vector<Rational>& seq, const Rational& a,
                          const Rational& b);

// Both sides of the classical maximal inequalities, exact where possible.
// The submartingale side needs classify(X) in {martingale, submartingale};
// the martingale side needs a martingale.  All applicable inequalities are
// asserted internally.
struct InequalityReport {
  ProcessClass process_class{};

  bool submartingale_side = false;
  Rational prop_upper_lhs, prop_upper_rhs;  // l P[max X >= l] <= E[X_N 1_A]
  Rational prop_lower_lhs, prop_lower_rhs;  // l P[min X <= -l]
                                            //   <= E[X_N 1_{B^c}] - E[X_0]
  Rational maximal_lhs, maximal_rhs;        // l P[max|X| >= l]
                                            //   <= E|X_0| + 2 E|X_N|

  bool martingale_side = false;
  Rational kolmogorov_lhs, kolmogorov_rhs;  // l^2 P[max|X| >= l] <= E[X_N^2]

  bool doob_exact = false;                  // integer exponent: exact sides
  Rational doob_lhs, doob_rhs;              // E[max|X|^p] <= q^p E[|X_N|^p]
  double doob_lhs_value = 0.0;
  double doob_rhs_value = 0.0;
};

InequalityReport inequality_report(const AdaptedProcess& x, const PathTree& tree,
                                   const Rational& lambda,
                                   const Rational& p_exp);

}  // namespace stochlab
