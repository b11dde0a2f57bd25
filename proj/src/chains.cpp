#include "stochlab/chains.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "stochlab/errors.hpp"
#include "stochlab/stream.hpp"

namespace stochlab {

namespace {

void require(bool ok, const char* name, const char* message) {
  if (!ok) raise(name, message);
}

// Strongly connected components by Kosaraju's two passes, iterative so deep
// chains cannot overflow the call stack.  Components come back ordered by
// their smallest member, members ascending.
std::vector<std::vector<std::size_t>> strong_components(
    const std::vector<std::vector<std::size_t>>& succ,
    const std::vector<std::vector<std::size_t>>& pred) {
  const std::size_t n = succ.size();
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> finish_order;
  finish_order.reserve(n);
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
    seen[start] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < succ[node].size()) {
        const std::size_t child = succ[node][next++];
        if (!seen[child]) {
          seen[child] = 1;
          stack.emplace_back(child, 0);
        }
      } else {
        finish_order.push_back(node);
        stack.pop_back();
      }
    }
  }

  std::vector<std::vector<std::size_t>> components;
  std::vector<char> assigned(n, 0);
  for (auto it = finish_order.rbegin(); it != finish_order.rend(); ++it) {
    if (assigned[*it]) continue;
    std::vector<std::size_t> members;
    std::vector<std::size_t> stack{*it};
    assigned[*it] = 1;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      members.push_back(node);
      for (std::size_t parent : pred[node]) {
        if (!assigned[parent]) {
          assigned[parent] = 1;
          stack.push_back(parent);
        }
      }
    }
    std::sort(members.begin(), members.end());
    components.push_back(std::move(members));
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

std::pair<std::vector<std::vector<std::size_t>>,
          std::vector<std::vector<std::size_t>>>
transition_graph(const StochasticMatrix& q) {
  const std::size_t n = q.size();
  std::vector<std::vector<std::size_t>> succ(n), pred(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (q.rows[x][y] > 0) {
        succ[x].push_back(y);
        pred[y].push_back(x);
      }
    }
  }
  return {std::move(succ), std::move(pred)};
}

// Unique invariant probability measure of a closed class, returned as a
// full-length vector that vanishes off the class.  Stationarity gives
// |C| equations of rank |C| - 1; appending the normalization row makes the
// stacked system uniquely solvable.
std::vector<Rational> class_invariant(const StochasticMatrix& q,
                                      const std::vector<std::size_t>& members) {
  const std::size_t m = members.size();
  linalg::Matrix a(m + 1, linalg::Vector(m, Rational(0)));
  linalg::Vector b(m + 1, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      a[i][j] = q.rows[members[j]][members[i]];
      if (i == j) a[i][j] -= 1;
    }
  }
  for (std::size_t j = 0; j < m; ++j) a[m][j] = 1;
  b[m] = 1;
  const linalg::Solution sol = linalg::solve_general(a, b);
  if (!sol.consistent || !sol.unique)
    raise("InternalError", "closed class has no unique invariant measure");
  std::vector<Rational> full(q.size(), Rational(0));
  for (std::size_t j = 0; j < m; ++j) full[members[j]] = sol.x[j];
  return full;
}

}  // namespace

StochasticMatrix make_chain(std::vector<std::string> states,
                            linalg::Matrix rows) {
  const std::size_t n = states.size();
  require(n > 0, "BadMatrix", "state space must be nonempty");
  require(rows.size() == n, "BadMatrix",
          "need exactly one row per state");
  require(std::set<std::string>(states.begin(), states.end()).size() == n,
          "BadMatrix", "state names must be distinct");
  for (const auto& row : rows) {
    require(row.size() == n, "BadMatrix", "rows must be square");
    Rational sum(0);
    for (const auto& entry : row) {
      require(entry >= 0 && entry <= 1, "BadMatrix",
              "entries must lie in [0, 1]");
      sum += entry;
    }
    require(sum == 1, "BadMatrix", "each row must sum to one exactly");
  }
  return StochasticMatrix{std::move(states), std::move(rows)};
}

linalg::Matrix power(const StochasticMatrix& q, unsigned long n) {
  linalg::Matrix result = linalg::identity(q.size());
  linalg::Matrix base = q.rows;
  while (n > 0) {
    if (n & 1UL) result = linalg::mat_mul(result, base);
    n >>= 1UL;
    if (n > 0) base = linalg::mat_mul(base, base);
  }
  return result;
}

ChainReport classify(const StochasticMatrix& q) {
  const auto [succ, pred] = transition_graph(q);
  const auto components = strong_components(succ, pred);

  std::vector<std::size_t> component_of(q.size(), 0);
  for (std::size_t c = 0; c < components.size(); ++c)
    for (std::size_t member : components[c]) component_of[member] = c;

  ChainReport report;
  for (std::size_t c = 0; c < components.size(); ++c) {
    StateClass cls;
    cls.members = components[c];
    cls.closed = true;
    for (std::size_t x : cls.members)
      for (std::size_t y : succ[x])
        if (component_of[y] != c) cls.closed = false;
    auto& bucket = cls.closed ? report.recurrent : report.transient;
    bucket.insert(bucket.end(), cls.members.begin(), cls.members.end());
    report.classes.push_back(std::move(cls));
  }
  std::sort(report.recurrent.begin(), report.recurrent.end());
  std::sort(report.transient.begin(), report.transient.end());
  report.irreducible = report.classes.size() == 1;
  return report;
}

InvariantResult invariant_measure(const StochasticMatrix& q) {
  const ChainReport report = classify(q);
  InvariantResult result;
  for (const StateClass& cls : report.classes) {
    if (!cls.closed) continue;
    result.per_class.push_back(class_invariant(q, cls.members));
  }
  if (result.per_class.empty())
    raise("InternalError", "a finite chain must have a closed class");
  result.non_unique = result.per_class.size() > 1;
  result.measure = result.per_class.front();
  return result;
}

ReversibilityReport is_reversible(const StochasticMatrix& q,
                                  const std::vector<Rational>& mu) {
  const std::size_t n = q.size();
  require(mu.size() == n, "BadMeasure",
          "measure must assign a weight to every state");
  bool positive = false;
  for (const Rational& w : mu) {
    require(w >= 0, "BadMeasure", "measure weights must be nonnegative");
    if (w > 0) positive = true;
  }
  require(positive, "BadMeasure", "measure must not be identically zero");

  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (mu[x] * q.rows[x][y] != mu[y] * q.rows[y][x])
        return ReversibilityReport{false, x, y};
  return ReversibilityReport{true, 0, 0};
}

HittingResult hitting_probability(const StochasticMatrix& q,
                                  const std::vector<std::size_t>& target,
                                  const std::vector<std::size_t>& forbidden) {
  const std::size_t n = q.size();
  require(!target.empty(), "BadArgument", "target set must be nonempty");
  // 0 = unconstrained, 1 = forbidden, 2 = target
  std::vector<char> role(n, 0);
  for (std::size_t y : target) {
    require(y < n, "IndexOutOfRange", "target state out of range");
    role[y] = 2;
  }
  for (std::size_t y : forbidden) {
    require(y < n, "IndexOutOfRange", "forbidden state out of range");
    require(role[y] != 2, "BadArgument",
            "target and forbidden sets must be disjoint");
    role[y] = 1;
  }

  // Backward reachability: which states admit a path into target+forbidden.
  // On the rest the first-step system is singular, but those states hit the
  // target with probability zero, so they are fixed at zero and reported.
  const auto [succ, pred] = transition_graph(q);
  std::vector<char> reaches(n, 0);
  std::vector<std::size_t> queue;
  for (std::size_t y = 0; y < n; ++y)
    if (role[y] != 0) {
      reaches[y] = 1;
      queue.push_back(y);
    }
  while (!queue.empty()) {
    const std::size_t y = queue.back();
    queue.pop_back();
    for (std::size_t x : pred[y])
      if (!reaches[x]) {
        reaches[x] = 1;
        queue.push_back(x);
      }
  }

  std::vector<std::size_t> unknown;
  HittingResult result;
  result.probability.assign(n, Rational(0));
  for (std::size_t x = 0; x < n; ++x) {
    if (role[x] == 2)
      result.probability[x] = 1;
    else if (role[x] == 0 && reaches[x])
      unknown.push_back(x);
    else if (role[x] == 0)
      result.unreachable.push_back(x);
  }

  if (!unknown.empty()) {
    const std::size_t m = unknown.size();
    std::vector<std::size_t> slot(n, n);
    for (std::size_t i = 0; i < m; ++i) slot[unknown[i]] = i;
    linalg::Matrix a(m, linalg::Vector(m, Rational(0)));
    linalg::Vector b(m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
      a[i][i] = 1;
      for (std::size_t y = 0; y < n; ++y) {
        const Rational& step = q.rows[unknown[i]][y];
        if (step == 0) continue;
        if (role[y] == 2)
          b[i] += step;
        else if (slot[y] < n)
          a[i][slot[y]] -= step;
      }
    }
    const linalg::Vector h = linalg::solve_unique(a, b);
    for (std::size_t i = 0; i < m; ++i) result.probability[unknown[i]] = h[i];
  }
  return result;
}

std::vector<Rational> expected_return_time(const StochasticMatrix& q) {
  require(classify(q).irreducible, "NotIrreducible",
          "expected return times need an irreducible chain");
  const std::vector<Rational> mu = invariant_measure(q).measure;
  std::vector<Rational> times;
  times.reserve(q.size());
  for (const Rational& w : mu) times.push_back(Rational(1) / w);
  return times;
}

Rational expected_return_time_by_first_step(const StochasticMatrix& q,
                                            std::size_t x) {
  const std::size_t n = q.size();
  require(x < n, "UnknownState", "state index out of range");
  require(classify(q).irreducible, "NotIrreducible",
          "expected return times need an irreducible chain");
  if (n == 1) return Rational(1);

  // k(y) = E_y[steps until x] for y != x, then condition on the first step.
  std::vector<std::size_t> others;
  for (std::size_t y = 0; y < n; ++y)
    if (y != x) others.push_back(y);
  const std::size_t m = others.size();
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < m; ++i) slot[others[i]] = i;

  linalg::Matrix a(m, linalg::Vector(m, Rational(0)));
  linalg::Vector b(m, Rational(1));
  for (std::size_t i = 0; i < m; ++i) {
    a[i][i] = 1;
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) continue;
      a[i][slot[y]] -= q.rows[others[i]][y];
    }
    if (a[i][i] == 0)
      raise("InternalError", "hitting-time system lost its diagonal");
  }
  const linalg::Vector k = linalg::solve_unique(a, b);

  Rational expected(1);
  for (std::size_t i = 0; i < m; ++i)
    expected += q.rows[x][others[i]] * k[i];
  return expected;
}

PotentialResult potential_matrix(const StochasticMatrix& q) {
  PotentialResult result;
  result.transient = classify(q).transient;
  const std::size_t m = result.transient.size();
  if (m == 0) return result;
  linalg::Matrix system(m, linalg::Vector(m, Rational(0)));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      system[i][j] = -q.rows[result.transient[i]][result.transient[j]];
      if (i == j) system[i][j] += 1;
    }
  result.u = linalg::invert(system);
  return result;
}

ZdReport zd_recurrence(unsigned dimension) {
  require(dimension >= 1, "BadParameter", "dimension must be at least one");
  constexpr unsigned long kLast = 1000000UL;
  const std::vector<unsigned long> checkpoints{100,    1000,  10000,
                                               100000, kLast};

  ZdReport report;
  report.dimension = dimension;
  report.recurrent = dimension <= 2;

  // u_k = P[one-dimensional walk back at zero after 2k steps], updated by
  // u_k = u_{k-1} (2k - 1) / (2k); the d-dimensional return term is u_k^d.
  double u = 1.0;
  double sum = 1.0;  // k = 0 term
  std::size_t next = 0;
  for (unsigned long k = 1; k <= kLast; ++k) {
    u *= static_cast<double>(2 * k - 1) / static_cast<double>(2 * k);
    sum += std::pow(u, static_cast<double>(dimension));
    if (next < checkpoints.size() && k == checkpoints[next]) {
      report.partial_sums.emplace_back(k, sum);
      ++next;
    }
  }

  const double half_d = dimension / 2.0;
  if (report.recurrent) {
    report.note =
        dimension == 2
            ? "terms decay like 1/(pi k); the partial sums grow like "
              "log(K)/pi, which diverges, so the two-dimensional walk is "
              "recurrent despite the slow growth"
            : "terms decay like (pi k)^(-1/2); the partial sums grow like "
              "2 sqrt(K/pi), so the series diverges and the walk is "
              "recurrent";
  } else {
    report.tail_bound = std::pow(M_PI, -half_d) *
                        std::pow(static_cast<double>(kLast), 1.0 - half_d) /
                        (half_d - 1.0);
    report.note =
        "terms decay like (pi k)^(-d/2) with d/2 > 1, so the series "
        "converges; the integral bound on the tail past the last checkpoint "
        "is tail_bound";
  }
  return report;
}

std::vector<std::size_t> simulate(const StochasticMatrix& q, std::size_t x0,
                                  unsigned long steps, std::uint64_t seed) {
  require(x0 < q.size(), "UnknownState", "initial state out of range");
  SeededStream stream(seed);
  std::vector<std::size_t> path;
  path.reserve(steps + 1);
  path.push_back(x0);
  std::size_t here = x0;
  for (unsigned long step = 0; step < steps; ++step) {
    // next_unit() is a dyadic rational in (0, 1], so the comparison against
    // the exact cumulative row probabilities never suffers rounding.
    const Rational u(stream.next_unit());
    Rational cumulative(0);
    std::size_t next = q.size() - 1;
    for (std::size_t y = 0; y < q.size(); ++y) {
      cumulative += q.rows[here][y];
      if (u <= cumulative) {
        next = y;
        break;
      }
    }
    here = next;
    path.push_back(here);
  }
  return path;
}

StochasticMatrix ehrenfest(unsigned long k) {
  require(k >= 1, "BadParameter", "need at least one ball");
  const std::size_t n = k + 1;
  std::vector<std::string> states;
  states.reserve(n);
  for (std::size_t j = 0; j < n; ++j) states.push_back(std::to_string(j));
  linalg::Matrix rows(n, linalg::Vector(n, Rational(0)));
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0) rows[j][j - 1] = Rational(j, k);
    if (j < k) rows[j][j + 1] = Rational(k - j, k);
  }
  return make_chain(std::move(states), std::move(rows));
}

StochasticMatrix graph_walk(
    const std::vector<std::vector<std::size_t>>& adjacency) {
  const std::size_t n = adjacency.size();
  require(n > 0, "BadGraph", "graph must have at least one vertex");
  std::vector<std::set<std::size_t>> neighbours(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (adjacency[x].empty())
      raise("IsolatedVertex",
            "vertex " + std::to_string(x) + " has no neighbours");
    for (std::size_t y : adjacency[x]) {
      require(y < n, "IndexOutOfRange", "neighbour index out of range");
      require(neighbours[x].insert(y).second, "BadGraph",
              "duplicate entry in an adjacency list");
    }
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y : neighbours[x])
      require(neighbours[y].count(x) == 1, "BadGraph",
              "adjacency lists must be symmetric");

  std::vector<std::string> states;
  states.reserve(n);
  for (std::size_t x = 0; x < n; ++x) states.push_back(std::to_string(x));
  linalg::Matrix rows(n, linalg::Vector(n, Rational(0)));
  for (std::size_t x = 0; x < n; ++x) {
    const Rational step(1, neighbours[x].size());
    for (std::size_t y : neighbours[x]) rows[x][y] = step;
  }
  return make_chain(std::move(states), std::move(rows));
}

StochasticMatrix birth_death(const Rational& p, unsigned long m) {
  require(p > 0 && p < 1, "BadParameter",
          "step-up probability must lie strictly between zero and one");
  require(m >= 1, "BadParameter", "need at least two states");
  const std::size_t n = m + 1;
  std::vector<std::string> states;
  states.reserve(n);
  for (std::size_t j = 0; j < n; ++j) states.push_back(std::to_string(j));
  linalg::Matrix rows(n, linalg::Vector(n, Rational(0)));
  rows[0][0] = 1;
  rows[m][m] = 1;
  for (std::size_t j = 1; j < m; ++j) {
    rows[j][j + 1] = p;
    rows[j][j - 1] = Rational(1) - p;
  }
  return make_chain(std::move(states), std::move(rows));
}

}  // namespace stochlab
