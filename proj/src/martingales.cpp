#include "stochlab/martingales.hpp"

#include <bit>
#include <cmath>
#include <utility>

namespace stochlab {

namespace {

constexpr unsigned kMaxDepth = 20;

void check_table_shape(const PathTree& tree,
                       const std::vector<std::vector<Rational>>& values,
                       const char* who) {
  if (values.size() != tree.depth + 1)
    raise("DimensionMismatch", std::string(who) + ": expected " +
                                   std::to_string(tree.depth + 1) +
                                   " levels, got " + std::to_string(values.size()));
  for (unsigned n = 0; n <= tree.depth; ++n)
    if (values[n].size() != tree.level_size(n))
      raise("DimensionMismatch", std::string(who) + ": level " + std::to_string(n) +
                                     " has " + std::to_string(values[n].size()) +
                                     " nodes, expected " +
                                     std::to_string(tree.level_size(n)));
}

void check_process(const PathTree& tree, const AdaptedProcess& x, const char* who) {
  check_table_shape(tree, x.values, who);
}

unsigned long popcount(unsigned long code) {
  return static_cast<unsigned long>(std::popcount(code));
}

}  // namespace

PathTree make_tree(unsigned depth, const Rational& p) {
  if (depth > kMaxDepth)
    raise("HorizonTooLarge", "make_tree: depth " + std::to_string(depth) +
                                 " exceeds the exact-enumeration cap of " +
                                 std::to_string(kMaxDepth));
  if (p <= 0 || p >= 1)
    raise("BadParameter", "make_tree: up-probability must lie in (0,1), got " +
                              format_rational(p));
  return {depth, p};
}

Rational node_probability(const PathTree& tree, unsigned level,
                          unsigned long code) {
  if (level > tree.depth || code >= tree.level_size(level))
    raise("IndexOutOfRange", "node_probability: no node (" +
                                 std::to_string(level) + ", " +
                                 std::to_string(code) + ")");
  const unsigned long ups = popcount(code);
  return pow_rational(tree.p, static_cast<long long>(ups)) *
         pow_rational(1 - tree.p, static_cast<long long>(level - ups));
}

long long node_sum(unsigned level, unsigned long code) {
  return 2 * static_cast<long long>(popcount(code)) -
         static_cast<long long>(level);
}

AdaptedProcess from_node_table(const PathTree& tree,
                               std::vector<std::vector<Rational>> values) {
  check_table_shape(tree, values, "from_node_table");
  return {std::move(values)};
}

AdaptedProcess from_walk_function(
    const PathTree& tree,
    const std::function<Rational(unsigned, long long)>& f) {
  AdaptedProcess x;
  x.values.resize(tree.depth + 1);
  for (unsigned n = 0; n <= tree.depth; ++n) {
    x.values[n].reserve(tree.level_size(n));
    for (unsigned long c = 0; c < tree.level_size(n); ++c)
      x.values[n].push_back(f(n, node_sum(n, c)));
  }
  return x;
}

AdaptedProcess process_s(const PathTree& tree) {
  return from_walk_function(
      tree, [](unsigned, long long s) { return Rational(s); });
}

AdaptedProcess process_s2_minus_n(const PathTree& tree) {
  return from_walk_function(tree, [](unsigned n, long long s) {
    return Rational(s * s - static_cast<long long>(n));
  });
}

AdaptedProcess process_abs_s(const PathTree& tree) {
  return from_walk_function(
      tree, [](unsigned, long long s) { return Rational(s < 0 ? -s : s); });
}

StoppingTime stopping_from_flags(const PathTree& tree,
                                 std::vector<std::vector<char>> flags) {
  if (flags.size() != tree.depth + 1)
    raise("DimensionMismatch", "stopping_from_flags: wrong level count");
  for (unsigned n = 0; n <= tree.depth; ++n)
    if (flags[n].size() != tree.level_size(n))
      raise("DimensionMismatch",
            "stopping_from_flags: wrong width at level " + std::to_string(n));
  for (unsigned n = 1; n <= tree.depth; ++n)
    for (unsigned long c = 0; c < tree.level_size(n); ++c)
      flags[n][c] = flags[n][c] || flags[n - 1][c >> 1];
  return {std::move(flags)};
}

StoppingTime constant_stopping(const PathTree& tree, unsigned t) {
  if (t > tree.depth)
    raise("BadArgument", "constant_stopping: t = " + std::to_string(t) +
                             " exceeds depth " + std::to_string(tree.depth));
  std::vector<std::vector<char>> flags(tree.depth + 1);
  for (unsigned n = 0; n <= tree.depth; ++n)
    flags[n].assign(tree.level_size(n), n >= t ? 1 : 0);
  return {std::move(flags)};
}

StoppingTime first_hit(const PathTree& tree,
                       const std::function<bool(unsigned, long long)>& hit) {
  std::vector<std::vector<char>> flags(tree.depth + 1);
  for (unsigned n = 0; n <= tree.depth; ++n) {
    flags[n].assign(tree.level_size(n), 0);
    for (unsigned long c = 0; c < tree.level_size(n); ++c) {
      const bool inherited = n > 0 && flags[n - 1][c >> 1];
      flags[n][c] = inherited || hit(n, node_sum(n, c));
    }
  }
  return {std::move(flags)};
}

Rational cap_mass(const PathTree& tree, const StoppingTime& time) {
  Rational mass(0);
  for (unsigned long c = 0; c < tree.level_size(tree.depth); ++c)
    if (!time.stopped[tree.depth][c])
      mass += node_probability(tree, tree.depth, c);
  return mass;
}

ProcessClass classify(const AdaptedProcess& x, const PathTree& tree) {
  check_process(tree, x, "classify");
  bool some_positive = false, some_negative = false;
  for (unsigned n = 0; n < tree.depth; ++n)
    for (unsigned long c = 0; c < tree.level_size(n); ++c) {
      const Rational drift = tree.p * x.values[n + 1][2 * c + 1] +
                             (1 - tree.p) * x.values[n + 1][2 * c] -
                             x.values[n][c];
      if (drift > 0) some_positive = true;
      if (drift < 0) some_negative = true;
    }
  if (!some_positive && !some_negative) return ProcessClass::Martingale;
  if (!some_negative) return ProcessClass::Submartingale;
  if (!some_positive) return ProcessClass::Supermartingale;
  return ProcessClass::None;
}

std::string class_name(ProcessClass c) {
  switch (c) {
    case ProcessClass::Martingale: return "martingale";
    case ProcessClass::Submartingale: return "submartingale";
    case ProcessClass::Supermartingale: return "supermartingale";
    case ProcessClass::None: return "none";
  }
  return "unknown";
}

DoobDecomposition doob_decomposition(const AdaptedProcess& x,
                                     const PathTree& tree) {
  const ProcessClass cls = classify(x, tree);
  if (cls != ProcessClass::Martingale && cls != ProcessClass::Submartingale)
    raise("NotSubmartingale",
          "doob_decomposition: process classifies as " + class_name(cls));

  AdaptedProcess compensator;
  compensator.values.resize(tree.depth + 1);
  compensator.values[0].assign(1, Rational(0));
  for (unsigned n = 0; n < tree.depth; ++n) {
    compensator.values[n + 1].assign(tree.level_size(n + 1), Rational(0));
    for (unsigned long c = 0; c < tree.level_size(n); ++c) {
      const Rational drift = tree.p * x.values[n + 1][2 * c + 1] +
                             (1 - tree.p) * x.values[n + 1][2 * c] -
                             x.values[n][c];
      const Rational next = compensator.values[n][c] + drift;
      compensator.values[n + 1][2 * c] = next;
      compensator.values[n + 1][2 * c + 1] = next;
    }
  }

  AdaptedProcess martingale;
  martingale.values.resize(tree.depth + 1);
  const Rational x0 = x.values[0][0];
  for (unsigned n = 0; n <= tree.depth; ++n) {
    martingale.values[n].reserve(tree.level_size(n));
    for (unsigned long c = 0; c < tree.level_size(n); ++c)
      martingale.values[n].push_back(x.values[n][c] -
                                     compensator.values[n][c] - x0);
  }
  return {std::move(martingale), std::move(compensator)};
}

Rational optional_stopping(const AdaptedProcess& x, const StoppingTime& time,
                           const PathTree& tree) {
  check_process(tree, x, "optional_stopping");
  Rational expectation(0);
  for (unsigned n = 0; n <= tree.depth; ++n)
    for (unsigned long c = 0; c < tree.level_size(n); ++c) {
      const bool first_stop =
          time.stopped[n][c] && (n == 0 || !time.stopped[n - 1][c >> 1]);
      const bool capped = n == tree.depth && !time.stopped[n][c];
      if (first_stop || capped)
        expectation += node_probability(tree, n, c) * x.values[n][c];
    }
  return expectation;
}

Rational gambler_ruin(const Rational& p, unsigned long k, unsigned long m) {
  if (k > m)
    raise("BadBounds", "gambler_ruin: need 0 <= k <= m, got k = " +
                           std::to_string(k) + ", m = " + std::to_string(m));
  if (p <= 0 || p >= 1)
    raise("BadParameter", "gambler_ruin: p must lie in (0,1), got " +
                              format_rational(p));
  if (k == m) return Rational(1);
  if (k == 0) return Rational(0);
  if (p == Rational(1, 2))
    return Rational(Integer(k), Integer(m));
  const Rational r = (1 - p) / p;
  return (pow_rational(r, static_cast<long long>(k)) - 1) /
         (pow_rational(r, static_cast<long long>(m)) - 1);
}

unsigned long upcrossings(const std::vector<Rational>& seq, const Rational& a,
                          const Rational& b) {
  if (a >= b)
    raise("BadInterval", "upcrossings: need a < b, got [" + format_rational(a) +
                             ", " + format_rational(b) + "]");
  unsigned long count = 0;
  bool below_found = false;
  for (const auto& x : seq) {
    if (!below_found) {
      if (x <= a) below_found = true;
    } else if (x >= b) {
      ++count;
      below_found = false;
    }
  }
  return count;
}

InequalityReport inequality_report(const AdaptedProcess& x, const PathTree& tree,
                                   const Rational& lambda,
                                   const Rational& p_exp) {
  check_process(tree, x, "inequality_report");
  if (lambda <= 0)
    raise("BadArgument", "inequality_report: lambda must be positive");
  if (p_exp <= 1)
    raise("BadArgument", "inequality_report: exponent must exceed 1");

  InequalityReport report;
  report.process_class = classify(x, tree);
  if (report.process_class == ProcessClass::None ||
      report.process_class == ProcessClass::Supermartingale)
    raise("NotMartingale", "inequality_report: process classifies as " +
                               class_name(report.process_class));
  report.submartingale_side = true;
  report.martingale_side = report.process_class == ProcessClass::Martingale;
  report.doob_exact = denominator(p_exp) == 1;

  const unsigned N = tree.depth;
  const double p_val = to_double(p_exp);
  Rational prob_above(0), exp_final_above(0);
  Rational prob_below(0), exp_final_not_below(0);
  Rational prob_abs(0), second_moment(0);
  Rational abs_final(0), max_pow_exact(0), final_pow_exact(0);
  double max_pow = 0.0, final_pow = 0.0;

  for (unsigned long leaf = 0; leaf < tree.level_size(N); ++leaf) {
    const Rational weight = node_probability(tree, N, leaf);
    Rational max_x = x.values[0][0], min_x = x.values[0][0];
    Rational max_abs = abs(x.values[0][0]);
    for (unsigned n = 1; n <= N; ++n) {
      const Rational& value = x.values[n][leaf >> (N - n)];
      if (value > max_x) max_x = value;
      if (value < min_x) min_x = value;
      const Rational magnitude = abs(value);
      if (magnitude > max_abs) max_abs = magnitude;
    }
    const Rational& final_value = x.values[N][leaf];

    if (max_x >= lambda) {
      prob_above += weight;
      exp_final_above += weight * final_value;
    }
    if (min_x <= -lambda)
      prob_below += weight;
    else
      exp_final_not_below += weight * final_value;
    if (max_abs >= lambda) prob_abs += weight;
    second_moment += weight * final_value * final_value;
    abs_final += weight * abs(final_value);
    if (report.doob_exact) {
      const long long e = numerator(p_exp).convert_to<long long>();
      max_pow_exact += weight * pow_rational(max_abs, e);
      final_pow_exact += weight * pow_rational(abs(final_value), e);
    } else {
      max_pow += to_double(weight) * std::pow(to_double(max_abs), p_val);
      final_pow +=
          to_double(weight) * std::pow(std::fabs(to_double(final_value)), p_val);
    }
  }

  const Rational x0 = x.values[0][0];
  report.prop_upper_lhs = lambda * prob_above;
  report.prop_upper_rhs = exp_final_above;
  report.prop_lower_lhs = lambda * prob_below;
  report.prop_lower_rhs = exp_final_not_below - x0;
  report.maximal_lhs = lambda * prob_abs;
  report.maximal_rhs = abs(x0) + 2 * abs_final;
  report.kolmogorov_lhs = lambda * lambda * prob_abs;
  report.kolmogorov_rhs = second_moment;

  const Rational q = p_exp / (p_exp - 1);
  if (report.doob_exact) {
    const long long e = numerator(p_exp).convert_to<long long>();
    report.doob_lhs = max_pow_exact;
    report.doob_rhs = pow_rational(q, e) * final_pow_exact;
    report.doob_lhs_value = to_double(report.doob_lhs);
    report.doob_rhs_value = to_double(report.doob_rhs);
  } else {
    report.doob_lhs_value = max_pow;
    report.doob_rhs_value = std::pow(to_double(q), p_val) * final_pow;
  }

  if (report.prop_upper_lhs > report.prop_upper_rhs ||
      report.prop_lower_lhs > report.prop_lower_rhs ||
      report.maximal_lhs > report.maximal_rhs)
    raise("InternalError", "inequality_report: submartingale bound violated");
  if (report.martingale_side) {
    if (report.kolmogorov_lhs > report.kolmogorov_rhs)
      raise("InternalError", "inequality_report: Kolmogorov bound violated");
    if (report.doob_exact && report.doob_lhs > report.doob_rhs)
      raise("InternalError", "inequality_report: Doob bound violated");
    if (!report.doob_exact &&
        report.doob_lhs_value > report.doob_rhs_value + 1e-12)
      raise("InternalError", "inequality_report: Doob bound violated");
  }
  return report;
}

}  // namespace stochlab
