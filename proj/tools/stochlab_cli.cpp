/**
 * @file stochlab_cli.cpp
 * @brief `stochlab`: every module behind one subcommand tree.
 *
 * Results are emitted as a single JSON document (default) or as flattened
 * `path,value` CSV, on stdout or into `--out FILE`.  Keys are sorted,
 * rationals are strings ("3/8", integers without the denominator) and
 * floats are shortest round-trip decimals, so outputs are stable enough to
 * use as golden files.
 *
 * Exit codes: 0 success, 1 domain error (machine-readable name + message as
 * JSON on stderr), 2 usage error (offending flag named on stderr).  Seeded
 * subcommands (`mc ...`, `chains simulate`) require --seed; the environment
 * variable STOCHLAB_SEED supplies a default.
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stochlab/chains.hpp"
#include "stochlab/combinatorics.hpp"
#include "stochlab/conditioning.hpp"
#include "stochlab/distributions.hpp"
#include "stochlab/errors.hpp"
#include "stochlab/martingales.hpp"
#include "stochlab/monte_carlo.hpp"
#include "stochlab/rational.hpp"
#include "stochlab/stream.hpp"
#include "stochlab/walks.hpp"

namespace {

using nlohmann::json;
using namespace stochlab;

// Invocation problems found after flag parsing (unknown law names,
// unreadable input files, ...) exit with the same code as CLI11's own
// parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string rat_str(const Rational& r) {
  const Integer num = numerator(r);
  const Integer den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

json vec_json(const std::vector<Rational>& v) {
  json arr = json::array();
  for (const Rational& r : v) arr.push_back(rat_str(r));
  return arr;
}

json mat_json(const std::vector<std::vector<Rational>>& m) {
  json arr = json::array();
  for (const auto& row : m) arr.push_back(vec_json(row));
  return arr;
}

json report_json(const ExperimentReport& r) {
  json params = json::object();
  for (const auto& [key, value] : r.parameters) params[key] = value;
  json stats = json::object();
  for (const auto& [key, value] : r.statistics) stats[key] = value;
  json out = json::object();
  out["experiment"] = r.experiment;
  out["seed"] = r.seed;
  out["parameters"] = params;
  out["statistics"] = stats;
  out["pass"] = r.pass;
  out["note"] = r.note;
  return out;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

std::string trimmed(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t");
  return text.substr(begin, end - begin + 1);
}

// Lower-case, '_' folded to '-': accepts both spellings of multi-word names.
std::string canon(std::string name) {
  for (char& c : name) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c == '_') c = '-';
  }
  return name;
}

// "p/q", plain integers, and decimal literals ("0.25" -> 25/100); the
// decimal form is read exactly in base ten, not through a double.
Rational parse_rational(const std::string& text, const std::string& where) {
  const std::string s = trimmed(text);
  if (s.empty()) throw UsageError(where + ": empty rational");
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t frac_len = s.size() - dot - 1;
    bool ok = !digits.empty();
    for (std::size_t i = 0; i < digits.size() && ok; ++i) {
      const bool sign = i == 0 && (digits[i] == '+' || digits[i] == '-');
      ok = sign || std::isdigit(static_cast<unsigned char>(digits[i]));
    }
    if (!ok || digits == "+" || digits == "-")
      throw UsageError(where + ": cannot parse '" + text + "' as a rational");
    if (digits.front() == '+') digits.erase(0, 1);
    Integer den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rational(Integer(digits), den);
  }
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw UsageError(where + ": cannot parse '" + text + "' as a rational");
  }
}

std::vector<Rational> parse_rational_list(const std::string& text,
                                          const std::string& where) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? comma : comma - start);
    out.push_back(parse_rational(item, where));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

json read_json_file(const std::string& path, const std::string& flag) {
  std::ifstream in(path);
  if (!in) throw UsageError(flag + ": cannot open '" + path + "'");
  try {
    json doc;
    in >> doc;
    return doc;
  } catch (const json::exception& e) {
    throw UsageError(flag + ": '" + path + "' is not valid JSON (" + e.what() +
                     ")");
  }
}

json require_field(const json& doc, const char* key, const std::string& flag) {
  if (!doc.is_object() || !doc.contains(key))
    throw UsageError(flag + ": input file needs a \"" + key + "\" field");
  return doc.at(key);
}

Rational rat_from_json(const json& v, const std::string& where) {
  if (v.is_string()) return parse_rational(v.get<std::string>(), where);
  if (v.is_number_integer()) return Rational(v.get<long long>());
  throw UsageError(where + ": expected a rational string like \"1/3\" or an integer");
}

std::vector<Rational> rat_vec_from_json(const json& arr,
                                        const std::string& where) {
  if (!arr.is_array()) throw UsageError(where + ": expected an array");
  std::vector<Rational> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(rat_from_json(arr[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<Rational>> rat_mat_from_json(const json& arr,
                                                     const std::string& where) {
  if (!arr.is_array()) throw UsageError(where + ": expected an array of rows");
  std::vector<std::vector<Rational>> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(rat_vec_from_json(arr[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::size_t> index_vec_from_json(const json& arr,
                                             const std::string& where) {
  if (!arr.is_array()) throw UsageError(where + ": expected an index array");
  std::vector<std::size_t> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number_unsigned())
      throw UsageError(where + "[" + std::to_string(i) +
                       "]: expected a nonnegative index");
    out.push_back(arr[i].get<std::size_t>());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distribution flags (shared by `dist` and `mc`)
// ---------------------------------------------------------------------------

struct LawFlags {
  std::string law;
  std::optional<std::string> p, lambda, atoms, a, b, mean, var;
  std::optional<unsigned long> n;
  std::optional<double> s;
};

// `dist` names the law with --law and the binomial count with --n; `mc`
// uses --dist/--trials because there --n is the sample size.
void add_law_flags(CLI::App* cmd, LawFlags& f, const std::string& sfx = "",
                   const std::string& name_flag = "--law",
                   const std::string& count_flag = "--n",
                   bool mc_names = false) {
  std::string laws =
      "bernoulli, binomial, geometric, geometric-shifted, poisson, "
      "discrete-uniform, zeta, continuous-uniform, exponential, gaussian";
  if (mc_names) laws += ", rademacher";
  cmd->add_option(name_flag + sfx, f.law, "law name: " + laws)->required();
  cmd->add_option("--p" + sfx, f.p, "success/retention weight (rational)");
  cmd->add_option(count_flag + sfx, f.n, "binomial trial count");
  cmd->add_option("--lambda" + sfx, f.lambda,
                  "poisson mean / exponential rate (rational)");
  cmd->add_option("--s" + sfx, f.s, "zeta exponent (> 1)");
  cmd->add_option("--atoms" + sfx, f.atoms,
                  "comma-separated rational atoms for discrete-uniform");
  cmd->add_option("--a" + sfx, f.a, "uniform lower endpoint (rational)");
  cmd->add_option("--b" + sfx, f.b, "uniform upper endpoint (rational)");
  cmd->add_option("--mean" + sfx, f.mean, "gaussian mean (rational)");
  cmd->add_option("--var" + sfx, f.var, "gaussian variance (rational)");
}

Distribution law_from_flags(const LawFlags& f, const std::string& name_flag,
                            const std::string& count_flag,
                            const std::string& sfx, bool allow_rademacher) {
  const std::string law = canon(f.law);
  auto need_rat = [&](const std::optional<std::string>& v,
                      const char* flag) -> Rational {
    if (!v)
      throw UsageError(std::string(flag) + sfx + ": required for law '" + law +
                       "'");
    return parse_rational(*v, std::string(flag) + sfx);
  };
  if (law == "rademacher") {
    if (!allow_rademacher)
      throw UsageError(name_flag + sfx +
                       ": 'rademacher' only names the normalized-sum input of "
                       "mc experiments; use bernoulli here");
    // The normalized sums of +-1 signs and of Bernoulli(1/2) coincide, so
    // the experiments run on the coin law.
    return bernoulli(Rational(1, 2));
  }
  if (law == "bernoulli") return bernoulli(need_rat(f.p, "--p"));
  if (law == "binomial") {
    if (!f.n)
      throw UsageError(count_flag + sfx + ": required for law 'binomial'");
    return binomial(*f.n, need_rat(f.p, "--p"));
  }
  if (law == "geometric") return geometric(need_rat(f.p, "--p"));
  if (law == "geometric-shifted") return geometric_shifted(need_rat(f.p, "--p"));
  if (law == "poisson") return poisson(need_rat(f.lambda, "--lambda"));
  if (law == "discrete-uniform") {
    if (!f.atoms)
      throw UsageError("--atoms" + sfx + ": required for law 'discrete-uniform'");
    return discrete_uniform(parse_rational_list(*f.atoms, "--atoms" + sfx));
  }
  if (law == "zeta") {
    if (!f.s) throw UsageError("--s" + sfx + ": required for law 'zeta'");
    return zeta_law(*f.s);
  }
  if (law == "continuous-uniform")
    return continuous_uniform(need_rat(f.a, "--a"), need_rat(f.b, "--b"));
  if (law == "exponential") return exponential(need_rat(f.lambda, "--lambda"));
  if (law == "gaussian")
    return gaussian(need_rat(f.mean, "--mean"), need_rat(f.var, "--var"));
  throw UsageError(name_flag + sfx + ": unknown law '" + f.law + "'");
}

json dist_json(const Distribution& d) {
  json out = json::object();
  out["law"] = tag_name(d.tag);
  switch (d.tag) {
    case DistTag::Bernoulli:
    case DistTag::Geometric:
    case DistTag::GeometricShifted:
      out["p"] = rat_str(d.p);
      break;
    case DistTag::Binomial:
      out["n"] = d.n;
      out["p"] = rat_str(d.p);
      break;
    case DistTag::Poisson:
    case DistTag::Exponential:
      out["lambda"] = rat_str(d.lambda);
      break;
    case DistTag::DiscreteUniform:
      out["atoms"] = vec_json(d.support);
      break;
    case DistTag::Zeta:
      out["s"] = d.s;
      break;
    case DistTag::ContinuousUniform:
      out["a"] = rat_str(d.a);
      out["b"] = rat_str(d.b);
      break;
    case DistTag::Gaussian:
      out["mean"] = rat_str(d.m);
      out["variance"] = rat_str(d.sigma2);
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// File-backed inputs
// ---------------------------------------------------------------------------

struct ChainFlags {
  std::optional<std::string> matrix;
  std::optional<unsigned long> ehrenfest_k;
};

void add_chain_flags(CLI::App* cmd, ChainFlags& f) {
  cmd->add_option("--matrix", f.matrix,
                  "JSON file {\"rows\": [[rational, ...], ...], \"states\": "
                  "optional names}");
  cmd->add_option("--ehrenfest", f.ehrenfest_k,
                  "use the urn exchange chain on {0, ..., K}");
}

StochasticMatrix chain_from_flags(const ChainFlags& f) {
  if (f.matrix.has_value() == f.ehrenfest_k.has_value())
    throw UsageError("pass exactly one of --matrix or --ehrenfest");
  if (f.ehrenfest_k) return ehrenfest(*f.ehrenfest_k);
  const json doc = read_json_file(*f.matrix, "--matrix");
  const auto rows = rat_mat_from_json(require_field(doc, "rows", "--matrix"),
                                      "--matrix rows");
  std::vector<std::string> states;
  if (doc.contains("states")) {
    const json& names = doc.at("states");
    if (!names.is_array())
      throw UsageError("--matrix: \"states\" must be an array of names");
    for (const json& name : names) {
      if (!name.is_string())
        throw UsageError("--matrix: \"states\" must be an array of names");
      states.push_back(name.get<std::string>());
    }
  } else {
    for (std::size_t i = 0; i < rows.size(); ++i)
      states.push_back(std::to_string(i));
  }
  return make_chain(std::move(states), rows);
}

struct LoadedProcess {
  PathTree tree;
  AdaptedProcess x;
  json doc;
};

// {"p": "1/2", "values": [[X_0], [X_1 on down, up], ...]}: one rational per
// +-1 prefix, level n holding 2^n entries in code order.  p defaults to 1/2.
LoadedProcess load_process(const std::string& path) {
  LoadedProcess lp;
  lp.doc = read_json_file(path, "--in");
  const json values = require_field(lp.doc, "values", "--in");
  if (!values.is_array() || values.empty())
    throw UsageError("--in: \"values\" must be a non-empty array of levels");
  Rational p(1, 2);
  if (lp.doc.contains("p")) p = rat_from_json(lp.doc.at("p"), "--in p");
  lp.tree = make_tree(static_cast<unsigned>(values.size() - 1), p);
  std::vector<std::vector<Rational>> table;
  table.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    table.push_back(
        rat_vec_from_json(values[i], "--in values[" + std::to_string(i) + "]"));
  lp.x = from_node_table(lp.tree, std::move(table));
  return lp;
}

std::vector<std::vector<char>> flags_from_json(const json& arr,
                                               const std::string& where) {
  if (!arr.is_array()) throw UsageError(where + ": expected an array of levels");
  std::vector<std::vector<char>> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& level = arr[i];
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!level.is_array()) throw UsageError(at + ": expected an array");
    std::vector<char> row;
    row.reserve(level.size());
    for (const json& v : level) {
      if (v.is_boolean())
        row.push_back(v.get<bool>() ? 1 : 0);
      else if (v.is_number_integer())
        row.push_back(v.get<long long>() != 0 ? 1 : 0);
      else
        throw UsageError(at + ": stop flags must be 0/1 or booleans");
    }
    out.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (const char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

// One `path,value` row per leaf of the document, paths dotted and sorted.
std::string to_csv(const json& doc) {
  const json flat = doc.flatten();
  std::string out;
  for (auto it = flat.begin(); it != flat.end(); ++it) {
    std::string key = it.key();
    if (!key.empty() && key.front() == '/') key.erase(0, 1);
    std::replace(key.begin(), key.end(), '/', '.');
    const json& value = it.value();
    const std::string text =
        value.is_string() ? value.get<std::string>() : value.dump();
    out += csv_escape(key);
    out += ',';
    out += csv_escape(text);
    out += '\n';
  }
  return out;
}

void emit(const json& doc, const std::string& format,
          const std::string& out_path) {
  const std::string payload =
      format == "csv" ? to_csv(doc) : doc.dump() + "\n";
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw UsageError("--out: cannot open '" + out_path + "' for writing");
  out << payload;
}

void add_seed(CLI::App* cmd, std::uint64_t& seed) {
  cmd->add_option("--seed", seed,
                  "RNG seed; env STOCHLAB_SEED applies when omitted")
      ->envname("STOCHLAB_SEED")
      ->required();
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

void setup_combinatorics(CLI::App& app, json& result) {
  auto* group =
      app.add_subcommand("combinatorics", "exact counting and matching")
          ->fallthrough();
  group->require_subcommand(1);

  {
    struct Opts {
      unsigned long n = 0;
      long long k = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group->add_subcommand("binomial", "binomial coefficient C(n, k)")
                    ->fallthrough();
    cmd->add_option("--n", o->n, "upper index")->required();
    cmd->add_option("--k", o->k, "lower index (out of range counts 0)")
        ->required();
    cmd->callback([&result, o] {
      json out = json::object();
      out["value"] = binomial(o->n, o->k).str();
      result = out;
    });
  }
  {
    struct Opts {
      unsigned long r = 0, n = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd =
        group
            ->add_subcommand(
                "occupancy",
                "ways to place r indistinguishable balls into n cells")
            ->fallthrough();
    cmd->add_option("--r", o->r, "number of balls")->required();
    cmd->add_option("--n", o->n, "number of cells")->required();
    cmd->callback([&result, o] {
      json out = json::object();
      out["value"] = occupancy_count(o->r, o->n).str();
      result = out;
    });
  }
  {
    auto n = std::make_shared<unsigned long>(0);
    auto* cmd =
        group
            ->add_subcommand("matching",
                             "probability a random permutation of n items "
                             "has a fixed point")
            ->fallthrough();
    cmd->add_option("--n", *n, "number of items")->required();
    cmd->callback([&result, n] {
      const Rational p = matching_probability(*n);
      json out = json::object();
      out["probability"] = rat_str(p);
      out["decimal"] = to_double(p);
      result = out;
    });
  }
}

void setup_walks(CLI::App& app, json& result) {
  auto* group =
      app.add_subcommand("walks", "exact +-1 random-walk statistics")
          ->fallthrough();
  group->require_subcommand(1);

  {
    struct Opts {
      unsigned long n = 0;
      long long x = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd =
        group->add_subcommand("paths", "paths of length n ending at x")
            ->fallthrough();
    cmd->add_option("--n", o->n, "walk length")->required();
    cmd->add_option("--x", o->x, "endpoint")->required();
    cmd->callback([&result, o] {
      json out = json::object();
      out["count"] = path_count(o->n, o->x).str();
      result = out;
    });
  }
  {
    struct Opts {
      unsigned long p = 0, q = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group
                    ->add_subcommand("ballot",
                                     "probability the winner leads throughout "
                                     "the count")
                    ->fallthrough();
    cmd->add_option("--p", o->p, "votes for the winner")->required();
    cmd->add_option("--q", o->q, "votes for the loser")->required();
    cmd->callback([&result, o] {
      json out = json::object();
      out["probability"] = rat_str(ballot_probability(o->p, o->q));
      result = out;
    });
  }
  {
    auto nu = std::make_shared<unsigned long>(0);
    auto* cmd =
        group->add_subcommand("return", "P[S_{2 nu} = 0] for the fair walk")
            ->fallthrough();
    cmd->add_option("--nu", *nu, "half the number of steps")->required();
    cmd->callback([&result, nu] {
      json out = json::object();
      out["U"] = rat_str(return_probability(*nu));
      result = out;
    });
  }
  {
    auto nu = std::make_shared<unsigned long>(0);
    auto* cmd = group
                    ->add_subcommand("first-return",
                                     "P[first return to 0 at time 2 nu]")
                    ->fallthrough();
    cmd->add_option("--nu", *nu, "half the return time (>= 1)")->required();
    cmd->callback([&result, nu] {
      json out = json::object();
      out["f"] = rat_str(first_return_probability(*nu));
      result = out;
    });
  }
  {
    struct Opts {
      unsigned long k = 0, n = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group
                    ->add_subcommand("arcsine",
                                     "P[last zero up to time 2n is at 2k]")
                    ->fallthrough();
    cmd->add_option("--k", o->k, "half the last-zero time")->required();
    cmd->add_option("--n", o->n, "half the horizon")->required();
    cmd->callback([&result, o] {
      json out = json::object();
      out["probability"] = rat_str(last_visit_pmf(o->k, o->n));
      result = out;
    });
  }
  {
    struct Opts {
      unsigned long n = 0;
      bool strict = false;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group
                    ->add_subcommand("no-zero",
                                     "P[walk avoids 0 up to time 2n]")
                    ->fallthrough();
    cmd->add_option("--n", o->n, "half the horizon")->required();
    cmd->add_flag("--strict", o->strict, "require strictly positive instead");
    cmd->callback([&result, o] {
      json out = json::object();
      out["probability"] = rat_str(no_zero_probability(o->n, o->strict));
      result = out;
    });
  }
}

void setup_dist(CLI::App& app, json& result) {
  auto* group = app.add_subcommand(
                       "dist", "distribution calculus: moments, cdf, "
                               "characteristic functions, tail bounds")
                    ->fallthrough();
  group->require_subcommand(1);

  {
    auto f = std::make_shared<LawFlags>();
    auto at = std::make_shared<std::string>();
    auto* cmd = group
                    ->add_subcommand("pmf",
                                     "mass (discrete) or density (continuous) "
                                     "at a point")
                    ->fallthrough();
    add_law_flags(cmd, *f);
    cmd->add_option("--at", *at, "evaluation point (rational)")->required();
    cmd->callback([&result, f, at] {
      const Distribution d = law_from_flags(*f, "--law", "--n", "", false);
      const Scalar v = mass_or_density(d, parse_rational(*at, "--at"));
      json out = json::object();
      out["law"] = tag_name(d.tag);
      out["value"] = v.value;
      if (v.exact) out["exact"] = rat_str(*v.exact);
      result = out;
    });
  }
  {
    auto f = std::make_shared<LawFlags>();
    auto at = std::make_shared<double>(0.0);
    auto* cmd = group->add_subcommand("cdf", "P[X <= t]")->fallthrough();
    add_law_flags(cmd, *f);
    cmd->add_option("--at", *at, "evaluation point")->required();
    cmd->callback([&result, f, at] {
      const Distribution d = law_from_flags(*f, "--law", "--n", "", false);
      json out = json::object();
      out["law"] = tag_name(d.tag);
      out["value"] = cdf(d, *at);
      result = out;
    });
  }
  {
    auto f = std::make_shared<LawFlags>();
    auto* cmd = group->add_subcommand("mean", "E[X]")->fallthrough();
    add_law_flags(cmd, *f);
    cmd->callback([&result, f] {
      const Distribution d = law_from_flags(*f, "--law", "--n", "", false);
      const Scalar v = mean(d);
      json out = json::object();
      out["law"] = tag_name(d.tag);
      out["value"] = v.value;
      if (v.exact) out["exact"] = rat_str(*v.exact);
      result = out;
    });
  }
  {
    auto f = std::make_shared<LawFlags>();
    auto* cmd = group->add_subcommand("var", "Var[X]")->fallthrough();
    add_law_flags(cmd, *f);
    cmd->callback([&result, f] {
      const Distribution d = law_from_flags(*f, "--law", "--n", "", false);
      const Scalar v = variance(d);
      json out = json::object();
      out["law"] = tag_name(d.tag);
      out["value"] = v.value;
      if (v.exact) out["exact"] = rat_str(*v.exact);
      result = out;
    });
  }
  {
    auto f = std::make_shared<LawFlags>();
    auto t = std::make_shared<double>(0.0);
    auto* cmd =
        group->add_subcommand("cf", "characteristic function E[e^{i t X}]")
            ->fallthrough();
    add_law_flags(cmd, *f);
    cmd->add_option("--t", *t, "frequency")->required();
    cmd->callback([&result, f, t] {
      const Distribution d = law_from_flags(*f, "--law", "--n", "", false);
      const std::complex<double> z = char_fn(d, *t);
      json out = json::object();
      out["law"] = tag_name(d.tag);
      out["real"] = z.real();
      out["imag"] = z.imag();
      result = out;
    });
  }
  {
    auto f1 = std::make_shared<LawFlags>();
    auto f2 = std::make_shared<LawFlags>();
    auto* cmd = group
                    ->add_subcommand("convolve",
                                     "law of X + Y for independent X, Y "
                                     "(--law2/--p2/... name the second law)")
                    ->fallthrough();
    add_law_flags(cmd, *f1);
    add_law_flags(cmd, *f2, "2");
    cmd->callback([&result, f1, f2] {
      const Distribution d1 = law_from_flags(*f1, "--law", "--n", "", false);
      const Distribution d2 = law_from_flags(*f2, "--law", "--n", "2", false);
      result = dist_json(convolve(d1, d2));
    });
  }
  {
    auto f = std::make_shared<LawFlags>();
    auto threshold = std::make_shared<double>(0.0);
    auto* cmd = group
                    ->add_subcommand("tails",
                                     "Markov/Chebyshev bounds next to the "
                                     "exact tail at a threshold")
                    ->fallthrough();
    add_law_flags(cmd, *f);
    cmd->add_option("--threshold", *threshold, "tail threshold (> 0)")
        ->required();
    cmd->callback([&result, f, threshold] {
      const Distribution d = law_from_flags(*f, "--law", "--n", "", false);
      const TailBounds t = tail_bounds(d, *threshold);
      json out = json::object();
      out["law"] = tag_name(d.tag);
      out["threshold"] = *threshold;
      if (t.markov) out["markov"] = *t.markov;
      out["chebyshev"] = t.chebyshev;
      out["exact_upper"] = t.exact_upper;
      out["exact_centered"] = t.exact_centered;
      result = out;
    });
  }
}

// Shared loader for `cond atoms` / `cond expect`: weights, optional outcome
// names, and generating events as outcome-index arrays.
std::pair<FiniteProbSpace, Partition> load_space_and_atoms(const json& doc) {
  const auto weights =
      rat_vec_from_json(require_field(doc, "weights", "--in"), "--in weights");
  std::vector<std::string> outcomes;
  if (doc.contains("outcomes")) {
    for (const json& name : doc.at("outcomes")) {
      if (!name.is_string())
        throw UsageError("--in: \"outcomes\" must be an array of names");
      outcomes.push_back(name.get<std::string>());
    }
  } else {
    for (std::size_t i = 0; i < weights.size(); ++i)
      outcomes.push_back(std::to_string(i));
  }
  FiniteProbSpace space = make_space(std::move(outcomes), weights);
  const json gens = require_field(doc, "generators", "--in");
  if (!gens.is_array())
    throw UsageError("--in: \"generators\" must be an array of index arrays");
  std::vector<OutcomeSet> generators;
  for (std::size_t i = 0; i < gens.size(); ++i)
    generators.push_back(index_vec_from_json(
        gens[i], "--in generators[" + std::to_string(i) + "]"));
  Partition part = atoms(space, generators);
  return {std::move(space), std::move(part)};
}

void setup_cond(CLI::App& app, json& result) {
  auto* group = app.add_subcommand(
                       "cond", "conditioning on finite spaces and exact "
                               "regression")
                    ->fallthrough();
  group->require_subcommand(1);

  {
    auto in = std::make_shared<std::string>();
    auto* cmd = group
                    ->add_subcommand("atoms",
                                     "atoms of the sigma-algebra generated by "
                                     "events")
                    ->fallthrough();
    cmd->add_option("--in", *in,
                    "JSON file {\"weights\": [...], \"generators\": [[indices"
                    "], ...], \"outcomes\": optional}")
        ->required();
    cmd->callback([&result, in] {
      const json doc = read_json_file(*in, "--in");
      const auto [space, part] = load_space_and_atoms(doc);
      (void)space;
      json out = json::object();
      out["blocks"] = part.blocks;
      result = out;
    });
  }
  {
    auto in = std::make_shared<std::string>();
    auto* cmd = group
                    ->add_subcommand("expect",
                                     "conditional expectation of \"y\" given "
                                     "the generated sigma-algebra")
                    ->fallthrough();
    cmd->add_option("--in", *in,
                    "JSON file adding \"y\": [rational per outcome] to the "
                    "atoms input")
        ->required();
    cmd->callback([&result, in] {
      const json doc = read_json_file(*in, "--in");
      const auto [space, part] = load_space_and_atoms(doc);
      RandomVariable y;
      y.values = rat_vec_from_json(require_field(doc, "y", "--in"), "--in y");
      const RandomVariable e = cond_expectation(y, part, space);
      json out = json::object();
      out["blocks"] = part.blocks;
      out["values"] = vec_json(e.values);
      result = out;
    });
  }
  {
    struct Opts {
      std::string prior, likelihood;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd =
        group->add_subcommand("bayes", "posterior from prior and likelihood")
            ->fallthrough();
    cmd->add_option("--prior", o->prior, "comma-separated rational weights")
        ->required();
    cmd->add_option("--likelihood", o->likelihood,
                    "comma-separated rational likelihoods")
        ->required();
    cmd->callback([&result, o] {
      const auto posterior =
          bayes(parse_rational_list(o->prior, "--prior"),
                parse_rational_list(o->likelihood, "--likelihood"));
      json out = json::object();
      out["posterior"] = vec_json(posterior);
      result = out;
    });
  }
  {
    auto in = std::make_shared<std::string>();
    auto* cmd = group
                    ->add_subcommand("regress",
                                     "best affine predictor of X from second "
                                     "moments")
                    ->fallthrough();
    cmd->add_option("--in", *in,
                    "JSON file {\"cov_xy\": [...], \"cov_y\": [[...]], "
                    "\"mean_x\": r, \"mean_y\": [...]}")
        ->required();
    cmd->callback([&result, in] {
      const json doc = read_json_file(*in, "--in");
      const AffinePredictor r = best_affine_predictor(
          rat_vec_from_json(require_field(doc, "cov_xy", "--in"), "--in cov_xy"),
          rat_mat_from_json(require_field(doc, "cov_y", "--in"), "--in cov_y"),
          rat_from_json(require_field(doc, "mean_x", "--in"), "--in mean_x"),
          rat_vec_from_json(require_field(doc, "mean_y", "--in"),
                            "--in mean_y"));
      json out = json::object();
      out["intercept"] = rat_str(r.intercept);
      out["slopes"] = vec_json(r.slopes);
      out["non_unique"] = r.non_unique;
      result = out;
    });
  }
}

void setup_mart(CLI::App& app, json& result) {
  auto* group = app.add_subcommand(
                       "mart", "martingales on the +-1 path tree: "
                               "classification, Doob, stopping, inequalities")
                    ->fallthrough();
  group->require_subcommand(1);
  const std::string in_help =
      "JSON file {\"p\": \"1/2\", \"values\": [[level-0], [level-1 x2], ...]}";

  {
    auto in = std::make_shared<std::string>();
    auto* cmd = group
                    ->add_subcommand("classify",
                                     "martingale / sub / super / none from "
                                     "one-step drifts")
                    ->fallthrough();
    cmd->add_option("--in", *in, in_help)->required();
    cmd->callback([&result, in] {
      const LoadedProcess lp = load_process(*in);
      json out = json::object();
      out["class"] = class_name(classify(lp.x, lp.tree));
      result = out;
    });
  }
  {
    auto in = std::make_shared<std::string>();
    auto* cmd = group
                    ->add_subcommand("doob",
                                     "decomposition X = X_0 + M + A with A "
                                     "predictable and nondecreasing")
                    ->fallthrough();
    cmd->add_option("--in", *in, in_help)->required();
    cmd->callback([&result, in] {
      const LoadedProcess lp = load_process(*in);
      const DoobDecomposition d = doob_decomposition(lp.x, lp.tree);
      json out = json::object();
      out["martingale"] = mat_json(d.martingale.values);
      out["compensator"] = mat_json(d.compensator.values);
      result = out;
    });
  }
  {
    struct Opts {
      std::string in;
      std::optional<unsigned> at;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd =
        group->add_subcommand("stop", "E[X_T] for a bounded stopping time")
            ->fallthrough();
    cmd->add_option("--in", o->in,
                    in_help + "; add \"stop\": [[0/1 per node], ...] or pass "
                              "--at")
        ->required();
    cmd->add_option("--at", o->at, "constant stopping time T = t");
    cmd->callback([&result, o] {
      const LoadedProcess lp = load_process(o->in);
      StoppingTime time;
      if (o->at) {
        time = constant_stopping(lp.tree, *o->at);
      } else if (lp.doc.contains("stop")) {
        time = stopping_from_flags(
            lp.tree, flags_from_json(lp.doc.at("stop"), "--in stop"));
      } else {
        throw UsageError(
            "--in: file has no \"stop\" table; pass --at for a constant time");
      }
      json out = json::object();
      out["stopped_mean"] = rat_str(optional_stopping(lp.x, time, lp.tree));
      out["initial_value"] = rat_str(lp.x.values.front().front());
      result = out;
    });
  }
  {
    struct Opts {
      std::string p;
      unsigned long k = 0, m = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group
                    ->add_subcommand("ruin",
                                     "P[walk from k hits m before 0] with "
                                     "up-step probability p")
                    ->fallthrough();
    cmd->add_option("--p", o->p, "up-step probability (rational)")->required();
    cmd->add_option("--k", o->k, "starting stake")->required();
    cmd->add_option("--m", o->m, "target stake")->required();
    cmd->callback([&result, o] {
      json out = json::object();
      out["probability"] =
          rat_str(gambler_ruin(parse_rational(o->p, "--p"), o->k, o->m));
      result = out;
    });
  }
  {
    struct Opts {
      std::string seq, a, b;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd =
        group->add_subcommand("upcross", "completed upcrossings of [a, b]")
            ->fallthrough();
    cmd->add_option("--seq", o->seq, "comma-separated rational sequence")
        ->required();
    cmd->add_option("--a", o->a, "lower level (rational)")->required();
    cmd->add_option("--b", o->b, "upper level (rational)")->required();
    cmd->callback([&result, o] {
      json out = json::object();
      out["upcrossings"] =
          upcrossings(parse_rational_list(o->seq, "--seq"),
                      parse_rational(o->a, "--a"), parse_rational(o->b, "--b"));
      result = out;
    });
  }
  {
    struct Opts {
      std::string in;
      std::string lambda;
      std::string p_exp = "2";
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group
                    ->add_subcommand("inequalities",
                                     "both sides of the maximal inequalities "
                                     "at level lambda")
                    ->fallthrough();
    cmd->add_option("--in", o->in, in_help)->required();
    cmd->add_option("--lambda", o->lambda, "level (rational, > 0)")->required();
    cmd->add_option("--p-exp", o->p_exp, "L^p exponent (rational, > 1)")
        ->capture_default_str();
    cmd->callback([&result, o] {
      const LoadedProcess lp = load_process(o->in);
      const InequalityReport r =
          inequality_report(lp.x, lp.tree, parse_rational(o->lambda, "--lambda"),
                            parse_rational(o->p_exp, "--p-exp"));
      json out = json::object();
      out["class"] = class_name(r.process_class);
      out["submartingale_side"] = r.submartingale_side;
      if (r.submartingale_side) {
        out["prop_upper_lhs"] = rat_str(r.prop_upper_lhs);
        out["prop_upper_rhs"] = rat_str(r.prop_upper_rhs);
        out["prop_lower_lhs"] = rat_str(r.prop_lower_lhs);
        out["prop_lower_rhs"] = rat_str(r.prop_lower_rhs);
        out["maximal_lhs"] = rat_str(r.maximal_lhs);
        out["maximal_rhs"] = rat_str(r.maximal_rhs);
      }
      out["martingale_side"] = r.martingale_side;
      if (r.martingale_side) {
        out["kolmogorov_lhs"] = rat_str(r.kolmogorov_lhs);
        out["kolmogorov_rhs"] = rat_str(r.kolmogorov_rhs);
      }
      out["doob_exact"] = r.doob_exact;
      if (r.doob_exact) {
        out["doob_lhs"] = rat_str(r.doob_lhs);
        out["doob_rhs"] = rat_str(r.doob_rhs);
      }
      out["doob_lhs_value"] = r.doob_lhs_value;
      out["doob_rhs_value"] = r.doob_rhs_value;
      result = out;
    });
  }
}

void setup_chains(CLI::App& app, json& result) {
  auto* group = app.add_subcommand(
                       "chains", "finite Markov chains with exact rational "
                                 "transition matrices")
                    ->fallthrough();
  group->require_subcommand(1);

  {
    auto f = std::make_shared<ChainFlags>();
    auto* cmd = group
                    ->add_subcommand("classify",
                                     "communicating classes and the "
                                     "recurrent/transient split")
                    ->fallthrough();
    add_chain_flags(cmd, *f);
    cmd->callback([&result, f] {
      const ChainReport r = classify(chain_from_flags(*f));
      json classes = json::array();
      for (const StateClass& c : r.classes) {
        json jc = json::object();
        jc["closed"] = c.closed;
        jc["members"] = c.members;
        classes.push_back(jc);
      }
      json out = json::object();
      out["classes"] = classes;
      out["irreducible"] = r.irreducible;
      out["recurrent"] = r.recurrent;
      out["transient"] = r.transient;
      result = out;
    });
  }
  {
    auto f = std::make_shared<ChainFlags>();
    auto* cmd =
        group->add_subcommand("invariant", "invariant probability measure")
            ->fallthrough();
    add_chain_flags(cmd, *f);
    cmd->callback([&result, f] {
      const InvariantResult r = invariant_measure(chain_from_flags(*f));
      json out = json::object();
      out["mu"] = vec_json(r.measure);
      if (r.non_unique) {
        out["non_unique"] = true;
        json per = json::array();
        for (const auto& m : r.per_class) per.push_back(vec_json(m));
        out["per_class"] = per;
      }
      result = out;
    });
  }
  {
    struct Opts {
      ChainFlags chain;
      std::optional<std::string> mu;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group
                    ->add_subcommand("reversible",
                                     "detailed-balance check against a "
                                     "measure")
                    ->fallthrough();
    add_chain_flags(cmd, o->chain);
    cmd->add_option("--mu", o->mu,
                    "comma-separated rational measure (defaults to the "
                    "invariant measure)");
    cmd->callback([&result, o] {
      const StochasticMatrix q = chain_from_flags(o->chain);
      std::vector<Rational> mu;
      if (o->mu) {
        mu = parse_rational_list(*o->mu, "--mu");
      } else {
        const InvariantResult inv = invariant_measure(q);
        if (inv.non_unique)
          throw UsageError(
              "--mu: required when the invariant measure is not unique");
        mu = inv.measure;
      }
      const ReversibilityReport r = is_reversible(q, mu);
      json out = json::object();
      out["reversible"] = r.reversible;
      if (!r.reversible) {
        out["x"] = r.x;
        out["y"] = r.y;
      }
      result = out;
    });
  }
  {
    struct Opts {
      ChainFlags chain;
      std::vector<std::size_t> target, avoid;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group
                    ->add_subcommand("hit",
                                     "P_x[reach a target state before the "
                                     "avoided set], per state")
                    ->fallthrough();
    add_chain_flags(cmd, o->chain);
    cmd->add_option("--target", o->target, "target state indices")->required();
    cmd->add_option("--avoid", o->avoid, "forbidden state indices");
    cmd->callback([&result, o] {
      const HittingResult r =
          hitting_probability(chain_from_flags(o->chain), o->target, o->avoid);
      json out = json::object();
      out["probability"] = vec_json(r.probability);
      out["unreachable"] = r.unreachable;
      result = out;
    });
  }
  {
    auto f = std::make_shared<ChainFlags>();
    auto* cmd = group
                    ->add_subcommand("return-time",
                                     "E_x[first return to x] for an "
                                     "irreducible chain, per state")
                    ->fallthrough();
    add_chain_flags(cmd, *f);
    cmd->callback([&result, f] {
      json out = json::object();
      out["return_times"] = vec_json(expected_return_time(chain_from_flags(*f)));
      result = out;
    });
  }
  {
    auto f = std::make_shared<ChainFlags>();
    auto* cmd = group
                    ->add_subcommand("potential",
                                     "expected visit counts among transient "
                                     "states, (I - Q_TT)^-1")
                    ->fallthrough();
    add_chain_flags(cmd, *f);
    cmd->callback([&result, f] {
      const PotentialResult r = potential_matrix(chain_from_flags(*f));
      json out = json::object();
      out["transient"] = r.transient;
      out["u"] = mat_json(r.u);
      result = out;
    });
  }
  {
    struct Opts {
      ChainFlags chain;
      std::size_t x0 = 0;
      unsigned long steps = 0;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group
                    ->add_subcommand("simulate",
                                     "seeded trajectory by exact "
                                     "cumulative-row inversion")
                    ->fallthrough();
    add_chain_flags(cmd, o->chain);
    cmd->add_option("--x0", o->x0, "initial state index")->required();
    cmd->add_option("--steps", o->steps, "number of transitions")->required();
    add_seed(cmd, o->seed);
    cmd->callback([&result, o] {
      json out = json::object();
      out["path"] = simulate(chain_from_flags(o->chain), o->x0, o->steps,
                             o->seed);
      out["seed"] = o->seed;
      result = out;
    });
  }
  {
    auto d = std::make_shared<unsigned>(0);
    auto* cmd = group
                    ->add_subcommand("zd",
                                     "recurrence of the simple walk on the "
                                     "d-dimensional lattice")
                    ->fallthrough();
    cmd->add_option("--d", *d, "lattice dimension (>= 1)")->required();
    cmd->callback([&result, d] {
      const ZdReport r = zd_recurrence(*d);
      json sums = json::array();
      for (const auto& [checkpoint, value] : r.partial_sums)
        sums.push_back(json::array({checkpoint, value}));
      json out = json::object();
      out["dimension"] = r.dimension;
      out["recurrent"] = r.recurrent;
      out["partial_sums"] = sums;
      if (!r.recurrent) out["tail_bound"] = r.tail_bound;
      out["note"] = r.note;
      result = out;
    });
  }
}

SignSeriesDescriptor descriptor_from_flags(const std::string& name,
                                           const std::optional<double>& alpha,
                                           const std::optional<double>& ratio,
                                           const std::string& flag) {
  const std::string family = canon(name);
  if (family == "power") {
    if (!alpha) throw UsageError("--alpha: required for " + flag + " power");
    return power_signs(*alpha);
  }
  if (family == "geometric") {
    if (!ratio) throw UsageError("--ratio: required for " + flag + " geometric");
    return geometric_signs(*ratio);
  }
  if (family == "harmonic-log") return harmonic_log_signs();
  throw UsageError(flag + ": unknown coefficient family '" + name + "'");
}

void setup_mc(CLI::App& app, json& result) {
  auto* group = app.add_subcommand(
                       "mc", "seeded Monte Carlo experiments; every statistic "
                             "is reproducible from the seed")
                    ->fallthrough();
  group->require_subcommand(1);

  {
    auto f = std::make_shared<LawFlags>();
    struct Opts {
      std::size_t n = 0;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd =
        group->add_subcommand("lln", "running means against the exact mean")
            ->fallthrough();
    add_law_flags(cmd, *f, "", "--dist", "--trials", true);
    cmd->add_option("--n", o->n, "number of draws")->required();
    add_seed(cmd, o->seed);
    cmd->callback([&result, f, o] {
      const Distribution d = law_from_flags(*f, "--dist", "--trials", "", true);
      result = report_json(lln_experiment(d, o->n, SeededStream(o->seed)));
    });
  }
  {
    auto f = std::make_shared<LawFlags>();
    struct Opts {
      std::size_t n = 0, replicas = 0;
      std::uint64_t seed = 0;
      bool serial = false;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group
                    ->add_subcommand("clt",
                                     "KS distance of normalized sums from the "
                                     "standard normal")
                    ->fallthrough();
    add_law_flags(cmd, *f, "", "--dist", "--trials", true);
    cmd->add_option("--n", o->n, "summands per replica")->required();
    cmd->add_option("--replicas", o->replicas, "number of replicas")
        ->required();
    cmd->add_flag("--serial", o->serial, "run the serial reference kernel");
    add_seed(cmd, o->seed);
    cmd->callback([&result, f, o] {
      const Distribution d = law_from_flags(*f, "--dist", "--trials", "", true);
      result = report_json(clt_experiment(
          d, o->n, o->replicas, SeededStream(o->seed),
          o->serial ? ExecMode::Serial : ExecMode::Parallel));
    });
  }
  {
    auto f = std::make_shared<LawFlags>();
    struct Opts {
      std::size_t n = 0;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group
                    ->add_subcommand("gc",
                                     "sup distance between the empirical and "
                                     "exact cdf")
                    ->fallthrough();
    add_law_flags(cmd, *f, "", "--dist", "--trials", true);
    cmd->add_option("--n", o->n, "number of draws")->required();
    add_seed(cmd, o->seed);
    cmd->callback([&result, f, o] {
      const Distribution d = law_from_flags(*f, "--dist", "--trials", "", true);
      result = report_json(glivenko_cantelli(d, o->n, SeededStream(o->seed)));
    });
  }
  {
    struct Opts {
      std::size_t n = 0;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group
                    ->add_subcommand("bc",
                                     "limsup X_n / log n for iid standard "
                                     "exponentials")
                    ->fallthrough();
    cmd->add_option("--n", o->n, "horizon")->required();
    add_seed(cmd, o->seed);
    cmd->callback([&result, o] {
      result = report_json(borel_cantelli_demo(o->n, SeededStream(o->seed)));
    });
  }
  {
    struct Opts {
      std::string coeff;
      std::optional<double> alpha, ratio;
      std::size_t truncation = 10000;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group
                    ->add_subcommand("series",
                                     "random signs sum a_n xi_n: closed-form "
                                     "verdict plus seeded evidence")
                    ->fallthrough();
    cmd->add_option("--coeff", o->coeff,
                    "coefficient family: power, geometric, harmonic-log")
        ->required();
    cmd->add_option("--alpha", o->alpha, "power exponent: a_n = n^-alpha");
    cmd->add_option("--ratio", o->ratio, "geometric ratio: a_n = r^n");
    cmd->add_option("--truncation", o->truncation,
                    "partial-sum horizon K for the evidence")
        ->capture_default_str();
    add_seed(cmd, o->seed);
    cmd->callback([&result, o] {
      const SignSeriesDescriptor a =
          descriptor_from_flags(o->coeff, o->alpha, o->ratio, "--coeff");
      const RandomSignsReport r =
          random_signs_verdict(a, o->truncation, SeededStream(o->seed));
      json out = json::object();
      out["converges"] = r.converges;
      out["evidence"] = report_json(r.evidence);
      result = out;
    });
  }
  {
    struct Opts {
      std::string family, scale;
      std::optional<double> alpha, ratio;
      double k = 1.0;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group
                    ->add_subcommand("three-series",
                                     "tail / truncated-mean / truncated-"
                                     "variance convergence at level k")
                    ->fallthrough();
    cmd->add_option("--family", o->family,
                    "scaled-rademacher or truncated-exponential")
        ->required();
    cmd->add_option("--scale", o->scale,
                    "scale family: power, geometric, harmonic-log")
        ->required();
    cmd->add_option("--alpha", o->alpha, "power exponent for the scale");
    cmd->add_option("--ratio", o->ratio, "geometric ratio for the scale");
    cmd->add_option("--k", o->k, "truncation level (> 0)")
        ->capture_default_str();
    // The decision is closed-form; the seed is accepted so every mc
    // subcommand shares the same contract.
    add_seed(cmd, o->seed);
    cmd->callback([&result, o] {
      ThreeSeriesDescriptor x;
      const std::string family = canon(o->family);
      if (family == "scaled-rademacher")
        x.kind = ThreeSeriesDescriptor::Kind::ScaledRademacher;
      else if (family == "truncated-exponential")
        x.kind = ThreeSeriesDescriptor::Kind::TruncatedExponential;
      else
        throw UsageError("--family: unknown family '" + o->family + "'");
      x.scale = descriptor_from_flags(o->scale, o->alpha, o->ratio, "--scale");
      const ThreeSeriesReport r = three_series_check(x, o->k);
      json out = json::object();
      out["tail_converges"] = r.tail_converges;
      out["means_converge"] = r.means_converge;
      out["variances_converge"] = r.variances_converge;
      out["converges"] = r.converges;
      out["detail"] = r.detail;
      result = out;
    });
  }
  {
    struct Opts {
      std::size_t n = 0, replicas = 0;
      std::string rule = "sign";
      std::uint64_t seed = 0;
      bool serial = false;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = group
                    ->add_subcommand("mart-clt",
                                     "KS distance of normalized martingale "
                                     "sums from the standard normal")
                    ->fallthrough();
    cmd->add_option("--n", o->n, "increments per replica")->required();
    cmd->add_option("--replicas", o->replicas, "number of replicas")
        ->required();
    cmd->add_option("--rule", o->rule,
                    "predictable factor: sign (of the partial sum) or "
                    "identity")
        ->capture_default_str()
        ->check(CLI::IsMember({"sign", "identity"}));
    cmd->add_flag("--serial", o->serial, "run the serial reference kernel");
    add_seed(cmd, o->seed);
    cmd->callback([&result, o] {
      result = report_json(martingale_clt_experiment(
          o->n, o->replicas, SeededStream(o->seed),
          o->rule == "identity" ? PredictableRule::Identity
                                : PredictableRule::SignOfPartialSum,
          o->serial ? ExecMode::Serial : ExecMode::Parallel));
    });
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact probability workbench with a seeded Monte Carlo harness",
               "stochlab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  std::string out_path;
  app.add_option("--format", format, "output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "write the document to FILE, not stdout");

  json result;
  setup_combinatorics(app, result);
  setup_walks(app, result);
  setup_dist(app, result);
  setup_cond(app, result);
  setup_mart(app, result);
  setup_chains(app, result);
  setup_mc(app, result);

  try {
    app.parse(argc, argv);
    emit(result, format, out_path);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::string message = e.what();
    const std::string prefix = e.name() + ": ";
    if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
    json err = json::object();
    err["error"] = e.name();
    err["message"] = message;
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    json err = json::object();
    err["error"] = "InternalError";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
