#pragma once

// Command-line front end. run_cli() takes the argument vector and the two
// output streams so the whole surface can be driven in-process.
//
// Exit codes: 0 success, 1 numeric failure, 2 usage error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "onemax/onemax.hpp"

namespace onemax::cli {

using nlohmann::ordered_json;

enum class Format { Csv, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitUsage = 2;

struct OutputSpec {
  std::optional<Format> format; ///< unset: the subcommand's default
  std::string path;             ///< empty: standard output
  int precision = 15;
};

/// A rendered value: its CSV text and its JSON form.
struct Cell {
  std::string csv;
  ordered_json json;
};

inline std::string format_double(double x, int precision) {
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

inline Cell cell(double x, int precision) {
  const std::string text = format_double(x, precision);
  if (!std::isfinite(x))
    return {text, nullptr};
  return {text, std::stod(text)};
}

inline Cell cell(const Rational& x, int) {
  return {x.str(), ordered_json{{"num", numerator(x).str()}, {"den", denominator(x).str()}}};
}

inline Cell cell(std::uint64_t x, int = 0) { return {std::to_string(x), x}; }
inline Cell cell(bool b, int = 0) { return {b ? "true" : "false", b}; }
inline Cell cell_text(const std::string& s) { return {s, s}; }
inline Cell cell_empty() { return {"", nullptr}; }

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  ordered_json meta = ordered_json::object();
};

inline void write_table(const Table& t, Format f, std::ostream& out) {
  if (f == Format::Csv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << row[i].csv;
      out << '\n';
    }
    return;
  }
  ordered_json doc = t.meta;
  doc["columns"] = t.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      obj[t.columns[i]] = row[i].json;
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

/// Inclusive range "lo:hi" or "lo:hi:step".
struct IntRange {
  std::int64_t lo = 0, hi = 0, step = 1;
};

inline IntRange parse_range(const std::string& text) {
  IntRange r;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> r.lo >> c1 >> r.hi) || c1 != ':')
    throw DomainError("range must look like LO:HI or LO:HI:STEP, got '" + text + "'");
  if (in >> c2) {
    if (c2 != ':' || !(in >> r.step))
      throw DomainError("range must look like LO:HI or LO:HI:STEP, got '" + text + "'");
  }
  if (r.step <= 0 || r.lo > r.hi)
    throw DomainError("empty range '" + text + "'");
  return r;
}

/// "p/q" or a decimal.
inline double parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos)
      return std::stod(text);
    return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + text + "'");
  }
}

inline StartRule parse_start(const std::string& text) {
  if (text == "uniform")
    return UniformRandom{};
  if (text.rfind("fixed:", 0) == 0) {
    const std::string k = text.substr(6);
    if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos)
      throw DomainError("bad fixed start '" + text + "'");
    return FixedZeros{static_cast<std::size_t>(std::stoull(k))};
  }
  throw DomainError("start must be 'uniform' or 'fixed:K', got '" + text + "'");
}

inline unsigned default_threads() {
  if (const char* env = std::getenv("ONEMAX_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0)
        return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// ---------------------------------------------------------------------------
// Subcommands

template <Scalar S>
Table drift_table(ProblemSize n, int precision) {
  const auto table = build_drift_table<S>(n);
  Table t{{"k", "delta", "delta_star", "lower_bound", "upper_bound"}, {}, {}};
  t.meta["n"] = n.value();
  t.meta["backend"] = std::string(to_string(backend_of<S>));
  const double dn = static_cast<double>(n.value());
  for (std::size_t k = 0; k <= n; ++k) {
    t.rows.push_back({cell(std::uint64_t{k}), cell(table.delta[k], precision),
                      cell(table.delta_star[k], precision),
                      cell(static_cast<double>(k) / (std::numbers::e * dn), precision),
                      cell(ratio<S>(static_cast<std::int64_t>(k), static_cast<std::int64_t>(n.value())),
                           precision)});
  }
  return t;
}

template <Scalar S>
Table runtime_table(ProblemSize n, std::size_t start, int precision) {
  if (start > n)
    throw DomainError("start state exceeds n");
  const auto table = build_drift_table<S>(n);
  const auto kernel = build_kernel<S>(n, kDefaultRationalCap, start);
  const auto profile = hitting_profile(kernel, table);
  const double logn = std::log(static_cast<double>(n.value()));
  const double g = to_double(profile.g[start]);
  const double q = to_double(profile.q[start]);
  const double lower = q - corridor_c1() * logn;
  const double upper = q - corridor_c2() * logn;
  Table t{{"n", "k", "g_exact", "q_sum", "q_minus_c1_logn", "q_minus_c2_logn", "in_corridor"}, {}, {}};
  t.meta["backend"] = std::string(to_string(backend_of<S>));
  t.meta["c1"] = corridor_c1();
  t.meta["c2"] = corridor_c2();
  t.rows.push_back({cell(std::uint64_t{n.value()}), cell(std::uint64_t{start}),
                    cell(profile.g[start], precision), cell(profile.q[start], precision),
                    cell(lower, precision), cell(upper, precision),
                    cell(lower <= g && g <= upper)});
  return t;
}

inline const char* status_text(CheckStatus s) {
  switch (s) {
  case CheckStatus::Pass:
    return "pass";
  case CheckStatus::Fail:
    return "fail";
  default:
    return "n/a";
  }
}

inline void write_bounds(const BoundReport& r, Format f, int precision, std::ostream& out) {
  if (f == Format::Csv) {
    Table t{{"check_id", "k_lo", "k_hi", "bound", "observed", "slack", "worst_k", "status",
             "evaluated_with"},
            {},
            {}};
    for (const auto& c : r.checks)
      t.rows.push_back({cell_text(c.id), cell(std::uint64_t{c.k_lo}), cell(std::uint64_t{c.k_hi}),
                        cell(c.bound, precision), cell(c.observed, precision),
                        cell(c.slack, precision), cell(std::uint64_t{c.worst_k}),
                        cell_text(status_text(c.status)),
                        cell_text(std::string(to_string(c.evaluated_with)))});
    write_table(t, f, out);
    return;
  }
  ordered_json doc;
  doc["n"] = r.n.value();
  doc["backend"] = std::string(to_string(r.backend));
  doc["all_passed"] = r.all_passed();
  doc["eta_star_max"] = {{"range", {r.eta_max_lo, r.eta_max_hi}},
                         {"value", cell(r.eta_star_max, precision).json}};
  doc["eta_star_min"] = {{"range", {r.eta_min_lo, r.eta_min_hi}},
                         {"value", cell(r.eta_star_min, precision).json}};
  ordered_json eta = ordered_json::array();
  for (double v : r.eta)
    eta.push_back(cell(v, precision).json);
  doc["eta"] = std::move(eta);
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json j;
    j["check_id"] = c.id;
    j["range"] = {c.k_lo, c.k_hi};
    j["bound"] = cell(c.bound, precision).json;
    j["observed"] = cell(c.observed, precision).json;
    j["slack"] = cell(c.slack, precision).json;
    j["worst_k"] = c.worst_k;
    j["applicable"] = c.status != CheckStatus::NotApplicable;
    j["pass"] = c.status == CheckStatus::NotApplicable ? ordered_json(nullptr)
                                                       : ordered_json(c.status == CheckStatus::Pass);
    j["evaluated_with"] = std::string(to_string(c.evaluated_with));
    checks.push_back(std::move(j));
  }
  doc["checks"] = std::move(checks);
  out << doc.dump(2) << '\n';
}

/// Largest n for which the asym subcommand also computes exact columns.
inline constexpr std::size_t kAsymExactLimit = 4096;

inline Table asym_table(const std::vector<std::int64_t>& ns, unsigned order, double eps,
                        int precision) {
  if (order > 2)
    throw DomainError("order must be 0, 1 or 2");
  if (!(eps > 0.0 && eps < 1.0))
    throw DomainError("eps must lie in (0, 1)");
  const double c0 = constant_c0();
  const double c1 = -std::numbers::e * c0;
  Table t{{"n", "order", "eps", "c0", "c1", "c2", "q_asym", "et_asym", "q_exact", "g_exact",
           "max_expansion_error"},
          {},
          {}};
  for (std::int64_t raw : ns) {
    const ProblemSize n(raw);
    std::vector<Cell> row{cell(std::uint64_t{n.value()}), cell(std::uint64_t{order}),
                          cell(eps, precision),           cell(c0, precision),
                          cell(c1, precision),            cell(kStoredC2, precision),
                          cell(asymptotic_q(n, c1), precision),
                          cell(asymptotic_et(n, c1), precision)};
    if (n <= kAsymExactLimit) {
      const auto over = overestimate_row(n);
      const auto k_max = static_cast<std::size_t>(std::floor((1.0 - eps) * static_cast<double>(n.value())));
      row.push_back(cell(over.q_exact, precision));
      row.push_back(cell(over.g_exact, precision));
      row.push_back(k_max >= 1 ? cell(max_expansion_error(n, order, k_max), precision) : cell_empty());
    } else {
      row.push_back(cell_empty());
      row.push_back(cell_empty());
      row.push_back(cell_empty());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table figure_table(int which, const IntRange& range, int precision) {
  Table t;
  if (which == 1) {
    t.columns = {"n",    "k",    "alpha", "delta_star_exact", "approx0", "approx1", "approx2",
                 "err0", "err1", "err2",  "inv_err0",         "inv_err1", "inv_err2"};
    for (std::int64_t raw = range.lo; raw <= range.hi; raw += range.step) {
      for (const auto& r : expansion_error_rows(ProblemSize(raw))) {
        std::vector<Cell> row{cell(std::uint64_t{r.n}), cell(std::uint64_t{r.k}),
                              cell(r.alpha, precision), cell(r.delta_star_exact, precision)};
        for (double v : r.approx)
          row.push_back(cell(v, precision));
        for (double v : r.err)
          row.push_back(cell(v, precision));
        for (double v : r.inv_err)
          row.push_back(cell(v, precision));
        t.rows.push_back(std::move(row));
      }
    }
  } else if (which == 2) {
    t.columns = {"n", "q_exact", "g_exact", "diff", "diff_minus_half_e_log"};
    for (std::int64_t raw = range.lo; raw <= range.hi; raw += range.step) {
      const auto r = overestimate_row(ProblemSize(raw));
      t.rows.push_back({cell(std::uint64_t{r.n}), cell(r.q_exact, precision),
                        cell(r.g_exact, precision), cell(r.diff, precision),
                        cell(r.diff_minus_half_e_log, precision)});
    }
  } else {
    throw DomainError("--which must be 1 or 2");
  }
  t.meta["figure"] = which;
  return t;
}

inline Table sim_table(const SimConfig& config, const RunResult& result, std::uint64_t cap,
                       int precision) {
  const auto& s = result.stats;
  Table t{{"n", "start", "engine", "samples", "mean", "std_error", "min", "max", "truncated",
           "seed", "max_iters", "valid"},
          {},
          {}};
  t.rows.push_back({cell(std::uint64_t{config.n.value()}), cell_text(describe(config.start)),
                    cell_text(std::string(to_string(config.engine))), cell(s.samples),
                    cell(s.mean, precision), cell(s.std_error, precision), cell(s.min),
                    cell(s.max), cell(s.truncated), cell(config.seed), cell(cap),
                    cell(s.valid())});
  return t;
}

inline void write_sim_json(const Table& t, std::ostream& out) {
  ordered_json doc;
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    doc[t.columns[i]] = t.rows.front()[i].json;
  out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact, bounded, asymptotic and simulated runtimes of the (1+1) EA on OneMax",
               "onemax"};
  app.require_subcommand(1);
  app.fallthrough();

  OutputSpec spec;
  std::string backend = "float";
  std::string format_name;
  unsigned threads = default_threads();
  std::uint64_t seed = 0;
  std::string eps_text = "1/8";

  app.add_option("--backend", backend, "Scalar backend")->check(CLI::IsMember({"float", "rational"}));
  app.add_option("--out", spec.path, "Write output to this file instead of stdout");
  app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--precision", spec.precision, "Significant digits for floats")
      ->check(CLI::Range(1, 17));
  app.add_option("--threads", threads, "Worker threads (env ONEMAX_THREADS sets the default)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Master seed for simulations");
  app.add_option("--eps", eps_text, "Expansion validity margin, e.g. 1/8");

  std::int64_t n_arg = 0;
  auto* drift_cmd = app.add_subcommand("drift", "Drift and normalized drift table");
  drift_cmd->add_option("n", n_arg, "Number of bits")->required();

  std::optional<std::int64_t> start_arg;
  auto* runtime_cmd = app.add_subcommand("runtime", "Exact expected runtime and the corridor");
  runtime_cmd->add_option("n", n_arg, "Number of bits")->required();
  runtime_cmd->add_option("--start", start_arg, "Initial number of zero-bits (default floor(n/2))");

  auto* bounds_cmd = app.add_subcommand("bounds", "Check every proved inequality");
  bounds_cmd->add_option("n", n_arg, "Number of bits")->required();

  std::vector<std::int64_t> n_list;
  unsigned order = 2;
  auto* asym_cmd = app.add_subcommand("asym", "Asymptotic runtime estimates");
  asym_cmd->add_option("n", n_list, "Problem sizes")->required();
  asym_cmd->add_option("--order", order, "Expansion order 0, 1 or 2");

  int which = 1;
  std::string n_range = "2:50";
  auto* figures_cmd = app.add_subcommand("figures", "Data for the expansion and overestimate plots");
  figures_cmd->add_option("--which", which, "1: expansion errors, 2: overestimate")
      ->check(CLI::IsMember({1, 2}));
  figures_cmd->add_option("--n-range", n_range, "LO:HI or LO:HI:STEP");

  std::int64_t sim_n = 0;
  std::string start_text = "uniform";
  std::uint64_t reps = 1000;
  std::string engine_name = "chain";
  std::uint64_t max_iters = 0;
  std::string samples_path;
  auto* sim_cmd = app.add_subcommand("sim", "Monte Carlo runtime of the (1+1) EA");
  sim_cmd->add_option("--n", sim_n, "Number of bits")->required();
  sim_cmd->add_option("--start", start_text, "fixed:K or uniform");
  sim_cmd->add_option("--reps", reps, "Replicates")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--engine", engine_name, "bitstring or chain")
      ->check(CLI::IsMember({"bitstring", "chain"}));
  sim_cmd->add_option("--max-iters", max_iters, "Per-run iteration cap (0: default)");
  sim_cmd->add_option("--samples", samples_path, "Also write one runtime per line to this file");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  if (!format_name.empty())
    spec.format = format_name == "csv" ? Format::Csv : Format::Json;
  const bool rational = backend == "rational";

  std::ostringstream buffer;
  try {
    if (drift_cmd->parsed()) {
      const ProblemSize n(n_arg);
      const Table t = rational ? drift_table<Rational>(n, spec.precision)
                               : drift_table<double>(n, spec.precision);
      write_table(t, spec.format.value_or(Format::Csv), buffer);
    } else if (runtime_cmd->parsed()) {
      const ProblemSize n(n_arg);
      const std::int64_t start = start_arg.value_or(static_cast<std::int64_t>(n.value() / 2));
      if (start < 0)
        throw DomainError("start state must be non-negative");
      const auto k = static_cast<std::size_t>(start);
      const Table t = rational ? runtime_table<Rational>(n, k, spec.precision)
                               : runtime_table<double>(n, k, spec.precision);
      write_table(t, spec.format.value_or(Format::Csv), buffer);
    } else if (bounds_cmd->parsed()) {
      const ProblemSize n(n_arg);
      const auto report = verify_inequalities(
          n, rational ? ScalarBackend::ExactRational : ScalarBackend::Float64);
      write_bounds(report, spec.format.value_or(Format::Json), spec.precision, buffer);
    } else if (asym_cmd->parsed()) {
      write_table(asym_table(n_list, order, parse_rational(eps_text), spec.precision),
                  spec.format.value_or(Format::Csv), buffer);
    } else if (figures_cmd->parsed()) {
      write_table(figure_table(which, parse_range(n_range), spec.precision),
                  spec.format.value_or(Format::Csv), buffer);
    } else if (sim_cmd->parsed()) {
      SimConfig config{ProblemSize(sim_n)};
      config.start = parse_start(start_text);
      config.replicates = reps;
      config.seed = seed;
      config.engine = engine_name == "bitstring" ? Engine::Bitstring : Engine::StateChain;
      config.max_iters = max_iters;
      config.threads = threads;
      const auto result = run(config);
      const std::uint64_t cap = max_iters ? max_iters : default_max_iters(config.n);
      const Table t = sim_table(config, result, cap, spec.precision);
      if (spec.format.value_or(Format::Json) == Format::Json)
        write_sim_json(t, buffer);
      else
        write_table(t, Format::Csv, buffer);
      if (!samples_path.empty()) {
        std::ofstream raw(samples_path);
        if (!raw)
          throw std::runtime_error("cannot open " + samples_path);
        for (std::uint64_t v : result.samples)
          raw << v << '\n';
      }
      if (!result.stats.valid())
        err << "warning: " << result.stats.truncated << " runs hit the iteration cap\n";
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }

  if (spec.path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(spec.path);
    if (!file) {
      err << "error: cannot open " << spec.path << '\n';
      return kExitNumeric;
    }
    file << buffer.str();
  }
  return kExitOk;
}

} // namespace onemax::cli
