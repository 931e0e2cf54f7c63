#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orrw/csv.hpp"
#include "orrw/exact.hpp"
#include "orrw/montecarlo.hpp"
#include "orrw/series.hpp"
#include "orrw/version.hpp"
#include "orrw/walk.hpp"

namespace orrw::cli {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything a run needs, resolved from flags, environment and defaults.
// The canonical argument echo written to CSV metadata is rebuilt from these
// resolved values: gamma is normalized to c, the seed is always explicit,
// and output/worker options (which cannot change results) are omitted.
struct RunConfig {
  std::string subcommand;
  std::optional<double> c;
  std::optional<double> gamma;
  std::uint64_t n = 0;
  std::uint64_t reps = 10000;
  std::uint64_t k = 1;
  std::int64_t ell = -1;
  std::optional<std::uint64_t> seed;
  std::vector<double> s_values;
  std::string c_grid = "0.25,0.5,1,2,3";
  std::uint64_t nmax = 0;
  std::string out_path;
  std::string method = "quadrature";
  std::string fn = "g";
  std::optional<double> x;
  bool full_scale = false;
  bool dist = false;
  unsigned threads = 0;

  std::uint64_t resolved_seed = kDefaultSeed;

  Params params() const {
    if (c) return Params(*c);
    if (gamma) return Params::from_gamma(*gamma);
    throw UsageError("exactly one of --c or --gamma is required");
  }

  unsigned ell_or(unsigned fallback) const {
    return ell < 0 ? fallback : static_cast<unsigned>(ell);
  }
};

namespace detail {

inline std::uint64_t parse_u64(const std::string& text) {
  std::size_t used = 0;
  const std::uint64_t value = std::stoull(text, &used);
  if (used != text.size()) throw UsageError("not an unsigned integer: " + text);
  return value;
}

inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("ORRW_SEED")) return parse_u64(env);
  return kDefaultSeed;
}

inline std::vector<double> parse_c_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    const auto parts = csv::split(text, ':');
    if (parts.size() != 3) throw UsageError("--c-grid expects min:max:step or a comma list");
    const double lo = std::stod(parts[0]);
    const double hi = std::stod(parts[1]);
    const double step = std::stod(parts[2]);
    if (!(step > 0.0) || !(lo > 0.0) || hi < lo)
      throw UsageError("--c-grid: need 0 < min <= max and step > 0");
    for (int i = 0;; ++i) {
      const double v = lo + i * step;
      if (v > hi * (1.0 + 1e-12)) break;
      grid.push_back(v);
    }
  } else {
    for (const auto& part : csv::split(text, ','))
      if (!part.empty()) grid.push_back(std::stod(part));
  }
  if (grid.empty()) throw UsageError("--c-grid: empty grid");
  for (double v : grid)
    if (!(v > 0.0)) throw UsageError("--c-grid: entries must be positive");
  return grid;
}

inline std::string join_doubles(const std::vector<double>& values) {
  std::string text;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text += ',';
    text += csv::format(values[i]);
  }
  return text;
}

// -------------------------------------------------------------------------
// Subcommand handlers.  Each produces a full CSV table, including the
// canonical argument echo that reproduces the run.
// -------------------------------------------------------------------------

inline csv::Table run_simulate(const RunConfig& cfg) {
  const Params params = cfg.params();
  const Path path = simulate_path(params, cfg.n, cfg.resolved_seed);
  csv::Table table;
  table.argv_echo = "simulate --c " + csv::format(params.c()) + " --n " +
                    csv::format(cfg.n) + " --seed " + csv::format(cfg.resolved_seed);
  table.header = {"step", "position", "min", "max", "range"};
  std::int64_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < path.positions.size(); ++i) {
    const std::int64_t x = path.positions[i];
    if (x < lo) lo = x;
    if (x > hi) hi = x;
    table.rows.push_back({csv::format(static_cast<std::uint64_t>(i)), csv::format(x),
                          csv::format(lo), csv::format(hi), csv::format(hi - lo)});
  }
  return table;
}

inline csv::Table run_exact_range(const RunConfig& cfg) {
  const Params params = cfg.params();
  if (cfg.n < 1) throw UsageError("exact-range: need --n >= 1");
  const bool moments_mode = cfg.ell >= 0;
  const RangeTable result =
      range_distribution(params, cfg.n, moments_mode ? cfg.ell_or(2) : 2);
  csv::Table table;
  table.argv_echo = "exact-range --c " + csv::format(params.c()) + " --n " +
                    csv::format(cfg.n);
  if (moments_mode) table.argv_echo += " --ell " + csv::format(cfg.ell_or(2));
  table.comments.push_back("deficit=" + csv::format(result.dist.deficit()));
  if (moments_mode) {
    table.header = {"ell", "factorial_moment"};
    for (std::size_t l = 0; l < result.factorial_moments.size(); ++l)
      table.rows.push_back({csv::format(static_cast<std::uint64_t>(l)),
                            csv::format(result.factorial_moments[l])});
  } else {
    table.header = {"r", "prob"};
    for (std::size_t i = 0; i < result.dist.size(); ++i)
      table.rows.push_back(
          {csv::format(result.dist.offset() + static_cast<std::int64_t>(i)),
           csv::format(result.dist.probs()[i])});
  }
  return table;
}

inline csv::Table run_tau(const RunConfig& cfg) {
  const DiscreteDistribution law =
      tau_distribution(static_cast<std::int64_t>(cfg.k), cfg.nmax);
  csv::Table table;
  table.argv_echo = "tau --k " + csv::format(cfg.k);
  if (cfg.nmax) table.argv_echo += " --nmax " + csv::format(cfg.nmax);
  table.comments.push_back("deficit=" + csv::format(law.deficit()));
  table.comments.push_back("mean=" + csv::format(law.mean()));
  table.header = {"m", "prob"};
  for (std::size_t i = 0; i < law.size(); ++i)
    table.rows.push_back({csv::format(law.offset() + static_cast<std::int64_t>(i)),
                          csv::format(law.probs()[i])});
  return table;
}

inline csv::Table run_sk(const RunConfig& cfg) {
  const Params params = cfg.params();
  const DiscreteDistribution law =
      s_k_distribution(params, static_cast<std::int64_t>(cfg.k), cfg.nmax);
  csv::Table table;
  table.argv_echo = "sk --c " + csv::format(params.c()) + " --k " + csv::format(cfg.k);
  if (cfg.nmax) table.argv_echo += " --nmax " + csv::format(cfg.nmax);
  if (cfg.dist) table.argv_echo += " --dist";
  if (cfg.dist) {
    table.comments.push_back("deficit=" + csv::format(law.deficit()));
    table.header = {"m", "prob"};
    for (std::size_t i = 0; i < law.size(); ++i)
      table.rows.push_back({csv::format(law.offset() + static_cast<std::int64_t>(i)),
                            csv::format(law.probs()[i])});
  } else {
    table.header = {"c", "k", "mean", "variance", "deficit", "horizon"};
    table.rows.push_back({csv::format(params.c()), csv::format(cfg.k),
                          csv::format(law.mean()), csv::format(law.variance()),
                          csv::format(law.deficit()),
                          csv::format(law.support_end() - 1)});
  }
  return table;
}

inline csv::Table run_genfun(const RunConfig& cfg) {
  if (cfg.s_values.empty()) throw UsageError("genfun: need --s with at least one value");
  csv::Table table;
  const double x = cfg.x ? *cfg.x : static_cast<double>(cfg.k);
  table.argv_echo = "genfun --fn " + cfg.fn;

  if (cfg.fn == "d") {
    table.header = {"s", "value"};
    for (double s : cfg.s_values)
      table.rows.push_back({csv::format(s), csv::format(d_of_s(s))});
  } else if (cfg.fn == "g" || cfg.fn == "gstable") {
    table.header = {"s", "x", "value"};
    for (double s : cfg.s_values) {
      const double value = cfg.fn == "g" ? g(x, s) : g_stable(x, s);
      table.rows.push_back({csv::format(s), csv::format(x), csv::format(value)});
    }
    table.argv_echo += " --x " + csv::format(x);
  } else if (cfg.fn == "G") {
    const Params params = cfg.params();
    table.header = {"s", "x", "value"};
    for (double s : cfg.s_values)
      table.rows.push_back(
          {csv::format(s), csv::format(x), csv::format(G(x, s, params))});
    table.argv_echo += " --c " + csv::format(params.c()) + " --x " + csv::format(x);
  } else if (cfg.fn == "sk") {
    const Params params = cfg.params();
    table.header = {"s", "k", "value"};
    for (double s : cfg.s_values)
      table.rows.push_back(
          {csv::format(s), csv::format(cfg.k),
           csv::format(gen_S_k(params, static_cast<std::int64_t>(cfg.k), s))});
    table.argv_echo += " --c " + csv::format(params.c()) + " --k " + csv::format(cfg.k);
  } else if (cfg.fn == "h") {
    const Params params = cfg.params();
    const unsigned ell = cfg.ell_or(0);
    table.header = {"s", "ell", "value"};
    for (double s : cfg.s_values)
      table.rows.push_back({csv::format(s), csv::format(ell),
                            csv::format(h_ell(params, ell, s).value)});
    table.argv_echo += " --c " + csv::format(params.c()) + " --ell " + csv::format(ell);
  } else {
    throw UsageError("genfun: unknown --fn " + cfg.fn +
                     " (expected d, g, gstable, G, sk or h)");
  }
  table.argv_echo += " --s " + join_doubles(cfg.s_values);
  return table;
}

inline csv::Table run_jconst(const RunConfig& cfg) {
  const Params params = cfg.params();
  const unsigned ell = cfg.ell_or(1);
  JValue value;
  if (cfg.method == "quadrature") {
    value = j_quadrature(params.c(), ell);
  } else if (cfg.method == "closed") {
    const double c = params.c();
    if (c != std::floor(c) || c < 1.0 || c > 30.0)
      throw std::domain_error("jconst --method closed: c must be an integer in [1, 30]");
    value = j_closed_form(static_cast<int>(c), ell);
  } else {
    throw UsageError("jconst: --method must be quadrature or closed");
  }
  csv::Table table;
  table.argv_echo = "jconst --c " + csv::format(params.c()) + " --ell " +
                    csv::format(ell) + " --method " + cfg.method;
  table.header = {"c", "ell", "method", "value", "abs_error_bound"};
  table.rows.push_back(
      {csv::format(params.c()), csv::format(ell),
       value.method == JMethod::quadrature ? "quadrature" : "closed_form",
       csv::format(value.value), csv::format(value.abs_error_bound)});
  return table;
}

inline csv::Table run_moments(const RunConfig& cfg) {
  const Params params = cfg.params();
  const unsigned ell_max = cfg.ell_or(2);
  csv::Table table;
  table.argv_echo =
      "moments --c " + csv::format(params.c()) + " --ell " + csv::format(ell_max);
  table.header = {"c", "ell", "value"};
  for (unsigned l = 1; l <= ell_max; ++l)
    table.rows.push_back({csv::format(params.c()), csv::format(l),
                          csv::format(moment_constant(params.c(), l))});
  return table;
}

inline csv::Table run_mc(const RunConfig& cfg) {
  const Params params = cfg.params();
  if (cfg.n < 1) throw UsageError("mc: need --n >= 1");
  const unsigned ell_max = cfg.ell_or(2);
  const auto estimates = estimate_range_moments(params, cfg.n, cfg.reps, ell_max,
                                                cfg.resolved_seed, cfg.threads);
  csv::Table table;
  table.argv_echo = "mc --c " + csv::format(params.c()) + " --n " +
                    csv::format(cfg.n) + " --reps " + csv::format(cfg.reps) +
                    " --ell " + csv::format(ell_max) + " --seed " +
                    csv::format(cfg.resolved_seed);
  table.header = {"c", "n", "reps", "ell", "mean", "stderr"};
  for (const auto& e : estimates)
    table.rows.push_back({csv::format(e.c), csv::format(e.n), csv::format(e.reps),
                          csv::format(e.ell), csv::format(e.mean),
                          csv::format(e.std_error)});
  return table;
}

inline csv::Table run_figure1(const RunConfig& cfg) {
  const std::vector<double> grid = parse_c_grid(cfg.c_grid);
  std::uint64_t n = cfg.n ? cfg.n : 10000;
  std::uint64_t reps = cfg.reps;
  if (cfg.full_scale) n = reps = 100000;
  const auto rows = figure1_table(grid, n, reps, cfg.resolved_seed, cfg.threads);
  csv::Table table;
  table.argv_echo = "figure1 --c-grid " + join_doubles(grid) + " --n " +
                    csv::format(n) + " --reps " + csv::format(reps) + " --seed " +
                    csv::format(cfg.resolved_seed);
  table.header = {"c", "n", "reps", "var_hat", "stderr", "lhs", "rhs"};
  for (const auto& row : rows)
    table.rows.push_back({csv::format(row.c), csv::format(row.n),
                          csv::format(row.reps), csv::format(row.var_hat),
                          csv::format(row.std_error), csv::format(row.lhs),
                          csv::format(row.rhs)});
  return table;
}

inline csv::Table run_tauber(const RunConfig& cfg) {
  const Params params = cfg.params();
  if (cfg.s_values.empty()) throw UsageError("tauber: need --s with at least one value");
  const unsigned ell = cfg.ell_or(0);
  const auto rows = tauberian_check(params, ell, cfg.s_values);
  csv::Table table;
  table.argv_echo = "tauber --c " + csv::format(params.c()) + " --ell " +
                    csv::format(ell) + " --s " + join_doubles(cfg.s_values);
  table.header = {"s", "scaled", "k_constant"};
  for (const auto& row : rows)
    table.rows.push_back({csv::format(row.s), csv::format(row.scaled),
                          csv::format(row.limit)});
  return table;
}

}  // namespace detail

// Parses the argument vector (without the program name), runs the requested
// subcommand and writes its CSV to `out` or to --out.  Exit status: 0 on
// success, 2 on a usage error, 1 on a runtime failure.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out,
                    std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"once-reinforced random walk: simulation and exact numerics"};
  app.name("orrw");
  app.require_subcommand(1);

  auto add_common = [&cfg](CLI::App* sub, bool with_params) {
    sub->add_option("--seed", cfg.seed, "RNG master seed (default: ORRW_SEED or 42)");
    sub->add_option("--out", cfg.out_path, "write CSV to this file instead of stdout");
    if (with_params) {
      auto* c_opt = sub->add_option("--c", cfg.c, "reinforcement parameter c > 0");
      auto* g_opt = sub->add_option("--gamma", cfg.gamma, "c = exp(-gamma)");
      c_opt->excludes(g_opt);
      g_opt->excludes(c_opt);
    }
  };

  auto* simulate = app.add_subcommand("simulate", "sample one walk, one row per step");
  add_common(simulate, true);
  simulate->add_option("--n", cfg.n, "number of steps")->required();

  auto* exact_range = app.add_subcommand(
      "exact-range", "exact law of the range R_n (with --ell: factorial moments)");
  add_common(exact_range, true);
  exact_range->add_option("--n", cfg.n, "horizon")->required();
  exact_range->add_option("--ell", cfg.ell, "emit factorial moments 0..ell instead");

  auto* tau = app.add_subcommand("tau", "law of the interval exit time tau_i");
  add_common(tau, false);
  tau->add_option("--k", cfg.k, "index i of tau_i")->required();
  tau->add_option("--nmax", cfg.nmax, "truncation horizon (0 = auto)");

  auto* sk = app.add_subcommand("sk", "law of the range hitting time S_k");
  add_common(sk, true);
  sk->add_option("--k", cfg.k, "range level k")->required();
  sk->add_option("--nmax", cfg.nmax, "truncation horizon (0 = auto)");
  sk->add_flag("--dist", cfg.dist, "emit the full distribution instead of a summary");

  auto* genfun = app.add_subcommand("genfun", "evaluate generating functions");
  add_common(genfun, true);
  genfun->add_option("--fn", cfg.fn, "one of d, g, gstable, G, sk, h");
  genfun->add_option("--s", cfg.s_values, "evaluation points in (0,1)")
      ->delimiter(',');
  genfun->add_option("--x", cfg.x, "real index x >= 1 for g/G");
  genfun->add_option("--k", cfg.k, "integer index (x for g/G, k for sk)");
  genfun->add_option("--ell", cfg.ell, "moment order for fn=h");

  auto* jconst = app.add_subcommand("jconst", "the constant J_ell(c)");
  add_common(jconst, true);
  jconst->add_option("--ell", cfg.ell, "moment order (default 1)");
  jconst->add_option("--method", cfg.method, "quadrature or closed");

  auto* moments = app.add_subcommand("moments",
                                     "limits of E[(R_n/sqrt n)^ell], ell = 1..L");
  add_common(moments, true);
  moments->add_option("--ell", cfg.ell, "largest moment order (default 2)");

  auto* mc = app.add_subcommand("mc", "Monte Carlo range moments");
  add_common(mc, true);
  mc->add_option("--n", cfg.n, "steps per walk")->required();
  mc->add_option("--reps", cfg.reps, "number of independent walks");
  mc->add_option("--ell", cfg.ell, "largest moment order (default 2)");
  mc->add_option("--threads", cfg.threads, "worker count (0 = all cores)");

  auto* figure1 = app.add_subcommand(
      "figure1", "observed variance of X_n/sqrt n against the heuristic bounds");
  add_common(figure1, false);
  figure1->add_option("--c-grid", cfg.c_grid, "comma list or min:max:step");
  figure1->add_option("--n", cfg.n, "steps per walk (default 10000)");
  figure1->add_option("--reps", cfg.reps, "walks per c (default 10000)");
  figure1->add_flag("--full-scale", cfg.full_scale, "n = reps = 100000");
  figure1->add_option("--threads", cfg.threads, "worker count (0 = all cores)");

  auto* tauber = app.add_subcommand(
      "tauber", "scaled H_ell values against their s -> 1 limit K_ell");
  add_common(tauber, true);
  tauber->add_option("--ell", cfg.ell, "moment order (default 0)");
  tauber->add_option("--s", cfg.s_values, "evaluation points in (0,1)")
      ->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));

    CLI::App* chosen = app.get_subcommands().at(0);
    cfg.subcommand = chosen->get_name();
    cfg.resolved_seed = detail::resolve_seed(cfg.seed);

    csv::Table table;
    if (cfg.subcommand == "simulate") table = detail::run_simulate(cfg);
    else if (cfg.subcommand == "exact-range") table = detail::run_exact_range(cfg);
    else if (cfg.subcommand == "tau") table = detail::run_tau(cfg);
    else if (cfg.subcommand == "sk") table = detail::run_sk(cfg);
    else if (cfg.subcommand == "genfun") table = detail::run_genfun(cfg);
    else if (cfg.subcommand == "jconst") table = detail::run_jconst(cfg);
    else if (cfg.subcommand == "moments") table = detail::run_moments(cfg);
    else if (cfg.subcommand == "mc") table = detail::run_mc(cfg);
    else if (cfg.subcommand == "figure1") table = detail::run_figure1(cfg);
    else if (cfg.subcommand == "tauber") table = detail::run_tauber(cfg);
    else throw UsageError("unknown subcommand: " + cfg.subcommand);

    if (!cfg.out_path.empty()) {
      std::ofstream file(cfg.out_path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file: " + cfg.out_path);
      csv::write(file, table);
    } else {
      csv::write(out, table);
    }
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace orrw::cli
