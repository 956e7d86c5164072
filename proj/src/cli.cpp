#include "awr/cli.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "awr/config.hpp"

namespace awr::cli {

using Json = nlohmann::ordered_json;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

using Cell = std::variant<double, std::string, std::size_t>;

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw ConfigError("cannot write '" + path.string() + "'");
    write_line(header);
  }

  void row(const std::vector<Cell>& cells) {
    std::vector<std::string> text;
    for (const Cell& c : cells) {
      if (const double* d = std::get_if<double>(&c)) {
        text.push_back(format_double(*d));
      } else if (const std::size_t* n = std::get_if<std::size_t>(&c)) {
        text.push_back(std::to_string(*n));
      } else {
        text.push_back(std::get<std::string>(c));
      }
    }
    write_line(text);
  }

 private:
  void write_line(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << cells[k];
    out_ << '\n';
  }

  std::ofstream out_;
};

// JSON with every float printed as %.17g (non-finite values become null).
void emit(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        out += inner + Json(it.key()).dump() + ": ";
        emit(it.value(), out, indent + 2);
        out += k + 1 < j.size() ? ",\n" : "\n";
      }
      out += pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        out += inner;
        emit(j[k], out, indent + 2);
        out += k + 1 < j.size() ? ",\n" : "\n";
      }
      out += pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

struct Context {
  Config cfg;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  RunManifest manifest;
  Json metrics = Json::object();
  std::ostream& log;

  void check(const std::string& name, bool passed, const std::string& detail) {
    manifest.checks.push_back({name, passed, detail});
    log << (passed ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
  }

  std::filesystem::path output(const std::string& name) {
    manifest.outputs.push_back(name);
    return out_dir / name;
  }
};

std::string fmt(double v) { return format_double(v); }

// Scenario with its blow-up estimate attached, plus the estimate itself.
std::pair<Scenario, double> scenario_with_horizon(const Context& ctx) {
  Scenario s = build_scenario(ctx.cfg);
  const auto feet = linspace(s.window().lo, s.window().hi, s.numerics().grid_n);
  const double tb = global_blowup_time(s, feet).T_b;
  if (std::isfinite(tb)) s = s.with_blowup_estimate(tb);
  return {s, tb};
}

void run_solve(Context& ctx) {
  auto [s, tb] = scenario_with_horizon(ctx);
  const double t_star = ctx.cfg.get_double("experiments.t_star", 0.5);
  const double T = std::isfinite(tb) ? std::min(t_star, 0.9 * tb) : t_star;
  const std::size_t nx = s.numerics().grid_n;
  const std::vector<double> xs = linspace(s.window().lo, s.window().hi, nx);
  const std::vector<double> ts = linspace(0.0, T, nx / 4 + 1);
  const PressurelessSolution bar(s.data(), s.window(), s.numerics().delta_blow, s.numerics().n_cond);
  const double nan = std::nan("");

  bool hyperbolic = true;
  {
    CsvWriter csv(ctx.output("fields.csv"),
                  {"x", "t", "rho", "u", "u_x", "lambda1", "lambda2", "bar_rho", "bar_u", "bar_u_x"});
    for (double t : ts) {
      const std::vector<EulerSample> row = sample_eulerian_row(s, xs, t);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const EulerSample& e = row[i];
        if (!(e.lambda1 < e.lambda2)) hyperbolic = false;
        double br = nan, bu = nan, bux = nan;
        try {
          const BarEuler b = bar.eulerian_bar(xs[i], t);
          br = b.rho;
          bu = b.u;
          bux = b.u_x;
        } catch (const BlowupReached&) {
        }
        csv.row({xs[i], t, e.rho, e.u, e.u_x, e.lambda1, e.lambda2, br, bu, bux});
      }
    }
  }
  ctx.check("solve.strict_hyperbolicity", hyperbolic, "lambda1 < lambda2 at every fields.csv sample");

  const std::vector<double> tc = linspace(0.0, T, 101);
  const double seed_x = ctx.cfg.get_double("euler_map.seed_x", 0.0);
  const double seed_t = std::min(ctx.cfg.get_double("euler_map.seed_t", T), T);
  const std::vector<double> x1 = char1_curve(s, seed_x, seed_t, tc);
  std::vector<double> x2, xb;
  double jump_u = 0.0;
  if (s.has_jump()) {
    const DiscontinuityCurve dc = discontinuity_curve(s, tc);
    x2 = dc.x;
    for (std::size_t k = 0; k < tc.size(); ++k) jump_u = std::max(jump_u, std::abs(dc.u_left[k] - dc.u_right[k]));
    xb = bar.discontinuity_bar(s.x_jump(), tc);
  } else {
    const double mid = 0.5 * (s.window().lo + s.window().hi);
    for (double t : tc) x2.push_back(flow_x(s, mid, t));
    xb = bar.discontinuity_bar(mid, tc);
  }
  {
    CsvWriter csv(ctx.output("curves.csv"), {"t", "x2_eps", "x_bar", "x1_from_seed"});
    for (std::size_t k = 0; k < tc.size(); ++k) csv.row({tc[k], x2[k], xb[k], x1[k]});
  }
  ctx.metrics["solve"] = {{"T_b_eps", tb}, {"t_end", T}, {"max_velocity_jump", jump_u}};
  ctx.check("solve.velocity_continuity", jump_u <= 1e-6, "max |[u]| across x2 = " + fmt(jump_u));
}

void run_bounds(Context& ctx) {
  auto [s, tb] = scenario_with_horizon(ctx);
  const auto lattice = ctx.cfg.get_doubles("fields.bounds_lattice", {101, 51});
  if (lattice.size() != 2 || lattice[0] < 2 || lattice[1] < 2) throw ConfigError("bounds_lattice must be ny,ntau");
  double tau_max = ctx.cfg.get_double("fields.bounds_tau_max", 0.9);
  if (std::isfinite(tb)) tau_max = std::min(tau_max, 0.9 * tb);
  const auto ys = linspace(s.window().lo, s.window().hi, static_cast<std::size_t>(lattice[0]));
  const auto taus = linspace(0.0, tau_max, static_cast<std::size_t>(lattice[1]));
  const BoundReport rep = verify_density_bounds(s, ys, taus);
  {
    CsvWriter csv(ctx.output("bounds.csv"), {"y", "tau", "region", "g", "bound", "ratio"});
    for (const BoundRow& r : rep.rows) csv.row({r.y, r.tau, r.region, r.g, r.bound, r.ratio});
  }
  ctx.metrics["bounds"] = {{"worst_ratio", rep.worst_ratio},
                           {"A1", rep.constants.A1},
                           {"A2", rep.constants.A2},
                           {"B", rep.constants.B},
                           {"jump_bound", rep.jump_bound},
                           {"tau_max", tau_max},
                           {"note", rep.note}};
  ctx.check("bounds.density_lower_bound", rep.passed,
            "worst ratio " + fmt(rep.worst_ratio) + ", violations " + std::to_string(rep.violations.size()));
}

void run_blowup(Context& ctx) {
  const SweepConfig sw = build_sweep(ctx.cfg);
  const double tol = ctx.cfg.get_double("experiments.tol_tb", 1e-3);
  const BlowupStudy st = blowup_convergence(sw, tol);
  {
    CsvWriter csv(ctx.output("blowup.csv"), {"epsilon", "T_b_eps", "T_b_bar", "gap"});
    for (const BlowupRow& r : st.rows) csv.row({r.epsilon, r.T_b_eps, r.T_b_bar, r.gap});
  }
  Json rows = Json::array();
  for (const BlowupRow& r : st.rows) rows.push_back({{"epsilon", r.epsilon}, {"T_b_eps", r.T_b_eps}, {"argmin", r.argmin}});
  ctx.metrics["blowup"] = {{"monotone_I", st.conditions.monotone_I},
                           {"integral_diverges", st.conditions.integral_diverges},
                           {"rows", rows}};
  ctx.check("blowup.liminf", st.liminf_holds, "T_b <= T_b^eps + " + fmt(tol) + " for every eps");
  if (st.conditions_hold) {
    ctx.check("blowup.limit", st.limit_holds,
              "gaps nonincreasing, last gap " + fmt(st.rows.empty() ? 0.0 : st.rows.back().gap));
  }
}

void run_converge(Context& ctx) {
  const SweepConfig sw = build_sweep(ctx.cfg);
  const ConvergenceStudy st = run_convergence(sw);
  {
    CsvWriter csv(ctx.output("convergence.csv"),
                  {"epsilon", "sup_err_u", "sup_err_lambda1", "sup_err_lambda2", "sup_err_x2", "triangle_width"});
    for (const EpsilonRow& r : st.rows) {
      if (r.skipped) continue;
      csv.row({r.epsilon, r.sup_err_u, r.sup_err_lambda1, r.sup_err_lambda2, r.sup_err_x2, r.triangle_width});
    }
  }
  Json rows = Json::array();
  for (const EpsilonRow& r : st.rows) {
    rows.push_back({{"epsilon", r.epsilon},
                    {"skipped", r.skipped},
                    {"skip_reason", r.skip_reason},
                    {"T_b_eps", r.T_b_eps},
                    {"sup_err_rho_offcurve", r.sup_err_rho_offcurve}});
  }
  Json fits = Json::object();
  for (const RateReport& r : st.reports) {
    if (r.fit) {
      fits[r.quantity] = {{"slope", r.fit->slope}, {"intercept", r.fit->intercept}, {"r2", r.fit->r2}};
    } else {
      fits[r.quantity] = {{"degenerate", r.note}};
    }
  }
  ctx.metrics["converge"] = {{"rows", rows},
                             {"fits", fits},
                             {"rho_band_half_width", st.rho_band},
                             {"eps_star_index", st.eps_star_index ? Json(*st.eps_star_index) : Json(nullptr)}};
  ctx.check("converge.eps_star", st.eps_star_index.has_value(), "an eps index exists past which T* < T_b^eps");
  for (const RateReport& r : st.reports) {
    if (r.quantity == "triangle_width") continue;
    const bool ok = r.fit && r.fit->slope >= 1.7 && r.fit->slope <= 2.3 && r.fit->r2 >= 0.98;
    ctx.check("converge.rate_" + r.quantity, ok,
              r.fit ? "slope " + fmt(r.fit->slope) + ", R^2 " + fmt(r.fit->r2) : r.note);
  }
}

void run_weak(Context& ctx) {
  auto [s, tb] = scenario_with_horizon(ctx);
  double t_end = ctx.cfg.get_double("experiments.t_star", 0.5);
  if (std::isfinite(tb)) t_end = std::min(t_end, 0.9 * tb);
  const std::size_t n_test = ctx.cfg.get_size("experiments.weak_tests", 8);
  std::vector<std::size_t> levels;
  for (double v : ctx.cfg.get_doubles("experiments.weak_grid", {2, 4, 8})) {
    if (v < 1 || v != std::floor(v)) throw ConfigError("weak_grid entries must be positive integers");
    levels.push_back(static_cast<std::size_t>(v));
  }
  const std::vector<WeakRow> rows = weak_refinement(s, n_test, ctx.seed, levels, t_end);
  {
    CsvWriter csv(ctx.output("weak.csv"), {"grid_n", "mass_residual", "momentum_residual"});
    for (const WeakRow& r : rows) csv.row({r.grid_n, r.mass, r.momentum});
  }
  bool ok = rows.size() >= 2;
  double worst_mass = kInfinity, worst_mom = kInfinity;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    worst_mass = std::min(worst_mass, rows[k - 1].mass / rows[k].mass);
    worst_mom = std::min(worst_mom, rows[k - 1].momentum / rows[k].momentum);
  }
  ok = ok && worst_mass >= 3.0 && worst_mom >= 3.0;
  const std::string detail = ok || rows.size() >= 2 ? "smallest refinement ratios: mass " + fmt(worst_mass) +
                                                          ", momentum " + fmt(worst_mom)
                                                    : "need at least two grid levels";
  ctx.check("weak.refinement", ok, detail);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

void write_manifest(Context& ctx) {
  RunManifest& m = ctx.manifest;
  m.all_passed = std::all_of(m.checks.begin(), m.checks.end(), [](const CheckResult& c) { return c.passed; });
  Json j = Json::object();
  j["config_digest"] = m.config_digest;
  j["experiment"] = m.experiment;
  j["seed"] = m.seed;
  Json cfg = Json::object();
  for (const auto& [k, v] : ctx.cfg.entries()) cfg[k] = v;
  j["config"] = cfg;
  j["outputs"] = m.outputs;
  Json checks = Json::array();
  for (const auto& c : m.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = checks;
  j["metrics"] = ctx.metrics;
  j["all_passed"] = m.all_passed;
  std::string text;
  emit(j, text, 0);
  text += "\n";
  std::ofstream out(ctx.out_dir / "manifest.json", std::ios::binary);
  if (!out) throw ConfigError("cannot write manifest.json");
  out << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aw-Rascle characteristics solver and vanishing-pressure experiments", "awr"};
  std::string config_path, experiment = "all", out_dir = "out";
  std::uint64_t seed = 0;
  int grid_n = 0;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "scenario/experiment config file")->required();
  app.add_option("--experiment", experiment, "solve, bounds, blowup, converge, weak or all")
      ->check(CLI::IsMember({"solve", "bounds", "blowup", "converge", "weak", "all"}));
  app.add_option("--out-dir", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "seed for every random draw");
  auto* grid_opt = app.add_option("--grid-n", grid_n, "lattice / foot-grid size")->check(CLI::PositiveNumber);
  app.add_option("--override", overrides, "key=value (repeatable)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ConfigError: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    Config cfg = Config::load_file(config_path);
    for (const auto& o : overrides) cfg.apply_override(o);
    if (*seed_opt) cfg.set("seed", std::to_string(seed));
    if (*grid_opt) cfg.set("characteristics.grid_n", std::to_string(grid_n));

    Context ctx{cfg, out_dir, cfg.get_u64("seed", 0), {}, Json::object(), out};
    std::filesystem::create_directories(ctx.out_dir);
    ctx.manifest.config_digest = hex64(cfg.digest());
    ctx.manifest.experiment = experiment;
    ctx.manifest.seed = ctx.seed;

    const bool all = experiment == "all";
    if (all || experiment == "solve") run_solve(ctx);
    if (all || experiment == "bounds") run_bounds(ctx);
    if (all || experiment == "blowup") run_blowup(ctx);
    if (all || experiment == "converge") run_converge(ctx);
    if (all || experiment == "weak") run_weak(ctx);
    write_manifest(ctx);
    out << (ctx.manifest.all_passed ? "all checks passed" : "some checks failed") << "\n";
    return ctx.manifest.all_passed ? kExitOk : kExitCheckFailed;
  } catch (const ConfigError& e) {
    err << "ConfigError: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ScenarioRejected& e) {
    err << "ScenarioRejected: " << e.what() << " [jump " << format_double(e.jump()) << ", margin "
        << format_double(e.margin()) << "]\n";
    return kExitScenarioRejected;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

}  // namespace awr::cli
