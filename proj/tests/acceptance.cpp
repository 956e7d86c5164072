// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "awr/cli.hpp"
#include "awr/config.hpp"

using namespace awr;

namespace {

const std::string kSource = AWR_SOURCE_DIR;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Config default_config() { return Config::load_file(kSource + "/configs/default.cfg"); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Scenario constant_state(PressureModel model, double c, double rho, double eps) {
  return Scenario(std::move(model), {PiecewiseLipschitzFn::constant(c), PiecewiseLipschitzFn::constant(rho)}, eps,
                  {-5.0, 5.0});
}

Outcome exact_blowup() {
  const auto t0 = std::chrono::steady_clock::now();
  SweepConfig sw = build_sweep(default_config());
  sw.epsilons = {0.2, 0.1, 0.05};
  const BlowupStudy st = blowup_convergence(sw, 1e-3);
  bool ok = !st.rows.empty();
  double worst = 0.0;
  for (const auto& r : st.rows) {
    worst = std::max({worst, std::abs(r.T_b_eps - 1.0), r.gap});
    ok = ok && std::abs(r.T_b_eps - 1.0) <= 1e-3 && r.gap <= 1e-3;
  }
  const double tbar = st.rows.empty() ? kInfinity : st.rows.front().T_b_bar;
  ok = ok && std::abs(tbar - 1.0) <= 1e-9;
  const double secs = seconds_since(t0);
  ok = ok && secs <= 60.0;
  return {ok, "max |T_b^eps - 1| or gap " + num(worst) + ", T_b " + num(tbar) + ", " + num(secs) + " s"};
}

Outcome velocity_rates() {
  const auto t0 = std::chrono::steady_clock::now();
  SweepConfig sw = build_sweep(default_config());
  sw.epsilons = {0.2, 0.1, 0.05, 0.025, 0.0125};
  sw.t_star = 0.5;
  sw.lattice_nx = 201;
  sw.lattice_nt = 101;
  const ConvergenceStudy st = run_convergence(sw);
  bool ok = true;
  std::string detail;
  for (std::size_t q = 0; q < 4; ++q) {
    const RateReport& r = st.reports.at(q);
    const bool good = r.fit && r.fit->slope >= 1.7 && r.fit->slope <= 2.3 && r.fit->r2 >= 0.98;
    ok = ok && good;
    detail += r.quantity + " " + (r.fit ? num(r.fit->slope) + " (R2 " + num(r.fit->r2) + ")" : "no fit") + ", ";
  }
  for (const auto& row : st.rows) ok = ok && !row.skipped;
  const double secs = seconds_since(t0);
  ok = ok && secs <= 600.0;
  return {ok, "slopes " + detail + num(secs) + " s"};
}

Outcome triangle_identity() {
  bool ok = true;
  double worst = 0.0;
  const auto ts = linspace(0.0, 1.0, 51);
  struct Case {
    PressureModel model;
    double rho;
    double rho_dp;
  };
  const Case cases[] = {{PressureModel::log_law(), 1.0, 1.0}, {PressureModel::gamma_law(2.0), 2.0, 8.0}};
  for (const auto& c : cases) {
    for (double eps : {0.2, 0.1, 0.05}) {
      const Scenario s = constant_state(c.model, 0.0, c.rho, eps);
      const auto x1 = char1_curve(s, 0.0, 1.0, ts);
      const auto x2 = char2_curve(s, 0.0, 1.0, ts);
      double width = 0.0;
      for (std::size_t k = 0; k < ts.size(); ++k) width = std::max(width, std::abs(x1[k] - x2[k]));
      const double expect = eps * eps * c.rho_dp;
      const double rel = std::abs(width - expect) / expect;
      worst = std::max(worst, rel);
      ok = ok && rel <= 1e-8;
    }
  }
  return {ok, "max relative deviation " + num(worst)};
}

Outcome density_bounds() {
  const Config cfg = default_config();
  const auto ys = linspace(-5.0, 5.0, 101);
  // Omega_I is a thin wedge left of the jump; sample it directly.
  const auto ys_wedge = linspace(-0.02, 0.0, 41);
  bool ok = true;
  std::string detail;
  for (const std::string law : {"log", "gamma:2"}) {
    Config c = cfg;
    c.set("pressure.pressure", law);
    Scenario s = build_scenario(c);
    const double tb = global_blowup_time(s, linspace(-5.0, 5.0, 201)).T_b;
    if (std::isfinite(tb)) s = s.with_blowup_estimate(tb);
    const double tau_max = std::min(0.9, 0.9 * tb);
    const auto taus = linspace(0.0, tau_max, 51);
    const auto taus_wedge = linspace(0.0, tau_max, 19);
    const BoundReport full = verify_density_bounds(s, ys, taus);
    const BoundReport wedge = verify_density_bounds(s, ys_wedge, taus_wedge);
    std::size_t omega_i = 0;
    double wedge_worst = kInfinity;
    for (const BoundRow& r : wedge.rows) {
      if (r.region == region_name(Region::OmegaI)) {
        ++omega_i;
        wedge_worst = std::min(wedge_worst, r.ratio);
      }
    }
    const bool good = full.passed && full.worst_ratio >= 1.0 - 1e-8 && wedge.passed && omega_i > 0 &&
                      wedge_worst >= 1.0 - 1e-8;
    ok = ok && good;
    detail += law + " (tau <= " + num(tau_max) + "): lattice " + num(full.worst_ratio) + ", Omega_I " + num(wedge_worst) + " over " +
              std::to_string(omega_i) + " points; ";

    BoundOptions corrupt;
    corrupt.perturb = [tau_max](double y, double tau, double g) {
      return (y < -1.0 && tau > 0.3 * tau_max) ? 0.6 * g : g;
    };
    const BoundReport bad = verify_density_bounds(s, ys, taus, corrupt);
    ok = ok && !bad.passed;
    detail += std::string("corrupted run ") + (bad.passed ? "passed (bad); " : "rejected; ");
  }
  return {ok, detail};
}

Outcome invariants() {
  const Config cfg = default_config();
  Scenario s = build_scenario(cfg);
  const double tb = global_blowup_time(s, linspace(-5.0, 5.0, 201)).T_b;
  s = s.with_blowup_estimate(tb);
  std::mt19937_64 rng(cfg.get_u64("seed", 0));
  std::uniform_real_distribution<double> yd(-4.0, 4.0), td(0.0, 0.9 * tb);
  double worst_mass = 0.0, worst_z = 0.0, worst_u_jump = 0.0;
  bool transport = true, monotone = true, hyperbolic = true;
  std::size_t points = 0;
  for (int batch = 0; batch < 20; ++batch) {
    const double tau = td(rng);
    std::vector<double> ys(50);
    for (double& y : ys) y = yd(rng);
    std::sort(ys.begin(), ys.end());
    const std::vector<Foot> feet = find_feet(s, ys, tau);
    for (std::size_t k = 0; k < ys.size(); ++k) {
      ++points;
      const FieldSample f = sample_from_foot(s, ys[k], tau, feet[k]);
      worst_mass = std::max(worst_mass, std::abs(f.J * f.g - s.g0(ys[k])) / s.g0(ys[k]));
      const double z0 = s.z0()(ys[k]);
      worst_z = std::max(worst_z, std::abs(f.v + s.eps2() * s.model().p(f.g) - z0) / std::max(1.0, std::abs(z0)));
      transport = transport && f.v == s.v0(feet[k].xi);
      if (k > 0 && ys[k] > ys[k - 1]) monotone = monotone && feet[k].xi > feet[k - 1].xi;
      const EulerSample e = euler_from_foot(s, feet[k]);
      hyperbolic = hyperbolic && e.lambda1 < e.lambda2;
    }
    const double tt[] = {tau};
    const DiscontinuityCurve c = discontinuity_curve(s, tt);
    worst_u_jump = std::max(worst_u_jump, std::abs(c.u_left[0] - c.u_right[0]));
  }
  const double tol_inv = s.numerics().tol_inv;
  const bool ok = points >= 1000 && worst_mass <= 1e-10 && worst_z <= 10.0 * tol_inv && transport && monotone &&
                  hyperbolic && worst_u_jump <= 1e-6;
  return {ok, std::to_string(points) + " points: J g/g0 " + num(worst_mass) + ", Z " + num(worst_z) +
                  ", transport " + (transport ? "ok" : "broken") + ", monotone feet " + (monotone ? "ok" : "broken") +
                  ", hyperbolic " + (hyperbolic ? "ok" : "broken") + ", |[u]| " + num(worst_u_jump)};
}

Outcome riccati_vs_differences() {
  Config cfg = default_config();
  cfg.set("characteristics.epsilon", "0.2");
  const Scenario s = build_scenario(cfg);
  const double h = 1e-5;
  double worst = 0.0;
  int checked = 0;
  for (int k = 0; k < 20; ++k) {
    const double tau = 0.3 + 0.3 * k / 19.0;
    const double y = 0.2 + 1.3 * ((k * 7) % 20) / 19.0;
    const double ys[] = {y - h, y, y + h};
    const std::vector<Foot> feet = find_feet(s, ys, tau);
    const FieldSample f = sample_from_foot(s, y, tau, feet[1]);
    const double g = f.g;
    const double closed = alpha_from(s, alpha0(s, feet[1].xi), f.I_integral);
    const double v_y = (s.v0(feet[2].xi) - s.v0(feet[0].xi)) / (2.0 * h);
    const double fd = g * s.model().dp(g) * (g / s.g0(y)) * v_y;
    worst = std::max(worst, std::abs(closed - fd) / std::abs(closed));
    ++checked;
  }
  return {worst <= 1e-3, std::to_string(checked) + " checkpoints, max relative gap " + num(worst)};
}

Outcome level_sets() {
  const Scenario base(PressureModel::log_law(),
                      {PiecewiseLipschitzFn::expression("linear", {-1.0}), PiecewiseLipschitzFn::constant(1.0)}, 0.1,
                      {-5.0, 5.0});
  const double tb = global_blowup_time(base, linspace(-5.0, 5.0, 101)).T_b;
  const Scenario s = base.with_blowup_estimate(tb);
  const auto ys = linspace(-2.0, 2.0, 41);
  const auto taus = linspace(0.0, 2.0, 101);
  const double T = 2.0;
  const double t9 = tau_M(s, 9.0, T, taus, ys);
  bool monotone = true;
  double prev = 0.0;
  for (double M : {1.0, 2.0, 5.0, 9.0, 30.0, 100.0, 1000.0}) {
    const double t = tau_M(s, M, T, taus, ys);
    monotone = monotone && t >= prev;
    prev = t;
  }
  const double t_big = tau_M(s, 1e3, T, taus, ys);
  const double limit = std::min(tb, T);
  const bool ok = std::abs(t9 - 8.0 / 9.0) <= 2e-3 && monotone && std::abs(t_big - limit) <= 2e-3;
  return {ok, "tau_9 " + num(t9) + ", tau_1000 " + num(t_big) + " vs " + num(limit) + ", monotone " +
                  (monotone ? "yes" : "no")};
}

Outcome weak_form() {
  const Config cfg = default_config();
  const std::uint64_t seed = cfg.get_u64("seed", 0);
  const Scenario rest = constant_state(PressureModel::log_law(), 0.2, 1.3, 0.1);
  const WeakResidual r0 = weak_residual(rest, 8, seed, 4, 0.5);
  const Scenario s = build_scenario(cfg);
  const std::size_t levels[] = {2, 4, 8};
  const auto rows = weak_refinement(s, 8, seed, levels, 0.5);
  double worst_ratio = kInfinity;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    worst_ratio = std::min({worst_ratio, rows[k - 1].mass / rows[k].mass, rows[k - 1].momentum / rows[k].momentum});
  }
  const bool ok = r0.mass <= 1e-8 && r0.momentum <= 1e-8 && worst_ratio >= 3.0;
  return {ok, "constant state " + num(std::max(r0.mass, r0.momentum)) + ", smallest halving ratio " +
                  num(worst_ratio)};
}

Outcome liminf_gamma1() {
  const Config cfg = Config::load_file(kSource + "/configs/gamma1.cfg");
  SweepConfig sw = build_sweep(cfg);
  const BlowupStudy st = blowup_convergence(sw, 1e-3);
  std::string detail;
  bool ok = !st.rows.empty() && st.liminf_holds;
  for (const auto& r : st.rows) {
    ok = ok && r.T_b_bar <= r.T_b_eps + 1e-3;
    detail += "eps " + num(r.epsilon) + ": " + num(r.T_b_eps) + "; ";
  }
  return {ok, detail + "T_b " + (st.rows.empty() ? "n/a" : num(st.rows.front().T_b_bar))};
}

Outcome condition_gating() {
  const Interval w{-5.0, 5.0};
  const auto g1 = PressureModel::gamma_law(1.0);
  const auto step = PiecewiseLipschitzFn::step(0.0, 1.0, 2.0);
  const auto a = check_epsilon_condition({PiecewiseLipschitzFn::expression("neg_tanh", {}), step}, g1, 0.1, w);
  const auto b = check_epsilon_condition({PiecewiseLipschitzFn::constant(0.0), step}, g1, 0.1, w);
  const auto c = check_epsilon_condition({PiecewiseLipschitzFn::expression("tanh", {}), step}, g1, 0.1, w);
  bool ok = a.size() == 1 && b.size() == 1 && c.size() == 1;
  ok = ok && a[0].holds && std::abs(a[0].infimum - 0.01) <= 1e-9;
  ok = ok && b[0].holds && std::abs(b[0].margin - 0.01) <= 1e-12;
  ok = ok && !c[0].holds && c[0].margin < 0.0;
  std::ostringstream out, err;
  const int code = cli::run({"--config", kSource + "/configs/gamma_rejected.cfg", "--experiment", "solve",
                             "--out-dir", "acceptance_rejected"},
                            out, err);
  ok = ok && code == cli::kExitScenarioRejected;
  return {ok, "margins " + num(a.empty() ? 0 : a[0].infimum) + ", " + num(b.empty() ? 0 : b[0].margin) + ", " +
                  num(c.empty() ? 0 : c[0].margin) + "; rejected run exit " + std::to_string(code)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"log-law blow-up time", exact_blowup},
      {"O(eps^2) convergence", velocity_rates},
      {"characteristic triangle width", triangle_identity},
      {"density lower bounds", density_bounds},
      {"invariant suite", invariants},
      {"Riccati vs finite differences", riccati_vs_differences},
      {"level-set times", level_sets},
      {"weak-form consistency", weak_form},
      {"T_b <= liminf T_b^eps (gamma = 1)", liminf_gamma1},
      {"eps-condition gating", condition_gating},
  };
  int failed = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " [" << index << "] " << name << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
