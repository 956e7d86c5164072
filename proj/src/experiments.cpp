#include "awr/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

namespace awr {

FitResult fit_rate(std::span<const double> eps, std::span<const double> errs) {
  if (eps.size() != errs.size() || eps.size() < 3) {
    throw DegenerateFit("fit_rate: need at least three (eps, err) pairs");
  }
  const std::size_t n = eps.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(errs[k] > 0.0) || !(eps[k] > 0.0)) {
      throw DegenerateFit("fit_rate: errors and eps must be positive");
    }
    lx[k] = std::log(eps[k]);
    ly[k] = std::log(errs[k]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
    syy += (ly[k] - my) * (ly[k] - my);
  }
  if (sxx == 0.0) throw DegenerateFit("fit_rate: all eps equal");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

RateReport make_rate_report(std::string quantity, std::vector<double> eps, std::vector<double> errs) {
  RateReport r{std::move(quantity), std::move(eps), std::move(errs), std::nullopt, {}};
  try {
    r.fit = fit_rate(r.epsilons, r.errors);
  } catch (const DegenerateFit& e) {
    r.note = e.what();
  }
  return r;
}

Scenario SweepConfig::scenario(double epsilon) const {
  return Scenario(model, data, epsilon, window, numerics);
}

std::vector<double> SweepConfig::foot_grid() const {
  return linspace(window.lo, window.hi, foot_grid_n);
}

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

ConvergenceStudy run_convergence(const SweepConfig& cfg) {
  ConvergenceStudy study;
  const PressurelessSolution bar(cfg.data, cfg.window, cfg.numerics.delta_blow, cfg.numerics.n_cond);
  study.T_b_bar = bar.blowup_time_bar();
  if (!(cfg.t_star < study.T_b_bar)) {
    std::ostringstream msg;
    msg << "T* = " << cfg.t_star << " is not below the pressureless blow-up time " << study.T_b_bar;
    throw InvalidInput(msg.str());
  }
  const std::vector<double> xs = linspace(cfg.window.lo, cfg.window.hi, cfg.lattice_nx);
  const std::vector<double> ts = linspace(0.0, cfg.t_star, cfg.lattice_nt);
  double max_eps = 0.0;
  for (double e : cfg.epsilons) max_eps = std::max(max_eps, e);
  study.rho_band = max_eps * max_eps;
  auto seeds = cfg.seeds;
  if (seeds.empty()) seeds.push_back({0.0, cfg.t_star});

  const std::vector<double> feet = cfg.foot_grid();
  for (double eps : cfg.epsilons) {
    EpsilonRow row;
    row.epsilon = eps;
    try {
      Scenario s = cfg.scenario(eps);
      const BlowupResult blow = global_blowup_time(s, feet);
      row.T_b_eps = blow.T_b;
      if (!(cfg.t_star < blow.T_b)) {
        row.skipped = true;
        row.skip_reason = "T* not below T_b^eps";
        study.rows.push_back(row);
        continue;
      }
      if (std::isfinite(blow.T_b)) s = s.with_blowup_estimate(blow.T_b);

      std::vector<double> x2(ts.size(), 0.0), xbar(ts.size(), 0.0);
      if (s.has_jump()) {
        x2 = discontinuity_curve(s, ts).x;
        xbar = bar.discontinuity_bar(s.x_jump(), ts);
        row.sup_err_x2 = max_abs_diff(x2, xbar);
      }

      std::vector<double> eu(ts.size()), el1(ts.size()), el2(ts.size()), erho(ts.size());
      for (std::size_t j = 0; j < ts.size(); ++j) {
        const double t = ts[j];
        const std::vector<EulerSample> es = sample_eulerian_row(s, xs, t);
        double mu = 0.0, m1 = 0.0, m2 = 0.0, mr = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          const BarEuler b = bar.eulerian_bar(xs[i], t);
          mu = std::max(mu, std::abs(es[i].u - b.u));
          m1 = std::max(m1, std::abs(es[i].lambda1 - b.u));
          m2 = std::max(m2, std::abs(es[i].lambda2 - b.u));
          const bool near_curve = s.has_jump() && (std::abs(xs[i] - x2[j]) <= study.rho_band ||
                                                   std::abs(xs[i] - xbar[j]) <= study.rho_band);
          if (!near_curve) mr = std::max(mr, std::abs(es[i].rho - b.rho));
        }
        eu[j] = mu;
        el1[j] = m1;
        el2[j] = m2;
        erho[j] = mr;
      }
      row.sup_err_u = *std::max_element(eu.begin(), eu.end());
      row.sup_err_lambda1 = *std::max_element(el1.begin(), el1.end());
      row.sup_err_lambda2 = *std::max_element(el2.begin(), el2.end());
      row.sup_err_rho_offcurve = *std::max_element(erho.begin(), erho.end());

      for (const auto& [xt, tt] : seeds) {
        const std::vector<double> tg = linspace(0.0, tt, cfg.lattice_nt);
        const std::vector<double> c1 = char1_curve(s, xt, tt, tg);
        const std::vector<double> c2 = char2_curve(s, xt, tt, tg);
        row.triangle_width = std::max(row.triangle_width, max_abs_diff(c1, c2));
      }
    } catch (const ScenarioRejected& e) {
      row.skipped = true;
      row.skip_reason = e.what();
    }
    study.rows.push_back(row);
  }

  // First index from which every eps keeps T* below its blow-up time.
  for (std::size_t k = study.rows.size(); k-- > 0;) {
    if (study.rows[k].skipped) break;
    study.eps_star_index = k;
  }

  std::vector<double> eps;
  std::array<std::vector<double>, 5> cols;
  for (const auto& r : study.rows) {
    if (r.skipped) continue;
    eps.push_back(r.epsilon);
    cols[0].push_back(r.sup_err_u);
    cols[1].push_back(r.sup_err_lambda1);
    cols[2].push_back(r.sup_err_lambda2);
    cols[3].push_back(r.sup_err_x2);
    cols[4].push_back(r.triangle_width);
  }
  const std::array<const char*, 5> names{"u", "lambda1", "lambda2", "x2", "triangle_width"};
  for (std::size_t q = 0; q < names.size(); ++q) {
    study.reports.push_back(make_rate_report(names[q], eps, cols[q]));
  }
  return study;
}

RateReport convergence_velocity(const SweepConfig& cfg) { return run_convergence(cfg).reports.at(0); }

std::vector<RateReport> convergence_curves(const SweepConfig& cfg) {
  ConvergenceStudy st = run_convergence(cfg);
  return {st.reports.at(3), st.reports.at(1), st.reports.at(2), st.reports.at(4)};
}

BlowupStudy blowup_convergence(const SweepConfig& cfg, double tol_tb) {
  BlowupStudy study;
  study.tol = tol_tb;
  const std::vector<double> cutoffs{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  study.conditions = check_blowup_conditions(cfg.model, 0.5, cutoffs);
  study.conditions_hold = study.conditions.monotone_I && study.conditions.integral_diverges;

  const PressurelessSolution bar(cfg.data, cfg.window, cfg.numerics.delta_blow, cfg.numerics.n_cond);
  const double tb_bar = bar.blowup_time_bar();
  const std::vector<double> feet = cfg.foot_grid();
  for (double eps : cfg.epsilons) {
    const Scenario s = cfg.scenario(eps);
    const BlowupResult r = global_blowup_time(s, feet);
    const double gap = std::isfinite(r.T_b) || std::isfinite(tb_bar) ? std::abs(r.T_b - tb_bar) : 0.0;
    study.rows.push_back({eps, r.T_b, tb_bar, std::isnan(gap) ? 0.0 : gap, r.argmin});
  }

  study.liminf_holds = !study.rows.empty();
  for (const auto& row : study.rows) {
    if (!(tb_bar <= row.T_b_eps + tol_tb)) study.liminf_holds = false;
  }
  if (study.conditions_hold && !study.rows.empty()) {
    study.limit_holds = study.rows.back().gap <= tol_tb;
    // Gaps may not grow as eps shrinks (1e-6 allowance for quadrature noise).
    for (std::size_t k = 1; k < study.rows.size(); ++k) {
      if (study.rows[k].gap > study.rows[k - 1].gap + 1e-6) study.limit_holds = false;
    }
  }
  study.passed = study.liminf_holds && (!study.conditions_hold || study.limit_holds);
  return study;
}

std::vector<TestFunction> sample_test_functions(Interval window, double t_end, double x_center,
                                                std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TestFunction> out;
  for (std::size_t k = 0; k < n; ++k) {
    TestFunction f;
    f.rx = std::min(0.5 + unit(rng), 0.25 * window.width());
    if (k % 2 == 0) {
      f.xc = x_center + (unit(rng) - 0.5) * f.rx;
    } else {
      f.xc = window.lo + f.rx + unit(rng) * (window.width() - 2.0 * f.rx);
    }
    f.rt = t_end * (0.2 + 0.2 * unit(rng));
    f.tc = -0.5 * f.rt + unit(rng) * (t_end - 0.5 * f.rt);
    f.tc = std::min(f.tc, t_end - f.rt);
    out.push_back(f);
  }
  return out;
}

namespace {

struct Rule {
  std::array<double, 5> x;  // nodes on [-1, 1]
  std::array<double, 5> w;
};

const Rule& gauss5() {
  static const Rule rule = [] {
    using G = boost::math::quadrature::gauss<double, 5>;
    Rule r{};
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    // Boost stores the nonnegative half: a[0] = 0, then positive nodes.
    r.x = {-a[2], -a[1], a[0], a[1], a[2]};
    r.w = {w[2], w[1], w[0], w[1], w[2]};
    return r;
  }();
  return rule;
}

// Panel nodes/weights of composite 5-point Gauss-Legendre on [a, b].
void composite_nodes(double a, double b, std::size_t panels, std::vector<double>& x,
                     std::vector<double>& w) {
  if (!(b > a)) return;
  const Rule& r = gauss5();
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    for (std::size_t k = 0; k < 5; ++k) {
      x.push_back(lo + 0.5 * h * (r.x[k] + 1.0));
      w.push_back(0.5 * h * r.w[k]);
    }
  }
}

double psi(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return q * q * q * q;
}

double dpsi(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return -8.0 * s * q * q * q;
}

}  // namespace

WeakResidual weak_residual(const Scenario& s, std::span<const TestFunction> tests, std::size_t panels) {
  if (panels == 0) throw InvalidInput("weak_residual: panels must be positive");
  WeakResidual worst;
  const double e2 = s.eps2();
  const PressureModel& model = s.model();
  for (const TestFunction& f : tests) {
    const double t0 = std::max(0.0, f.tc - f.rt), t1 = f.tc + f.rt;
    const double xa = f.xc - f.rx, xb = f.xc + f.rx;
    std::vector<double> tn, tw;
    composite_nodes(t0, t1, panels, tn, tw);

    double mass = 0.0, mom = 0.0;
    for (std::size_t j = 0; j < tn.size(); ++j) {
      const double t = tn[j];
      std::vector<double> xn, xw;
      double cut = kInfinity;
      if (s.has_jump()) {
        const double ts[] = {t};
        cut = discontinuity_curve(s, ts).x.front();
      }
      if (cut > xa && cut < xb) {
        composite_nodes(xa, cut, panels, xn, xw);
        composite_nodes(cut, xb, panels, xn, xw);
      } else {
        composite_nodes(xa, xb, panels, xn, xw);
      }
      const std::vector<EulerSample> es = sample_eulerian_row(s, xn, t);
      const double st = (t - f.tc) / f.rt;
      const double pt = psi(st), dpt = dpsi(st) / f.rt;
      for (std::size_t i = 0; i < xn.size(); ++i) {
        const double sx = (xn[i] - f.xc) / f.rx;
        const double phi_t = psi(sx) * dpt;
        const double phi_x = dpsi(sx) / f.rx * pt;
        const EulerSample& e = es[i];
        const double m = e.rho * (e.u + e2 * model.p(e.rho));
        const double wgt = tw[j] * xw[i];
        mass += wgt * (e.rho * phi_t + e.rho * e.u * phi_x);
        mom += wgt * (m * phi_t + m * e.u * phi_x);
      }
    }
    if (t0 == 0.0) {
      // Initial-data term, split at the density jump.
      std::vector<double> xn, xw;
      const double cut = s.has_jump() ? s.x_jump() : kInfinity;
      if (cut > xa && cut < xb) {
        composite_nodes(xa, cut, panels, xn, xw);
        composite_nodes(cut, xb, panels, xn, xw);
      } else {
        composite_nodes(xa, xb, panels, xn, xw);
      }
      const double p0 = psi((0.0 - f.tc) / f.rt);
      for (std::size_t i = 0; i < xn.size(); ++i) {
        const double rho = s.g0(xn[i]);
        const double u = s.v0(xn[i]);
        const double phi = psi((xn[i] - f.xc) / f.rx) * p0;
        mass += xw[i] * rho * phi;
        mom += xw[i] * rho * (u + e2 * model.p(rho)) * phi;
      }
    }
    worst.mass = std::max(worst.mass, std::abs(mass));
    worst.momentum = std::max(worst.momentum, std::abs(mom));
  }
  return worst;
}

WeakResidual weak_residual(const Scenario& s, std::size_t n_test, std::uint64_t rng_seed,
                           std::size_t panels, double t_end) {
  const double xc = s.has_jump() ? s.x_jump() : 0.5 * (s.window().lo + s.window().hi);
  const auto tests = sample_test_functions(s.window(), t_end, xc, n_test, rng_seed);
  return weak_residual(s, tests, panels);
}

std::vector<WeakRow> weak_refinement(const Scenario& s, std::size_t n_test, std::uint64_t rng_seed,
                                     std::span<const std::size_t> levels, double t_end) {
  std::vector<WeakRow> rows;
  for (std::size_t n : levels) {
    const WeakResidual r = weak_residual(s, n_test, rng_seed, n, t_end);
    rows.push_back({n, r.mass, r.momentum});
  }
  return rows;
}

}  // namespace awr
