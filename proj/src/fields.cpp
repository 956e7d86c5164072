#include "awr/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace awr {

std::string region_name(Region r) {
  switch (r) {
    case Region::OmegaPlus:
      return "Omega_plus";
    case Region::OmegaI:
      return "Omega_I";
    case Region::OmegaII:
      return "Omega_II";
    case Region::JumpLine:
      return "JumpLine";
  }
  return "?";
}

namespace {

Region classify_with_boundary(const Scenario& s, double y, double boundary) {
  if (!s.has_jump()) return Region::OmegaPlus;
  const double xj = s.x_jump();
  if (y > xj) return Region::OmegaPlus;
  if (y == xj) return Region::JumpLine;
  return y >= boundary ? Region::OmegaI : Region::OmegaII;
}

// Side the foot's characteristic started on; a foot on the jump starts left.
Side foot_side(const Scenario& s, const Foot& foot) {
  if (s.has_jump() && foot.xi == s.x_jump()) return Side::Left;
  return Side::Auto;
}

}  // namespace

FieldSample sample_from_foot(const Scenario& s, double y, double tau, const Foot& foot, Side side) {
  FieldSample out;
  out.foot = foot.xi;
  out.I_integral = foot.end.I;
  out.v = s.v0(foot.xi);
  const std::size_t seg = s.segment_of(y, side);
  out.g = s.density_in_segment(y, out.v, seg);
  out.Z = s.z0_in_segment(y, seg);
  out.J = s.g0_in_segment(y, seg) / out.g;
  const double a = alpha_from(s, alpha0(s, foot.xi, foot_side(s, foot)), foot.end.I);
  out.grad = a / (out.g * s.model().dp(out.g));
  out.region = Region::OmegaPlus;
  if (s.has_jump()) {
    if (y == s.x_jump()) {
      out.region = Region::JumpLine;
      out.g_left = s.density_in_segment(y, out.v, s.segment_of(y, Side::Left));
      out.g_right = s.density_in_segment(y, out.v, s.segment_of(y, Side::Right));
    } else if (y < s.x_jump()) {
      out.region = foot.xi > s.x_jump() ? Region::OmegaI : Region::OmegaII;
    }
  }
  (void)tau;
  return out;
}

FieldSample sample_lagrangian(const Scenario& s, double y, double tau, Side side) {
  return sample_from_foot(s, y, tau, find_foot(s, y, tau), side);
}

std::vector<Foot> find_feet(const Scenario& s, std::span<const double> ys, double tau) {
  return solve_feet(s, ys, tau, FootKey::Lagrangian);
}

double boundary_characteristic(const Scenario& s, double tau) {
  const double xj = s.x_jump();
  TraceState st = start_state(s, xj, Side::Left);
  advance(s, s.v0(xj), st, tau);
  return st.y;
}

Region classify_region(const Scenario& s, double y, double tau) {
  if (!s.has_jump() || y >= s.x_jump()) return classify_with_boundary(s, y, 0.0);
  return classify_with_boundary(s, y, boundary_characteristic(s, tau));
}

BoundReport verify_density_bounds(const Scenario& s, std::span<const double> ys,
                                  std::span<const double> taus, const BoundOptions& options) {
  if (!std::is_sorted(taus.begin(), taus.end())) throw InvalidInput("bound lattice times must ascend");
  BoundReport rep;
  rep.n_y = ys.size();
  rep.n_tau = taus.size();
  rep.tau_max = taus.empty() ? 0.0 : taus.back();
  rep.constants = bound_constants(s.data(), s.model(), s.epsilon(), s.window(), s.numerics().n_cond);
  const BoundConstants& c = rep.constants;
  const PressureModel& model = s.model();

  // Bound on the jump line (both sides).
  double jump_bound = 0.0;
  bool increasing_jump = false;
  if (s.has_jump()) {
    const auto [gl, gr] = s.data().g0.one_sided(0);
    increasing_jump = gl < gr;
    const auto verdicts = check_epsilon_condition(s.data(), model, s.epsilon(), s.window(), s.numerics().n_cond);
    if (model.limit_class() == LimitClass::FiniteZero && increasing_jump && !verdicts.empty()) {
      jump_bound = model.inverse(verdicts.front().infimum / s.eps2());
      rep.note = "jump line: p^{-1}(eps-condition infimum / eps^2)";
    } else {
      const double q = model.p(c.A1) - 2.0 * sup_abs(s.data().u0, s.window(), s.numerics().n_cond) / s.eps2();
      jump_bound = q > model.range_infimum() ? model.inverse(q) : 0.0;
      rep.note = "jump line: p^{-1}(p(min g0) - 2 sup|u0| / eps^2)";
    }
  }
  rep.jump_bound = jump_bound;
  rep.note += "; infima over the real line truncated to the window with constant extension";

  auto perturb = [&](double y, double tau, double g) {
    return options.perturb ? options.perturb(y, tau, g) : g;
  };
  auto add_row = [&](double y, double tau, const std::string& region, double g, double bound) {
    const double ratio = bound > 0.0 ? g / bound : kInfinity;
    BoundRow row{y, tau, region, g, bound, ratio};
    rep.worst_ratio = std::min(rep.worst_ratio, ratio);
    if (!(ratio >= 1.0 - 1e-8)) rep.violations.push_back(row);
    rep.rows.push_back(std::move(row));
  };

  double running_min_left = s.has_jump() ? s.data().g0.one_sided(0).first : kInfinity;
  for (double tau : taus) {
    const std::vector<Foot> feet = find_feet(s, ys, tau);
    const double general = c.A1 / (1.0 + c.A2 * c.B * tau);
    if (s.has_jump()) {
      // Boundary trace g(x_jump-, tau) feeds the Omega_I constant.
      const double xj = s.x_jump();
      const Foot f0 = find_foot(s, xj, tau);
      const double g_left = s.density_in_segment(xj, s.v0(f0.xi), s.segment_of(xj, Side::Left));
      running_min_left = std::min(running_min_left, perturb(xj, tau, g_left));
    }
    const double a1p = running_min_left;
    const double omega_i = s.has_jump() ? a1p / (1.0 + a1p * c.B * tau) : general;

    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double y = ys[i];
      const FieldSample fs = sample_from_foot(s, y, tau, feet[i]);
      switch (fs.region) {
        case Region::OmegaPlus:
        case Region::OmegaII:
          add_row(y, tau, region_name(fs.region), perturb(y, tau, fs.g), general);
          break;
        case Region::OmegaI:
          add_row(y, tau, region_name(fs.region), perturb(y, tau, fs.g), omega_i);
          break;
        case Region::JumpLine:
          add_row(y, tau, "JumpLine-", perturb(y, tau, fs.g_left), jump_bound);
          add_row(y, tau, "JumpLine+", perturb(y, tau, fs.g_right), jump_bound);
          break;
      }
    }
  }
  rep.passed = rep.violations.empty();
  return rep;
}

double level_inf(const Scenario& s, double tau, std::span<const double> y_grid) {
  const std::vector<Foot> feet = find_feet(s, y_grid, tau);
  double m = kInfinity;
  for (std::size_t i = 0; i < y_grid.size(); ++i) {
    m = std::min(m, sample_from_foot(s, y_grid[i], tau, feet[i]).grad);
  }
  return m;
}

double tau_M(const Scenario& s, double M, double T, std::span<const double> tau_grid,
             std::span<const double> y_grid) {
  if (!(M > 0.0)) throw InvalidInput("tau_M: M must be positive");
  auto passes = [&](double tau) {
    try {
      return level_inf(s, tau, y_grid) >= -M;
    } catch (const HorizonExceeded&) {
      return false;
    } catch (const BlowupReached&) {
      return false;
    } catch (const BracketFailure&) {
      return false;
    }
  };
  std::vector<double> grid;
  for (double t : tau_grid) {
    if (t <= T) grid.push_back(t);
  }
  std::sort(grid.begin(), grid.end());
  if (grid.empty() || grid.back() < T) grid.push_back(T);

  double last_pass = -1.0;
  for (double t : grid) {
    if (!passes(t)) {
      if (last_pass < 0.0) return 0.0;
      double lo = last_pass, hi = t;
      while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (passes(mid) ? lo : hi) = mid;
      }
      return lo;
    }
    last_pass = t;
  }
  return T;
}

}  // namespace awr
