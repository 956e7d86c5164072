#include "awr/euler_map.hpp"

#include <algorithm>
#include <cmath>

namespace awr {

double flow_x(const Scenario& s, double y, double tau) { return find_foot(s, y, tau).end.x; }

double flow_x_simpson(const Scenario& s, double y, double tau, std::size_t n_panels) {
  if (n_panels < 2 || n_panels % 2 != 0) throw InvalidInput("flow_x_simpson: need an even panel count");
  if (tau == 0.0) return y;
  std::vector<double> v(n_panels + 1);
  const double h = tau / static_cast<double>(n_panels);
  for (std::size_t k = 0; k <= n_panels; ++k) {
    const double t = k == n_panels ? tau : h * static_cast<double>(k);
    v[k] = s.v0(find_foot(s, y, t).xi);
  }
  return y + simpson(v, h);
}

double invert_x(const Scenario& s, double x, double t, Interval y_bracket) {
  auto f = [&](double y) { return flow_x(s, y, t) - x; };
  return bracketed_root(f, y_bracket.lo, y_bracket.hi, f(y_bracket.lo), f(y_bracket.hi),
                        s.numerics().tol_foot);
}

EulerSample euler_from_foot(const Scenario& s, const Foot& foot) {
  EulerSample e;
  e.foot = foot.xi;
  e.y = foot.end.y;
  e.u = s.v0(foot.xi);
  e.rho = s.density_in_segment(foot.end.y, e.u, foot.end.seg);
  const double rp = e.rho * s.model().dp(e.rho);
  const Side side = s.has_jump() && foot.xi == s.x_jump() ? Side::Left : Side::Auto;
  e.u_x = alpha_from(s, alpha0(s, foot.xi, side), foot.end.I) / rp;
  e.lambda1 = e.u - s.eps2() * rp;
  e.lambda2 = e.u;
  return e;
}

EulerSample sample_eulerian(const Scenario& s, double x, double t) {
  const double target[] = {x};
  return euler_from_foot(s, solve_feet(s, target, t, FootKey::Eulerian).front());
}

std::vector<EulerSample> sample_eulerian_row(const Scenario& s, std::span<const double> xs, double t) {
  const std::vector<Foot> feet = solve_feet(s, xs, t, FootKey::Eulerian);
  std::vector<EulerSample> out;
  out.reserve(feet.size());
  for (const Foot& f : feet) out.push_back(euler_from_foot(s, f));
  return out;
}

DiscontinuityCurve discontinuity_curve(const Scenario& s, std::span<const double> t_grid) {
  const double xj = s.x_jump();
  const double off = 1e-9;
  DiscontinuityCurve c;
  for (double t : t_grid) {
    const double ys[] = {xj - off, xj, xj + off};
    const std::vector<Foot> feet = find_feet(s, ys, t);
    c.t.push_back(t);
    c.x.push_back(feet[1].end.x);
    const FieldSample left = sample_from_foot(s, ys[0], t, feet[0]);
    const FieldSample right = sample_from_foot(s, ys[2], t, feet[2]);
    c.u_left.push_back(left.v);
    c.u_right.push_back(right.v);
    c.rho_left.push_back(left.g);
    c.rho_right.push_back(right.g);
  }
  return c;
}

std::vector<double> char2_curve(const Scenario& s, double x_tilde, double t_tilde,
                                std::span<const double> t_grid) {
  const double particle = sample_eulerian(s, x_tilde, t_tilde).y;
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(flow_x(s, particle, t));
  return out;
}

std::vector<double> char1_curve(const Scenario& s, double x_tilde, double t_tilde,
                                std::span<const double> t_grid) {
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) throw InvalidInput("char1_curve: t_grid must ascend");
  for (double t : t_grid) s.check_horizon(t);
  const double xi = sample_eulerian(s, x_tilde, t_tilde).foot;
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (const TraceState& st : trace_at(s, xi, t_grid)) out.push_back(st.x);
  return out;
}

std::vector<double> char1_curve_eulerian(const Scenario& s, double x_tilde, double t_tilde,
                                         std::span<const double> t_grid, std::size_t steps_per_unit) {
  auto speed = [&](double x, double t) { return sample_eulerian(s, x, t).lambda1; };
  auto integrate = [&](double x, double t0, double t1) {
    const double span = t1 - t0;
    const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(span) * steps_per_unit)));
    const double h = span / static_cast<double>(n);
    double t = t0;
    for (std::size_t k = 0; k < n; ++k) {
      const double k1 = speed(x, t);
      const double k2 = speed(x + 0.5 * h * k1, t + 0.5 * h);
      const double k3 = speed(x + 0.5 * h * k2, t + 0.5 * h);
      const double k4 = speed(x + h * k3, t + h);
      x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = t0 + h * static_cast<double>(k + 1);
    }
    return x;
  };
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(integrate(x_tilde, t_tilde, t));
  return out;
}

}  // namespace awr
