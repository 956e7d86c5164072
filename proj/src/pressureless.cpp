#include "awr/pressureless.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/minima.hpp>

namespace awr {

PressurelessSolution::PressurelessSolution(InitialData data, Interval window, double delta_blow,
                                           std::size_t n_grid)
    : data_(std::move(data)), window_(window), delta_blow_(delta_blow), h_(1e-6 * window.width()) {
  data_.validate(window_, n_grid);
  const std::vector<double> grid = linspace(window_.lo, window_.hi, n_grid);
  std::size_t best = 0;
  std::vector<double> slopes(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    slopes[k] = slope(grid[k]);
    if (slopes[k] < slopes[best]) best = k;
  }
  min_slope_ = slopes[best];
  argmin_slope_ = grid[best];
  // Golden-section/parabolic refinement between the neighbouring grid nodes.
  const double lo = grid[best > 0 ? best - 1 : 0];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  if (hi > lo) {
    const auto [x, f] = boost::math::tools::brent_find_minima([this](double y) { return slope(y); }, lo, hi, 52);
    if (f < min_slope_) {
      min_slope_ = f;
      argmin_slope_ = x;
    }
  }
  sup_u0_ = sup_abs(data_.u0, window_, n_grid);
}

double PressurelessSolution::slope(double y) const { return data_.u0.segment_slope(0, y, h_); }

BarFields PressurelessSolution::fields_bar(double y, double t, Side side) const {
  const double du = slope(y);
  const double J = 1.0 + du * t;
  if (J <= delta_blow_) {
    std::ostringstream msg;
    msg << "pressureless Jacobian " << J << " at y = " << y << ", t = " << t;
    throw BlowupReached(msg.str());
  }
  return {data_.g0(y, side) / J, data_.u0.eval_segment(0, y), J, du / J};
}

BarEuler PressurelessSolution::eulerian_bar(double x, double t) const {
  auto f = [&](double y) { return y + data_.u0.eval_segment(0, y) * t - x; };
  double y;
  if (t == 0.0) {
    y = x;
  } else {
    double d = std::max(1e-6, sup_u0_ * t);
    double lo = x - d, hi = x + d;
    for (int k = 0; f(lo) > 0.0 || f(hi) < 0.0; ++k) {
      if (k > 80) throw BracketFailure("eulerian_bar: cannot bracket the label");
      d *= 2.0;
      lo = x - d;
      hi = x + d;
    }
    y = bracketed_root(f, lo, hi, f(lo), f(hi), 1e-14 * std::max(1.0, std::abs(x)));
  }
  const BarFields b = fields_bar(y, t);
  return {b.g, b.v, b.u_x, y};
}

double PressurelessSolution::blowup_time_bar() const {
  return min_slope_ < 0.0 ? -1.0 / min_slope_ : kInfinity;
}

std::vector<double> PressurelessSolution::discontinuity_bar(double x0, std::span<const double> t_grid) const {
  const double T = blowup_time_bar();
  const double u = data_.u0.eval_segment(0, x0);
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    if (t >= T) throw BlowupReached("discontinuity_bar: time at or past the pressureless blow-up");
    out.push_back(x0 + u * t);
  }
  return out;
}

double PressurelessSolution::tau_M_bar(double M, double T) const {
  if (!(M > 0.0)) throw InvalidInput("tau_M_bar: M must be positive");
  const double a = -min_slope_;
  if (a <= 0.0) return T;
  return std::min(T, std::max(0.0, 1.0 / a - 1.0 / M));
}

}  // namespace awr
