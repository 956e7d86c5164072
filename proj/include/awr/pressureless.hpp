#pragma once

#include <span>
#include <vector>

#include "awr/initial_data.hpp"

namespace awr {

struct BarFields {
  double g = 0.0;
  double v = 0.0;
  double J = 1.0;
  double u_x = 0.0;
};

struct BarEuler {
  double rho = 0.0;
  double u = 0.0;
  double u_x = 0.0;
  double y = 0.0;
};

/// Closed-form pressureless Euler solution for the same initial data.
class PressurelessSolution {
 public:
  PressurelessSolution(InitialData data, Interval window, double delta_blow = 1e-6,
                       std::size_t n_grid = 4096);

  /// Lagrangian fields at label y (one-sided density via `side` at the jump).
  BarFields fields_bar(double y, double t, Side side = Side::Auto) const;

  /// Eulerian fields at (x, t): solves y + u0(y) t = x for the label.
  BarEuler eulerian_bar(double x, double t) const;

  double blowup_time_bar() const;

  /// x0 + u0(x0) t for each t (BlowupReached at or past T_b).
  std::vector<double> discontinuity_bar(double x0, std::span<const double> t_grid) const;

  /// min{T, max(0, 1/a - 1/M)} with a = -min u0' (T when a <= 0).
  double tau_M_bar(double M, double T) const;

  double min_u0_prime() const { return min_slope_; }
  double argmin_u0_prime() const { return argmin_slope_; }
  const InitialData& data() const { return data_; }

 private:
  double slope(double y) const;

  InitialData data_;
  Interval window_;
  double delta_blow_;
  double h_;
  double min_slope_ = 0.0;
  double argmin_slope_ = 0.0;
  double sup_u0_ = 0.0;
};

}  // namespace awr
