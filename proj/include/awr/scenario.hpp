#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "awr/initial_data.hpp"
#include "awr/pressure.hpp"

namespace awr {

struct Numerics {
  double ode_steps_per_unit_time = 1000.0;
  double tol_foot = 1e-12;
  double tol_inv = 1e-12;
  double delta_blow = 1e-6;
  std::size_t grid_n = 201;
  double t_max = 10.0;
  double fd_step_rel = 1e-6;  // v0' step, relative to the window width
  std::size_t n_cond = 4096;
  bool allow_past_horizon = false;
};

/// Immutable bundle: pressure law, initial data, eps, window and numerics.
/// Construction validates admissibility and, for laws with p(0+) = 0 and an
/// increasing density jump, the eps-condition (ScenarioRejected otherwise).
class Scenario {
 public:
  Scenario(PressureModel model, InitialData data, double epsilon, Interval window,
           Numerics numerics = {});

  const PressureModel& model() const { return model_; }
  const InitialData& data() const { return data_; }
  double epsilon() const { return epsilon_; }
  double eps2() const { return eps2_; }
  Interval window() const { return window_; }
  const Numerics& numerics() const { return numerics_; }
  const PiecewiseLipschitzFn& z0() const { return z0_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  bool has_jump() const { return !data_.g0.jumps().empty(); }
  /// Location of the single density jump (throws if there is none).
  double x_jump() const;

  std::size_t segment_of(double y, Side side = Side::Auto) const { return data_.g0.segment_of(y, side); }
  double v0(double y) const { return data_.u0.eval_segment(0, y); }
  double v0_prime(double y) const;
  double g0(double y, Side side = Side::Auto) const { return data_.g0(y, side); }
  double g0_in_segment(double y, std::size_t seg) const { return data_.g0.eval_segment(seg, y); }
  double z0_in_segment(double y, std::size_t seg) const;

  /// g = p^{-1}((Z0(y) - v)/eps^2) with Z0 taken from segment `seg`.
  /// Throws VacuumEncountered when the argument is below the range of p.
  double density_in_segment(double y, double v, std::size_t seg) const;

  /// Returns a copy whose samplers refuse tau >= 0.999 * T (unless
  /// numerics.allow_past_horizon is set).
  Scenario with_blowup_estimate(double T) const;
  std::optional<double> blowup_estimate() const { return blowup_estimate_; }
  double safety_horizon() const;
  void check_horizon(double tau) const;

  /// Same data at a different eps; re-runs the construction checks.
  Scenario with_epsilon(double epsilon) const;

 private:
  PressureModel model_;
  InitialData data_;
  double epsilon_;
  double eps2_;
  Interval window_;
  Numerics numerics_;
  PiecewiseLipschitzFn z0_;
  std::optional<double> blowup_estimate_;
  std::vector<std::string> warnings_;
};

}  // namespace awr
