#pragma once

#include <span>
#include <vector>

#include "awr/fields.hpp"

namespace awr {

struct EulerSample {
  double rho = 0.0;
  double u = 0.0;
  double u_x = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double y = 0.0;     // Lagrangian preimage
  double foot = 0.0;  // label of the 1-characteristic through the point
};

/// x(y, tau): Eulerian image of the Lagrangian point (y, tau). Evaluated as
/// the endpoint of the 1-characteristic through (y, tau), whose Eulerian
/// position obeys dX/dtau = lambda1.
double flow_x(const Scenario& s, double y, double tau);

/// y + int_0^tau v(y, s) ds by composite Simpson with n_panels (even) panels.
/// Independent of flow_x; used as a cross-check.
double flow_x_simpson(const Scenario& s, double y, double tau, std::size_t n_panels);

/// y with flow_x(y, t) = x inside y_bracket.
double invert_x(const Scenario& s, double x, double t, Interval y_bracket);

EulerSample euler_from_foot(const Scenario& s, const Foot& foot);

EulerSample sample_eulerian(const Scenario& s, double x, double t);

/// Samples at many x for one t (any order).
std::vector<EulerSample> sample_eulerian_row(const Scenario& s, std::span<const double> xs, double t);

struct DiscontinuityCurve {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> u_left;   // v at y = x_jump - 1e-9
  std::vector<double> u_right;  // v at y = x_jump + 1e-9
  std::vector<double> rho_left;
  std::vector<double> rho_right;
};

/// x2(t) = flow_x(x_jump, t), the image of the stationary Lagrangian jump.
DiscontinuityCurve discontinuity_curve(const Scenario& s, std::span<const double> t_grid);

/// Particle path (lambda2-characteristic) through (x_tilde, t_tilde).
std::vector<double> char2_curve(const Scenario& s, double x_tilde, double t_tilde,
                                std::span<const double> t_grid);

/// 1-characteristic through (x_tilde, t_tilde), sampled on t_grid (ascending).
std::vector<double> char1_curve(const Scenario& s, double x_tilde, double t_tilde,
                                std::span<const double> t_grid);

/// Same curve by RK4 in Eulerian coordinates with lambda1 from sample_eulerian.
/// Slow; kept as a cross-check for char1_curve.
std::vector<double> char1_curve_eulerian(const Scenario& s, double x_tilde, double t_tilde,
                                         std::span<const double> t_grid, std::size_t steps_per_unit);

}  // namespace awr
