#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "awr/euler_map.hpp"
#include "awr/pressureless.hpp"

namespace awr {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares on (log eps, log err). DegenerateFit when fewer than three
/// points or any err <= 0.
FitResult fit_rate(std::span<const double> eps, std::span<const double> errs);

struct RateReport {
  std::string quantity;
  std::vector<double> epsilons;
  std::vector<double> errors;
  std::optional<FitResult> fit;  // empty when the error vector is degenerate
  std::string note;
};

RateReport make_rate_report(std::string quantity, std::vector<double> eps, std::vector<double> errs);

/// Scenario template plus the eps sweep and evaluation lattice.
struct SweepConfig {
  PressureModel model = PressureModel::log_law();
  InitialData data;
  Interval window{-5.0, 5.0};
  Numerics numerics;
  std::vector<double> epsilons{0.2, 0.1, 0.05, 0.025, 0.0125};
  double t_star = 0.5;
  std::size_t lattice_nx = 201;
  std::size_t lattice_nt = 101;
  std::vector<std::pair<double, double>> seeds;  // triangle seeds (x, t); default (0, t_star)
  std::size_t foot_grid_n = 201;                 // blow-up scan

  Scenario scenario(double epsilon) const;
  std::vector<double> foot_grid() const;
};

struct EpsilonRow {
  double epsilon = 0.0;
  bool skipped = false;
  std::string skip_reason;
  double T_b_eps = kInfinity;
  double sup_err_u = 0.0;
  double sup_err_lambda1 = 0.0;
  double sup_err_lambda2 = 0.0;
  double sup_err_x2 = 0.0;
  double triangle_width = 0.0;
  double sup_err_rho_offcurve = 0.0;
};

struct ConvergenceStudy {
  std::vector<EpsilonRow> rows;
  std::vector<RateReport> reports;  // u, lambda1, lambda2, x2, triangle_width
  std::optional<std::size_t> eps_star_index;
  double T_b_bar = kInfinity;
  double rho_band = 0.0;  // half-width of the band excluded from the rho column
};

ConvergenceStudy run_convergence(const SweepConfig& cfg);

/// Only the velocity column of run_convergence.
RateReport convergence_velocity(const SweepConfig& cfg);
/// Curve position, lambda1, lambda2 and triangle-width columns.
std::vector<RateReport> convergence_curves(const SweepConfig& cfg);

struct BlowupRow {
  double epsilon = 0.0;
  double T_b_eps = kInfinity;
  double T_b_bar = kInfinity;
  double gap = 0.0;
  double argmin = 0.0;
};

struct BlowupStudy {
  std::vector<BlowupRow> rows;
  BlowupConditions conditions;
  bool conditions_hold = false;
  bool liminf_holds = false;  // T_b <= T_b^eps + tol for every eps
  bool limit_holds = false;   // gaps nonincreasing, last gap <= tol (only when conditions hold)
  bool passed = false;
  double tol = 1e-3;
};

BlowupStudy blowup_convergence(const SweepConfig& cfg, double tol_tb);

/// phi(x, t) = psi((x - xc)/rx) psi((t - tc)/rt), psi(s) = (1 - s^2)^4 on |s| < 1.
struct TestFunction {
  double xc = 0.0;
  double rx = 1.0;
  double tc = 0.0;
  double rt = 1.0;
};

/// Seeded family inside window x [0, t_end]; every other bump straddles the
/// density jump, and some reach below t = 0 so the initial-data term is used.
std::vector<TestFunction> sample_test_functions(Interval window, double t_end, double x_center,
                                                std::size_t n, std::uint64_t seed);

struct WeakResidual {
  double mass = 0.0;
  double momentum = 0.0;
};

/// Max over test functions of |weak-form integral| for mass and momentum.
/// Composite 5-point Gauss-Legendre with `panels` panels per support
/// direction; x panels split at the moving discontinuity.
WeakResidual weak_residual(const Scenario& s, std::span<const TestFunction> tests, std::size_t panels);

WeakResidual weak_residual(const Scenario& s, std::size_t n_test, std::uint64_t rng_seed,
                           std::size_t panels, double t_end);

struct WeakRow {
  std::size_t grid_n = 0;
  double mass = 0.0;
  double momentum = 0.0;
};

std::vector<WeakRow> weak_refinement(const Scenario& s, std::size_t n_test, std::uint64_t rng_seed,
                                     std::span<const std::size_t> levels, double t_end);

}  // namespace awr
