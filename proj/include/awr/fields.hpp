#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "awr/characteristics.hpp"

namespace awr {

enum class Region { OmegaPlus, OmegaI, OmegaII, JumpLine };

std::string region_name(Region r);

struct FieldSample {
  double v = 0.0;
  double Z = 0.0;
  double g = 0.0;
  double J = 1.0;
  double grad = 0.0;  // J^{-1} v_y
  Region region = Region::OmegaPlus;
  double foot = 0.0;
  double I_integral = 0.0;
  // Both one-sided densities when the sample sits on the jump line.
  double g_left = 0.0;
  double g_right = 0.0;
};

/// Builds the sample at (y, tau) from an already located foot. `side`
/// selects the one-sided Z0/g0 when y is on the jump.
FieldSample sample_from_foot(const Scenario& s, double y, double tau, const Foot& foot,
                             Side side = Side::Auto);

FieldSample sample_lagrangian(const Scenario& s, double y, double tau, Side side = Side::Auto);

/// Feet for a batch of labels at one time (any order). A fan of traced feet
/// brackets every label, then each is refined to tol_foot.
std::vector<Foot> find_feet(const Scenario& s, std::span<const double> ys, double tau);

/// Lagrangian position at time tau of the characteristic leaving the jump
/// from its left side.
double boundary_characteristic(const Scenario& s, double tau);

Region classify_region(const Scenario& s, double y, double tau);

struct BoundRow {
  double y = 0.0;
  double tau = 0.0;
  std::string region;
  double g = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct BoundReport {
  std::size_t n_y = 0;
  std::size_t n_tau = 0;
  double tau_max = 0.0;
  BoundConstants constants;
  double jump_bound = 0.0;
  std::vector<BoundRow> rows;
  std::vector<BoundRow> violations;
  double worst_ratio = kInfinity;
  bool passed = false;
  std::string note;
};

struct BoundOptions {
  /// Applied to every computed density before the comparison (negative controls).
  std::function<double(double y, double tau, double g)> perturb;
};

/// Region-appropriate lower bounds on the lattice ys x taus (taus ascending).
BoundReport verify_density_bounds(const Scenario& s, std::span<const double> ys,
                                  std::span<const double> taus, const BoundOptions& options = {});

/// Minimum of J^{-1} v_y over y_grid at time tau.
double level_inf(const Scenario& s, double tau, std::span<const double> y_grid);

/// Largest s <= T with level_inf >= -M on [0, s]; grid times past the safety
/// horizon count as failing. Refined by bisection to 1e-6.
double tau_M(const Scenario& s, double M, double T, std::span<const double> tau_grid,
             std::span<const double> y_grid);

}  // namespace awr
