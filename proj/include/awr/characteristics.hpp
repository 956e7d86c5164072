#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "awr/scenario.hpp"

namespace awr {

/// Point on a genuinely-nonlinear characteristic in Lagrangian coordinates.
/// `x` is the Eulerian position of the same point (it moves with speed
/// lambda1), `I` the accumulated integral of I(g).
struct TraceState {
  double tau = 0.0;
  double y = 0.0;
  double x = 0.0;
  double I = 0.0;
  std::size_t seg = 0;
  std::optional<double> crossed_at;
};

struct CharacteristicTrace {
  double foot = 0.0;
  double v_const = 0.0;
  std::size_t start_segment = 0;
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<double> eulerian_x;
  std::vector<double> density;
  std::vector<double> I_integral;
  std::optional<double> crossed_jump_at;
};

/// mu = -(eps^2 / g0(y)) g^2 p'(g), g = p^{-1}((Z0(y) - v)/eps^2).
double mu_field(const Scenario& s, double y, double v, Side side = Side::Auto);

/// State at tau = 0 for the characteristic leaving xi. A foot exactly on the
/// jump with Side::Auto starts on the left segment, since the flow is leftward.
TraceState start_state(const Scenario& s, double xi, Side side = Side::Auto);

/// Fixed-step RK4 from st.tau to tau_end, crossing the jump by event location.
void advance(const Scenario& s, double v, TraceState& st, double tau_end);

/// One RK4 step of size h (with jump handling); used for event refinement.
TraceState step(const Scenario& s, double v, const TraceState& st, double h);

CharacteristicTrace trace_forward(const Scenario& s, double xi, double tau_end,
                                  Side side = Side::Auto);

/// States of the characteristic from xi at each of the increasing `times`.
std::vector<TraceState> trace_at(const Scenario& s, double xi, std::span<const double> times,
                                 Side side = Side::Auto);

struct Foot {
  double xi = 0.0;
  TraceState end;
};

/// Label xi whose characteristic reaches y at time tau.
Foot find_foot(const Scenario& s, double y, double tau);

enum class FootKey { Lagrangian, Eulerian };

/// Batch inversion at one time: for each target, the label whose
/// characteristic ends there (Lagrangian y, or Eulerian x when key is
/// Eulerian). A fan of traced labels brackets every target; each is then
/// refined to tol_foot. Targets may come in any order.
std::vector<Foot> solve_feet(const Scenario& s, std::span<const double> targets, double tau,
                             FootKey key);

/// find_foot plus the recorded trace of the foot's characteristic.
std::pair<double, CharacteristicTrace> find_foot_traced(const Scenario& s, double y, double tau);

/// alpha0 = g0 p'(g0) v0' at the foot.
double alpha0(const Scenario& s, double xi, Side side = Side::Auto);

/// alpha0 / (1 + alpha0 * I_integral); BlowupReached when the denominator
/// is at or below delta_blow.
double alpha_from(const Scenario& s, double a0, double I_integral);

struct AlphaSamples {
  std::vector<double> times;
  std::vector<double> alpha;
  std::vector<double> grad;  // J^{-1} v_y = alpha / (g p'(g))
};

AlphaSamples alpha_along(const Scenario& s, const CharacteristicTrace& trace);

/// First time where 1 + alpha0 * int_0^T I(g) ds = 0, or +inf when v0'(xi) >= 0.
/// HorizonExceeded past numerics.t_max.
double blowup_time_for_foot(const Scenario& s, double xi, Side side = Side::Auto);

struct BlowupResult {
  std::vector<double> feet;
  std::vector<double> times;  // +inf for rarefactive feet and feet past t_max
  std::vector<std::string> errors;
  double T_b = kInfinity;
  double argmin = 0.0;
};

/// Minimum over the grid, refined once by a golden-section/parabolic search
/// around the argmin; both sides of the jump are tried when it is nearby.
BlowupResult global_blowup_time(const Scenario& s, std::span<const double> foot_grid);

}  // namespace awr
