#pragma once

#include <cstddef>
#include <vector>

#include "awr/piecewise.hpp"
#include "awr/pressure.hpp"

namespace awr {

/// Lipschitz velocity u0 and piecewise-Lipschitz density g0 (bounded away
/// from zero on the working window).
struct InitialData {
  PiecewiseLipschitzFn u0;
  PiecewiseLipschitzFn g0;

  /// Throws InvalidInput if u0 jumps or g0 is not positive on `window`.
  void validate(Interval window, std::size_t n_samples = 4096) const;
};

enum class ConditionKind { Epsilon, Zero };

struct ConditionVerdict {
  double jump = 0.0;
  ConditionKind kind = ConditionKind::Epsilon;
  bool holds = false;
  /// Smallest gap on the open grid x_i < x <= window.hi.
  double margin = 0.0;
  /// Same, also counting the limit x -> x_i+ (the true infimum when the gap
  /// is monotone near the jump).
  double infimum = 0.0;
};

inline constexpr double kStrictness = 1e-12;

/// Z0(y) = u0(y) + eps^2 p(g0(y)), sharing g0's jumps.
PiecewiseLipschitzFn riemann_invariant_initial(const InitialData& data, const PressureModel& model,
                                               double epsilon);

/// One verdict per jump where g0 increases: gap(x) = u0(x_i) + eps^2 p(g0(x_i-)) - u0(x)
/// for x > x_i.
std::vector<ConditionVerdict> check_epsilon_condition(const InitialData& data,
                                                      const PressureModel& model, double epsilon,
                                                      Interval window, std::size_t n_cond = 4096);

/// As above with gap(x) = u0(x_i) - u0(x).
std::vector<ConditionVerdict> check_zero_condition(const InitialData& data, Interval window,
                                                   std::size_t n_cond = 4096);

struct BoundConstants {
  double A1 = 0.0;  // min g0
  double A2 = 0.0;  // max g0
  double B = 0.0;   // sup of (Z0')_+ / g0 over the continuous part
};

BoundConstants bound_constants(const InitialData& data, const PressureModel& model, double epsilon,
                               Interval window, std::size_t n_samples = 4096);

/// Largest finite-difference slope between neighbouring grid points that lie
/// in the same segment.
double lipschitz_constant(const PiecewiseLipschitzFn& f, Interval window,
                          std::size_t n_samples = 4096);

/// sup |f| over the window grid, one-sided values at jumps included.
double sup_abs(const PiecewiseLipschitzFn& f, Interval window, std::size_t n_samples = 4096);

}  // namespace awr
