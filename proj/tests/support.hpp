#pragma once

#include <cmath>
#include <string>

#include "awr/scenario.hpp"

namespace awr::test {

inline PiecewiseLipschitzFn expr(const std::string& name, std::vector<double> params = {}) {
  return PiecewiseLipschitzFn::expression(name, params);
}

inline InitialData make_data(PiecewiseLipschitzFn u0, PiecewiseLipschitzFn g0) {
  return InitialData{std::move(u0), std::move(g0)};
}

inline Scenario make_scenario(PressureModel model, PiecewiseLipschitzFn u0, PiecewiseLipschitzFn g0,
                              double eps, Interval window = {-5.0, 5.0}, Numerics n = {}) {
  return Scenario(std::move(model), make_data(std::move(u0), std::move(g0)), eps, window, n);
}

// p = ln rho, u0 = -tanh, density step 1 -> 2 at 0.
inline Scenario default_scenario(double eps = 0.1) {
  return make_scenario(PressureModel::log_law(), expr("neg_tanh"), PiecewiseLipschitzFn::step(0.0, 1.0, 2.0),
                       eps);
}

inline Scenario constant_state(PressureModel model, double c, double rho, double eps) {
  return make_scenario(std::move(model), PiecewiseLipschitzFn::constant(c), PiecewiseLipschitzFn::constant(rho),
                       eps);
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

}  // namespace awr::test
