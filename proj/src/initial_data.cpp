#include "awr/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace awr {
namespace {

// Grid over the window plus both one-sided values at every jump inside it.
template <class F>
void for_each_sample(const PiecewiseLipschitzFn& f, Interval window, std::size_t n, F&& visit) {
  for (double x : linspace(window.lo, window.hi, n)) visit(f(x, Side::Auto));
  for (std::size_t j = 0; j < f.jumps().size(); ++j) {
    if (!window.contains(f.jumps()[j])) continue;
    const auto [l, r] = f.one_sided(j);
    visit(l);
    visit(r);
  }
}

std::vector<ConditionVerdict> check_condition(const InitialData& data, Interval window,
                                              std::size_t n_cond, ConditionKind kind,
                                              double epsilon, const PressureModel* model) {
  std::vector<ConditionVerdict> out;
  const auto& jumps = data.g0.jumps();
  for (std::size_t j = 0; j < jumps.size(); ++j) {
    const auto [left, right] = data.g0.one_sided(j);
    if (!(left < right)) continue;
    const double xi = jumps[j];
    double lhs = data.u0(xi);
    if (kind == ConditionKind::Epsilon) lhs += epsilon * epsilon * model->p(left);

    // Beyond the window the data are extended by their boundary constant, so
    // the grid on (x_i, window.hi] covers every x > x_i.
    const double hi = std::max(window.hi, xi);
    double margin = kInfinity;
    if (hi > xi) {
      const double h = (hi - xi) / static_cast<double>(n_cond);
      for (std::size_t k = 1; k <= n_cond; ++k) {
        const double x = k == n_cond ? hi : xi + h * static_cast<double>(k);
        margin = std::min(margin, lhs - data.u0(x));
      }
    } else {
      margin = lhs - data.u0(xi);
    }
    const double infimum = std::min(margin, lhs - data.u0(xi));
    out.push_back({xi, kind, margin > kStrictness, margin, infimum});
  }
  return out;
}

}  // namespace

void InitialData::validate(Interval window, std::size_t n_samples) const {
  if (!u0.jumps().empty()) throw InvalidInput("initial velocity must be Lipschitz (no jumps)");
  double gmin = kInfinity;
  for_each_sample(g0, window, n_samples, [&](double v) { gmin = std::min(gmin, v); });
  if (!(gmin > 0.0)) {
    std::ostringstream msg;
    msg << "initial density must stay positive on the window (min " << gmin << ")";
    throw InvalidInput(msg.str());
  }
}

PiecewiseLipschitzFn riemann_invariant_initial(const InitialData& data, const PressureModel& model,
                                               double epsilon) {
  const double e2 = epsilon * epsilon;
  return combine(data.u0, data.g0, [model, e2](double u, double g) { return u + e2 * model.p(g); });
}

std::vector<ConditionVerdict> check_epsilon_condition(const InitialData& data,
                                                      const PressureModel& model, double epsilon,
                                                      Interval window, std::size_t n_cond) {
  return check_condition(data, window, n_cond, ConditionKind::Epsilon, epsilon, &model);
}

std::vector<ConditionVerdict> check_zero_condition(const InitialData& data, Interval window,
                                                   std::size_t n_cond) {
  return check_condition(data, window, n_cond, ConditionKind::Zero, 0.0, nullptr);
}

BoundConstants bound_constants(const InitialData& data, const PressureModel& model, double epsilon,
                               Interval window, std::size_t n_samples) {
  BoundConstants c{kInfinity, -kInfinity, 0.0};
  for_each_sample(data.g0, window, n_samples, [&](double g) {
    c.A1 = std::min(c.A1, g);
    c.A2 = std::max(c.A2, g);
  });

  const PiecewiseLipschitzFn z0 = riemann_invariant_initial(data, model, epsilon);
  const double h = 1e-6 * std::max(1.0, window.width());
  for (double x : linspace(window.lo, window.hi, n_samples)) {
    // Slopes are taken inside the owning segment so a jump contributes nothing.
    for (Side side : {Side::Left, Side::Right}) {
      const std::size_t k = z0.segment_of(x, side);
      const double slope = z0.segment_slope(k, x, h);
      const double g = data.g0.eval_segment(data.g0.segment_of(x, side), x);
      c.B = std::max(c.B, std::max(slope, 0.0) / g);
    }
  }
  return c;
}

double lipschitz_constant(const PiecewiseLipschitzFn& f, Interval window, std::size_t n_samples) {
  const auto xs = linspace(window.lo, window.hi, n_samples);
  double best = 0.0;
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const std::size_t seg = f.segment_of(xs[k - 1], Side::Right);
    if (f.segment_of(xs[k], Side::Left) != seg) continue;
    const double slope = (f.eval_segment(seg, xs[k]) - f.eval_segment(seg, xs[k - 1])) / (xs[k] - xs[k - 1]);
    best = std::max(best, std::abs(slope));
  }
  return best;
}

double sup_abs(const PiecewiseLipschitzFn& f, Interval window, std::size_t n_samples) {
  double best = 0.0;
  for_each_sample(f, window, n_samples, [&](double v) { best = std::max(best, std::abs(v)); });
  return best;
}

}  // namespace awr
