#include "awr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace awr {

Scenario::Scenario(PressureModel model, InitialData data, double epsilon, Interval window,
                   Numerics numerics)
    : model_(std::move(model)),
      data_(std::move(data)),
      epsilon_(epsilon),
      eps2_(epsilon * epsilon),
      window_(window),
      numerics_(numerics) {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  if (!(window.hi > window.lo)) throw InvalidInput("window must be a nonempty interval");
  if (!(numerics_.ode_steps_per_unit_time >= 1.0)) throw InvalidInput("ode_steps_per_unit_time must be >= 1");
  if (data_.g0.jumps().size() > 1) {
    throw InvalidInput("one density jump per scenario; split multi-jump data into separate runs");
  }
  data_.validate(window_, numerics_.n_cond);
  z0_ = riemann_invariant_initial(data_, model_, epsilon_);

  // Admissibility over the densities the solution can reach.
  const BoundConstants c = bound_constants(data_, model_, epsilon_, window_, numerics_.n_cond);
  const double lip = lipschitz_constant(data_.u0, window_, numerics_.n_cond);
  Interval range{0.5 * c.A1, std::min(1e6, 2.0 * c.A2 * std::exp(std::min(50.0, lip * numerics_.t_max)))};
  const Interval dom = model_.domain();
  range.lo = std::max(range.lo, dom.lo);
  range.hi = std::min(range.hi, dom.hi);
  const AdmissibilityReport adm = validate_admissibility(model_, range, 1000);
  if (!adm.passed) {
    std::ostringstream msg;
    msg << "pressure law " << model_.describe() << " is not admissible near rho = "
        << adm.violations.front().rho;
    throw InvalidInput(msg.str());
  }

  if (model_.limit_class() == LimitClass::FiniteZero) {
    for (const auto& v : check_epsilon_condition(data_, model_, epsilon_, window_, numerics_.n_cond)) {
      if (!v.holds) {
        std::ostringstream msg;
        msg << "eps-condition fails at the density jump x = " << v.jump << " (margin " << v.margin
            << ", eps = " << epsilon_ << ")";
        throw ScenarioRejected(msg.str(), v.jump, v.margin);
      }
    }
  } else {
    for (const auto& v : check_zero_condition(data_, window_, numerics_.n_cond)) {
      if (!v.holds) {
        std::ostringstream msg;
        msg << "0-condition fails at x = " << v.jump << " (margin " << v.margin
            << "); the vanishing-pressure limit is not covered";
        warnings_.push_back(msg.str());
      }
    }
  }
}

double Scenario::x_jump() const {
  if (!has_jump()) throw InvalidInput("scenario has no density jump");
  return data_.g0.jumps().front();
}

double Scenario::v0_prime(double y) const {
  const double h = numerics_.fd_step_rel * window_.width();
  return data_.u0.segment_slope(0, y, h);
}

double Scenario::z0_in_segment(double y, std::size_t seg) const {
  return v0(y) + eps2_ * model_.p(g0_in_segment(y, seg));
}

double Scenario::density_in_segment(double y, double v, std::size_t seg) const {
  // p(g0) + (u0 - v)/eps^2 keeps the O(1) part exact for small eps.
  const double q = model_.p(g0_in_segment(y, seg)) + (v0(y) - v) / eps2_;
  if (model_.limit_class() == LimitClass::FiniteZero && !(q > model_.range_infimum())) {
    std::ostringstream msg;
    msg << "density recovery hits vacuum at y = " << y << " (p argument " << q << ")";
    throw VacuumEncountered(msg.str());
  }
  return model_.inverse(q);
}

Scenario Scenario::with_blowup_estimate(double T) const {
  Scenario copy = *this;
  copy.blowup_estimate_ = T;
  return copy;
}

double Scenario::safety_horizon() const {
  if (!blowup_estimate_ || numerics_.allow_past_horizon) return kInfinity;
  return 0.999 * *blowup_estimate_;
}

void Scenario::check_horizon(double tau) const {
  if (tau >= safety_horizon()) {
    std::ostringstream msg;
    msg << "tau = " << tau << " is past the safety horizon " << safety_horizon();
    throw HorizonExceeded(msg.str());
  }
}

Scenario Scenario::with_epsilon(double epsilon) const {
  Scenario next(model_, data_, epsilon, window_, numerics_);
  return next;
}

}  // namespace awr
