#include "awr/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/minima.hpp>

namespace awr {
namespace {

struct Rate {
  double dy, dx, dI;
};

Rate rhs(const Scenario& s, double v, std::size_t seg, double y) {
  const double g = s.density_in_segment(y, v, seg);
  const PressureValue pv = s.model().evaluate(g);
  const double gp = g * pv.dp;
  return {-s.eps2() * g * gp / s.g0_in_segment(y, seg), v - s.eps2() * gp,
          (2.0 * gp + g * g * pv.d2p) / (gp * gp)};
}

// Classical RK4 on (y, x, I) with the segment held fixed.
TraceState rk4(const Scenario& s, double v, const TraceState& st, double h) {
  const Rate k1 = rhs(s, v, st.seg, st.y);
  const Rate k2 = rhs(s, v, st.seg, st.y + 0.5 * h * k1.dy);
  const Rate k3 = rhs(s, v, st.seg, st.y + 0.5 * h * k2.dy);
  const Rate k4 = rhs(s, v, st.seg, st.y + h * k3.dy);
  TraceState out = st;
  out.tau = st.tau + h;
  out.y = st.y + h / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
  out.x = st.x + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  out.I = st.I + h / 6.0 * (k1.dI + 2.0 * k2.dI + 2.0 * k3.dI + k4.dI);
  return out;
}

std::size_t steps_for(const Scenario& s, double span) {
  const double n = std::ceil(span * s.numerics().ode_steps_per_unit_time - 1e-9);
  return static_cast<std::size_t>(std::max(1.0, n));
}

}  // namespace

double mu_field(const Scenario& s, double y, double v, Side side) {
  const std::size_t seg = s.segment_of(y, side);
  const double g = s.density_in_segment(y, v, seg);
  return -s.eps2() * g * g * s.model().dp(g) / s.g0_in_segment(y, seg);
}

TraceState start_state(const Scenario& s, double xi, Side side) {
  if (side == Side::Auto && s.has_jump() && xi == s.x_jump()) side = Side::Left;
  TraceState st;
  st.y = xi;
  st.x = xi;
  st.seg = s.segment_of(xi, side);
  return st;
}

TraceState step(const Scenario& s, double v, const TraceState& st, double h) {
  TraceState out = rk4(s, v, st, h);
  const double boundary = s.data().g0.segment_interval(st.seg).lo;
  if (!(out.y < boundary)) return out;

  // Locate the sub-step at which y reaches the jump, switch segment, finish.
  const double tol = 1e-12 * std::max(1.0, h);
  const double f0 = st.y - boundary;
  const double f1 = out.y - boundary;
  const double hc = f0 <= 0.0 ? 0.0
                              : bracketed_root([&](double t) { return rk4(s, v, st, t).y - boundary; },
                                               0.0, h, f0, f1, tol);
  TraceState mid = hc > 0.0 ? rk4(s, v, st, hc) : st;
  mid.y = boundary;
  mid.seg = st.seg - 1;
  mid.crossed_at = st.tau + hc;
  if (h - hc <= 0.0) return mid;
  TraceState rest = step(s, v, mid, h - hc);
  rest.tau = st.tau + h;
  return rest;
}

namespace {

bool finite_state(const TraceState& st) {
  return std::isfinite(st.y) && std::isfinite(st.x) && std::isfinite(st.I);
}

// Step of size h taken in sub-steps, halved while the density along the path
// changes by more than 20% (it grows without bound as the gradient blows up).
TraceState guarded_step(const Scenario& s, double v, const TraceState& st, double h) {
  TraceState cur = st;
  double done = 0.0, dt = h;
  while (done < h) {
    dt = std::min(dt, h - done);
    const double g0 = s.density_in_segment(cur.y, v, cur.seg);
    bool ok = false;
    TraceState next;
    try {
      next = step(s, v, cur, dt);
      if (finite_state(next)) {
        if (next.seg != cur.seg) {
          ok = true;
        } else {
          const double g1 = s.density_in_segment(next.y, v, next.seg);
          ok = std::isfinite(g1) && g1 < 1.2 * g0 && g1 > g0 / 1.2;
        }
      }
    } catch (const OutOfRange&) {
    } catch (const NonPositiveDensity&) {
    }
    if (!ok) {
      if (dt < 1e-12 * h) throw BlowupReached("characteristic step failed to resolve the density growth");
      dt *= 0.5;
      continue;
    }
    cur = next;
    done = dt >= h - done ? h : done + dt;
    dt *= 2.0;
  }
  cur.tau = st.tau + h;
  return cur;
}

}  // namespace

void advance(const Scenario& s, double v, TraceState& st, double tau_end) {
  const double span = tau_end - st.tau;
  if (span <= 0.0) return;
  const std::size_t n = steps_for(s, span);
  const double h = span / static_cast<double>(n);
  const double t0 = st.tau;
  for (std::size_t k = 0; k < n; ++k) {
    st = guarded_step(s, v, st, h);
    st.tau = t0 + h * static_cast<double>(k + 1);
  }
  st.tau = tau_end;
}

CharacteristicTrace trace_forward(const Scenario& s, double xi, double tau_end, Side side) {
  if (tau_end > s.numerics().t_max) {
    std::ostringstream msg;
    msg << "trace end " << tau_end << " exceeds t_max " << s.numerics().t_max;
    throw HorizonExceeded(msg.str());
  }
  TraceState st = start_state(s, xi, side);
  const double v = s.v0(xi);
  CharacteristicTrace tr;
  tr.foot = xi;
  tr.v_const = v;
  tr.start_segment = st.seg;
  auto record = [&] {
    tr.times.push_back(st.tau);
    tr.positions.push_back(st.y);
    tr.eulerian_x.push_back(st.x);
    tr.density.push_back(s.density_in_segment(st.y, v, st.seg));
    tr.I_integral.push_back(st.I);
  };
  record();
  if (tau_end > 0.0) {
    const std::size_t n = steps_for(s, tau_end);
    const double h = tau_end / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      st = guarded_step(s, v, st, h);
      st.tau = k + 1 == n ? tau_end : h * static_cast<double>(k + 1);
      record();
    }
  }
  tr.crossed_jump_at = st.crossed_at;
  return tr;
}

std::vector<TraceState> trace_at(const Scenario& s, double xi, std::span<const double> times,
                                 Side side) {
  std::vector<TraceState> out;
  out.reserve(times.size());
  TraceState st = start_state(s, xi, side);
  const double v = s.v0(xi);
  for (double t : times) {
    if (t < st.tau) throw InvalidInput("trace_at: times must be nondecreasing");
    advance(s, v, st, t);
    out.push_back(st);
  }
  return out;
}

Foot find_foot(const Scenario& s, double y, double tau) {
  if (tau < 0.0) throw InvalidInput("find_foot: negative time");
  s.check_horizon(tau);
  if (tau == 0.0) return {y, start_state(s, y)};

  auto end_at = [&](double xi) {
    TraceState st = start_state(s, xi);
    advance(s, s.v0(xi), st, tau);
    return st;
  };
  auto f = [&](double xi) { return end_at(xi).y - y; };

  const double a = y;
  const double fa = f(a);
  if (fa >= 0.0) return {a, end_at(a)};
  const double scale = std::abs(mu_field(s, y, s.v0(y), Side::Auto)) * tau;
  double w = std::max(2.0 * scale, 1e-12 * (1.0 + std::abs(y)));
  double b = a + w;
  double fb = f(b);
  for (int k = 0; fb < 0.0; ++k) {
    if (k > 80) throw BracketFailure("find_foot: could not bracket the foot");
    w *= 2.0;
    b = a + w;
    fb = f(b);
  }
  const double xi = bracketed_root(f, a, b, fa, fb, s.numerics().tol_foot);
  return {xi, end_at(xi)};
}

std::vector<Foot> solve_feet(const Scenario& s, std::span<const double> targets, double tau,
                             FootKey key) {
  if (tau < 0.0) throw InvalidInput("solve_feet: negative time");
  s.check_horizon(tau);
  std::vector<Foot> out(targets.size());
  if (targets.empty()) return out;
  if (tau == 0.0) {
    for (std::size_t i = 0; i < targets.size(); ++i) out[i] = {targets[i], start_state(s, targets[i])};
    return out;
  }

  auto end_at = [&](double xi) {
    TraceState st = start_state(s, xi);
    advance(s, s.v0(xi), st, tau);
    return st;
  };
  auto key_of = [key](const TraceState& st) { return key == FootKey::Eulerian ? st.x : st.y; };

  const auto [tmin, tmax] = std::minmax_element(targets.begin(), targets.end());
  double lo = *tmin, hi = *tmax;
  double d = std::max(1e-3, 4.0 * std::abs(mu_field(s, lo, s.v0(lo))) * tau);
  for (int k = 0; key_of(end_at(lo)) > *tmin; ++k) {
    if (k > 60) throw BracketFailure("solve_feet: cannot bracket the leftmost target");
    lo = *tmin - d;
    d *= 2.0;
  }
  d = std::max(1e-3, 4.0 * std::abs(mu_field(s, hi, s.v0(hi))) * tau);
  for (int k = 0; key_of(end_at(hi)) < *tmax; ++k) {
    if (k > 60) throw BracketFailure("solve_feet: cannot bracket the rightmost target");
    hi = *tmax + d;
    d *= 2.0;
  }

  const std::size_t fan = std::max<std::size_t>(3, targets.size() + 2);
  const std::vector<double> feet = linspace(lo, hi, fan);
  std::vector<double> ends(fan);
  parallel_for(fan, [&](std::size_t k) { ends[k] = key_of(end_at(feet[k])); });
  for (std::size_t k = 1; k < fan; ++k) {
    if (ends[k] < ends[k - 1]) {
      std::ostringstream msg;
      msg << "characteristics crossed near label " << feet[k] << " at tau = " << tau;
      throw BracketFailure(msg.str());
    }
  }

  parallel_for(targets.size(), [&](std::size_t i) {
    const double t = targets[i];
    auto it = std::upper_bound(ends.begin(), ends.end(), t);
    std::size_t k = static_cast<std::size_t>(it - ends.begin());
    k = std::clamp<std::size_t>(k, 1, fan - 1);
    const double fa = ends[k - 1] - t, fb = ends[k] - t;
    const double xi = bracketed_root([&](double z) { return key_of(end_at(z)) - t; }, feet[k - 1],
                                     feet[k], fa, fb, s.numerics().tol_foot);
    out[i] = {xi, end_at(xi)};
  });
  return out;
}

std::pair<double, CharacteristicTrace> find_foot_traced(const Scenario& s, double y, double tau) {
  const Foot foot = find_foot(s, y, tau);
  return {foot.xi, trace_forward(s, foot.xi, tau)};
}

double alpha0(const Scenario& s, double xi, Side side) {
  const double g0 = s.g0(xi, side);
  return g0 * s.model().dp(g0) * s.v0_prime(xi);
}

double alpha_from(const Scenario& s, double a0, double I_integral) {
  const double denom = 1.0 + a0 * I_integral;
  if (denom <= s.numerics().delta_blow) {
    std::ostringstream msg;
    msg << "Riccati denominator " << denom << " at or below " << s.numerics().delta_blow;
    throw BlowupReached(msg.str());
  }
  return a0 / denom;
}

AlphaSamples alpha_along(const Scenario& s, const CharacteristicTrace& trace) {
  const Side side = trace.start_segment == s.segment_of(trace.foot, Side::Left) ? Side::Left : Side::Right;
  const double a0 = alpha0(s, trace.foot, side);
  AlphaSamples out;
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    const double a = alpha_from(s, a0, trace.I_integral[k]);
    const double g = trace.density[k];
    out.times.push_back(trace.times[k]);
    out.alpha.push_back(a);
    out.grad.push_back(a / (g * s.model().dp(g)));
  }
  return out;
}

double blowup_time_for_foot(const Scenario& s, double xi, Side side) {
  const double a0 = alpha0(s, xi, side);
  if (!(a0 < 0.0)) return kInfinity;
  const double target = -1.0 / a0;
  const double v = s.v0(xi);
  const double t_max = s.numerics().t_max;
  const double h = 1.0 / s.numerics().ode_steps_per_unit_time;

  TraceState st = start_state(s, xi, side);
  double dt = h;
  while (true) {
    if (st.tau >= t_max) {
      std::ostringstream msg;
      msg << "blow-up time of foot " << xi << " is > " << t_max;
      throw HorizonExceeded(msg.str());
    }
    // Shrink the step while the density grows quickly; the target is always
    // bracketed by a step whose end state is well resolved.
    TraceState next;
    try {
      next = guarded_step(s, v, st, dt);
    } catch (const BlowupReached&) {
      if (dt > 1e-12 * std::max(1.0, st.tau)) {
        dt *= 0.5;
        continue;
      }
      // The trace density is singular here; finish with a linear extrapolation of I.
      const double rate = rhs(s, v, st.seg, st.y).dI;
      return st.tau + std::max(0.0, (target - st.I) / rate);
    }
    if (next.I >= target) {
      const double tol = 1e-10 * std::max(1.0, st.tau);
      const double hc = bracketed_root([&](double t) { return guarded_step(s, v, st, t).I - target; }, 0.0,
                                       dt, st.I - target, next.I - target, tol);
      return st.tau + hc;
    }
    st = next;
  }
}

BlowupResult global_blowup_time(const Scenario& s, std::span<const double> foot_grid) {
  if (foot_grid.empty()) throw InvalidInput("global_blowup_time: empty foot grid");
  BlowupResult out;
  const std::size_t n = foot_grid.size();
  out.feet.assign(foot_grid.begin(), foot_grid.end());
  out.times.assign(n, kInfinity);
  out.errors.assign(n, {});
  parallel_for(n, [&](std::size_t k) {
    try {
      out.times[k] = blowup_time_for_foot(s, foot_grid[k]);
    } catch (const HorizonExceeded& e) {
      out.errors[k] = e.what();
    } catch (const Error& e) {
      out.errors[k] = e.what();
    }
  });

  const auto best = std::min_element(out.times.begin(), out.times.end());
  const std::size_t k = static_cast<std::size_t>(best - out.times.begin());
  out.T_b = *best;
  out.argmin = foot_grid[k];
  if (!std::isfinite(out.T_b)) return out;

  const double lo = foot_grid[k > 0 ? k - 1 : 0];
  const double hi = foot_grid[k + 1 < n ? k + 1 : n - 1];
  auto safe_time = [&](double xi, Side side) {
    try {
      return blowup_time_for_foot(s, xi, side);
    } catch (const Error&) {
      return kInfinity;
    }
  };
  auto consider = [&](double xi, Side side) {
    const double t = safe_time(xi, side);
    if (t < out.T_b) {
      out.T_b = t;
      out.argmin = xi;
    }
  };
  if (hi > lo) {
    const double cap = 2.0 * s.numerics().t_max;
    auto objective = [&](double xi) { return std::min(cap, safe_time(xi, Side::Auto)); };
    const auto [xi, t] = boost::math::tools::brent_find_minima(objective, lo, hi, 40);
    if (t < out.T_b) {
      out.T_b = t;
      out.argmin = xi;
    }
    if (s.has_jump() && s.x_jump() >= lo && s.x_jump() <= hi) {
      consider(s.x_jump(), Side::Left);
      consider(s.x_jump(), Side::Right);
    }
  }
  return out;
}

}  // namespace awr
