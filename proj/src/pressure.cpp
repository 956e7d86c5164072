#include "awr/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace awr {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double rho) {
  if (!(rho > 0.0)) {
    std::ostringstream msg;
    msg << "pressure evaluated at non-positive density " << rho;
    throw NonPositiveDensity(msg.str());
  }
}

// Fritsch–Carlson slopes for a monotone-preserving cubic Hermite interpolant.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) {
      d[k] = 0.0;
    } else {
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) {
      s = 0.0;
    } else if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) {
      s = 3.0 * d0;
    }
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3 < n ? n - 3 : 0], delta[n - 2], delta[n - 3]);
  return d;
}

PressureValue eval_table(const TabulatedLaw& t, double rho) {
  if (rho < t.rho.front() || rho > t.rho.back()) {
    std::ostringstream msg;
    msg << "density " << rho << " outside tabulated range [" << t.rho.front() << ", "
        << t.rho.back() << "]";
    throw OutOfRange(msg.str());
  }
  auto it = std::upper_bound(t.rho.begin(), t.rho.end(), rho);
  std::size_t k = static_cast<std::size_t>(std::distance(t.rho.begin(), it));
  k = std::clamp<std::size_t>(k, 1, t.rho.size() - 1) - 1;
  const double h = t.rho[k + 1] - t.rho[k];
  const double s = (rho - t.rho[k]) / h;
  const double y0 = t.p[k], y1 = t.p[k + 1];
  const double m0 = t.slope[k] * h, m1 = t.slope[k + 1] * h;
  // Cubic Hermite basis in s ∈ [0, 1].
  const double s2 = s * s, s3 = s2 * s;
  const double p = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
                   (s3 - s2) * m1;
  const double dp_ds = (6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * y1 +
                       (3 * s2 - 2 * s) * m1;
  const double d2p_ds2 =
      (12 * s - 6) * y0 + (6 * s - 4) * m0 + (-12 * s + 6) * y1 + (6 * s - 2) * m1;
  return {p, dp_ds / h, d2p_ds2 / (h * h)};
}

}  // namespace

PressureModel PressureModel::gamma_law(double gamma) {
  if (!(gamma >= 1.0)) throw InvalidInput("gamma law requires gamma >= 1");
  return PressureModel(GammaLaw{gamma});
}

PressureModel PressureModel::log_law() { return PressureModel(LogLaw{}); }

PressureModel PressureModel::tabulated(std::vector<double> rho, std::vector<double> p) {
  if (rho.size() != p.size() || rho.size() < 2) {
    throw InvalidInput("tabulated pressure needs at least two (rho, p) samples");
  }
  for (std::size_t k = 0; k < rho.size(); ++k) {
    if (!(rho[k] > 0.0)) throw InvalidInput("tabulated pressure needs positive densities");
    if (k > 0 && !(rho[k] > rho[k - 1])) {
      throw InvalidInput("tabulated pressure needs strictly increasing densities");
    }
  }
  TabulatedLaw t{std::move(rho), std::move(p), {}};
  t.slope = pchip_slopes(t.rho, t.p);
  return PressureModel(std::move(t));
}

PressureValue PressureModel::evaluate(double rho) const {
  require_positive(rho);
  return std::visit(
      overloaded{
          [rho](const GammaLaw& g) -> PressureValue {
            if (g.gamma == 1.0) return {rho, 1.0, 0.0};
            const double pm2 = std::pow(rho, g.gamma - 2.0);
            return {pm2 * rho * rho, g.gamma * pm2 * rho, g.gamma * (g.gamma - 1.0) * pm2};
          },
          [rho](const LogLaw&) -> PressureValue {
            const double inv = 1.0 / rho;
            return {std::log(rho), inv, -inv * inv};
          },
          [rho](const TabulatedLaw& t) { return eval_table(t, rho); }},
      law_);
}

double PressureModel::inverse(double q) const {
  return std::visit(overloaded{[q](const GammaLaw& g) -> double {
                                 if (!(q > 0.0)) {
                                   std::ostringstream msg;
                                   msg << "p^{-1}(" << q << ") below the range of rho^gamma";
                                   throw OutOfRange(msg.str());
                                 }
                                 return g.gamma == 1.0 ? q : std::pow(q, 1.0 / g.gamma);
                               },
                               [q](const LogLaw&) { return std::exp(q); },
                               [this, q](const TabulatedLaw&) { return p_inverse_newton(*this, q); }},
                    law_);
}

double PressureModel::curvature(double rho) const {
  const PressureValue v = evaluate(rho);
  const double rp = rho * v.dp;
  return (2.0 * rp + rho * rho * v.d2p) / (rp * rp);
}

LimitClass PressureModel::limit_class() const {
  return std::holds_alternative<LogLaw>(law_) ? LimitClass::MinusInfinity
                                              : LimitClass::FiniteZero;
}

double PressureModel::range_infimum() const {
  return std::visit(overloaded{[](const GammaLaw&) { return 0.0; },
                               [](const LogLaw&) { return -kInfinity; },
                               [](const TabulatedLaw& t) {
                                 return *std::min_element(t.p.begin(), t.p.end());
                               }},
                    law_);
}

Interval PressureModel::domain() const {
  if (const auto* t = std::get_if<TabulatedLaw>(&law_)) return {t->rho.front(), t->rho.back()};
  return {0.0, kInfinity};
}

std::string PressureModel::describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(overloaded{[&](const GammaLaw& g) { out << "gamma:" << g.gamma; },
                        [&](const LogLaw&) { out << "log"; },
                        [&](const TabulatedLaw& t) { out << "table(" << t.rho.size() << " rows)"; }},
             law_);
  return out.str();
}

PressureValue evaluate(const PressureModel& model, double rho) { return model.evaluate(rho); }

double p_inverse(const PressureModel& model, double q) { return model.inverse(q); }

double curvature_I(const PressureModel& model, double rho) { return model.curvature(rho); }

double p_inverse_newton(const PressureModel& model, double q, double tol) {
  const Interval dom = model.domain();
  const bool bounded = std::isfinite(dom.hi);

  // Bracket [lo, hi] with p(lo) <= q <= p(hi).
  double lo, hi;
  if (bounded) {
    lo = dom.lo;
    hi = dom.hi;
    const double plo = model.p(lo), phi = model.p(hi);
    if (q < plo || q > phi) {
      std::ostringstream msg;
      msg << "p^{-1}(" << q << ") outside tabulated range [" << plo << ", " << phi << "]";
      throw OutOfRange(msg.str());
    }
  } else {
    if (q <= model.range_infimum()) {
      std::ostringstream msg;
      msg << "p^{-1}(" << q << ") at or below the infimum of p";
      throw OutOfRange(msg.str());
    }
    lo = 1.0;
    hi = 1.0;
    for (int k = 0; k < 2100 && model.p(lo) > q; ++k) lo *= 0.5;
    for (int k = 0; k < 2100 && model.p(hi) < q; ++k) hi *= 2.0;
    if (model.p(lo) > q || model.p(hi) < q) throw OutOfRange("p^{-1}: bracket expansion failed");
  }

  double rho = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const PressureValue v = model.evaluate(rho);
    const double f = v.p - q;
    // residual converted to a relative density error
    if (std::abs(f) <= 0.1 * tol * rho * v.dp || f == 0.0) return rho;
    if (f > 0.0) {
      hi = rho;
    } else {
      lo = rho;
    }
    double next = v.dp > 0.0 ? rho - f / v.dp : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - rho) <= tol * rho) return next;
    rho = next;
  }
  return rho;
}

AdmissibilityReport validate_admissibility(const PressureModel& model, Interval range,
                                           std::size_t n_samples) {
  if (!(range.lo > 0.0) || !(range.hi >= range.lo) || n_samples < 2) {
    throw InvalidInput("validate_admissibility: need a positive range and n_samples >= 2");
  }
  AdmissibilityReport report{range, {}, false};
  for (double rho : linspace(range.lo, range.hi, n_samples)) {
    const PressureValue v = model.evaluate(rho);
    if (!(v.dp > 0.0)) report.violations.push_back({rho, AdmissibilityCondition::PositiveSlope});
    if (!(2.0 * v.dp + rho * v.d2p > 0.0)) {
      report.violations.push_back({rho, AdmissibilityCondition::PositiveCurvatureTerm});
    }
  }
  report.passed = report.violations.empty();
  return report;
}

namespace {

// ∫_a^b I(s)/s² ds via Simpson in t = ln s (integrand I(e^t) e^{-t}).
double curvature_integral(const PressureModel& model, double a, double b) {
  const double ta = std::log(a), tb = std::log(b);
  const double decades = std::max(1.0, (tb - ta) / std::log(10.0));
  std::size_t n = static_cast<std::size_t>(std::ceil(decades * 200.0));
  if (n % 2 == 1) ++n;
  const double h = (tb - ta) / static_cast<double>(n);
  std::vector<double> f(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = ta + h * static_cast<double>(k);
    const double s = std::exp(t);
    f[k] = model.curvature(s) / s;
  }
  return simpson(f, h);
}

}  // namespace

BlowupConditions check_blowup_conditions(const PressureModel& model, double delta,
                                         std::span<const double> cutoffs, double rho_max,
                                         double growth_factor) {
  if (!(delta > 0.0) || cutoffs.empty()) {
    throw InvalidInput("check_blowup_conditions: need delta > 0 and at least one cutoff");
  }
  BlowupConditions out;
  const double smallest = *std::min_element(cutoffs.begin(), cutoffs.end());

  // (a) sampled on a log grid over [smallest cutoff, rho_max].
  const std::size_t n = 2000;
  const double la = std::log(smallest), lb = std::log(rho_max);
  double prev = model.curvature(smallest);
  out.monotone_I = true;
  for (std::size_t k = 1; k < n; ++k) {
    const double rho = std::exp(la + (lb - la) * static_cast<double>(k) / static_cast<double>(n - 1));
    const double cur = model.curvature(rho);
    if (cur < prev - 1e-12 * std::max(1.0, std::abs(prev))) {
      out.monotone_I = false;
      break;
    }
    prev = cur;
  }

  // (b) partial integrals per cutoff.
  for (double c : cutoffs) {
    out.partial_integrals.push_back(c < delta ? curvature_integral(model, c, delta) : 0.0);
  }
  // Compare the last cutoff against the one two decades above it (or the first).
  const std::size_t last = cutoffs.size() - 1;
  std::size_t ref = 0;
  for (std::size_t k = 0; k < last; ++k) {
    if (cutoffs[k] >= 100.0 * cutoffs[last] * (1.0 - 1e-12)) ref = k;
  }
  const double f_ref = out.partial_integrals[ref];
  const double f_last = out.partial_integrals[last];
  out.integral_diverges = ref != last && f_ref > 0.0 && f_last > growth_factor * f_ref;
  return out;
}

}  // namespace awr
