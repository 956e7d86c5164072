#pragma once

#include <string>
#include <variant>
#include <vector>

#include "awr/numerics.hpp"

namespace awr {

/// Value of lim p(ρ) as ρ → 0⁺.
enum class LimitClass { FiniteZero, MinusInfinity };

/// p(ρ) = ρ^γ, γ ≥ 1.
struct GammaLaw {
  double gamma = 1.0;
};

/// p(ρ) = ln ρ.
struct LogLaw {};

/// Monotone cubic (Fritsch–Carlson) interpolant through (ρ, p) samples.
/// Defined on [rho.front(), rho.back()] only.
struct TabulatedLaw {
  std::vector<double> rho;
  std::vector<double> p;
  std::vector<double> slope;  // interpolant derivative at the nodes
};

/// p and its first two derivatives at one density.
struct PressureValue {
  double p = 0.0;
  double dp = 0.0;
  double d2p = 0.0;
};

/// Dimensionless pressure law p(ρ). The physical pressure is ε²p(ρ); the ε²
/// scaling is applied by callers. Immutable after construction.
class PressureModel {
 public:
  static PressureModel gamma_law(double gamma);
  static PressureModel log_law();
  /// Samples must have strictly increasing, positive ρ. p values are not
  /// required to be monotone; admissibility is checked separately.
  static PressureModel tabulated(std::vector<double> rho, std::vector<double> p);

  PressureValue evaluate(double rho) const;
  double p(double rho) const { return evaluate(rho).p; }
  double dp(double rho) const { return evaluate(rho).dp; }

  /// ρ with p(ρ) = q.
  double inverse(double q) const;

  /// I(ρ) = (2ρp′ + ρ²p″)/(ρp′)².
  double curvature(double rho) const;

  LimitClass limit_class() const;

  /// Infimum of p over its domain (0 for γ-laws, −∞ for ln, table minimum).
  double range_infimum() const;

  /// Closed density interval where the law is defined ((0, ∞) for built-ins).
  Interval domain() const;

  bool is_tabulated() const { return std::holds_alternative<TabulatedLaw>(law_); }
  std::string describe() const;

  const std::variant<GammaLaw, LogLaw, TabulatedLaw>& law() const { return law_; }

 private:
  explicit PressureModel(std::variant<GammaLaw, LogLaw, TabulatedLaw> law) : law_(std::move(law)) {}

  std::variant<GammaLaw, LogLaw, TabulatedLaw> law_;
};

PressureValue evaluate(const PressureModel& model, double rho);
double p_inverse(const PressureModel& model, double q);
double curvature_I(const PressureModel& model, double rho);

/// Safeguarded Newton iteration with automatic bracket expansion; relative
/// tolerance `tol`. Valid for every law; used directly for tabulated laws.
double p_inverse_newton(const PressureModel& model, double q, double tol = 1e-12);

enum class AdmissibilityCondition { PositiveSlope, PositiveCurvatureTerm };

struct AdmissibilityViolation {
  double rho;
  AdmissibilityCondition which;
};

struct AdmissibilityReport {
  Interval range_checked;
  std::vector<AdmissibilityViolation> violations;
  bool passed = false;
};

/// Samples p′ > 0 and 2p′ + ρp″ > 0 on a uniform grid of n_samples points.
AdmissibilityReport validate_admissibility(const PressureModel& model, Interval range,
                                           std::size_t n_samples);

struct BlowupConditions {
  bool monotone_I = false;
  bool integral_diverges = false;
  std::vector<double> partial_integrals;  // one per cutoff, ∫_cutoff^δ I(s)/s² ds
};

/// Sampled checks of: (a) I nondecreasing on (0, rho_max]; (b) ∫_0^δ I(s)/s² ds
/// diverges, declared when the partial integral grows by more than
/// `growth_factor` over the last two cutoff decades.
BlowupConditions check_blowup_conditions(const PressureModel& model, double delta,
                                         std::span<const double> cutoffs,
                                         double rho_max = 10.0, double growth_factor = 10.0);

}  // namespace awr
