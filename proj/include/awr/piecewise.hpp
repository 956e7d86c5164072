#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "awr/numerics.hpp"

namespace awr {

/// Which one-sided value to return at a jump. Auto picks the right limit.
enum class Side { Left, Right, Auto };

/// Scalar function of one variable, Lipschitz between a finite ordered set of
/// jump points. Segment k covers (jumps[k-1], jumps[k]); each segment
/// evaluator stays valid slightly beyond its interval so one-sided limits and
/// one-sided differences are available at the jumps.
class PiecewiseLipschitzFn {
 public:
  using Segment = std::function<double(double)>;

  PiecewiseLipschitzFn() = default;
  PiecewiseLipschitzFn(std::vector<double> jumps, std::vector<Segment> segments);

  static PiecewiseLipschitzFn constant(double c);
  static PiecewiseLipschitzFn from_segment(Segment f);
  /// Value `left` for x < x0, `right` for x > x0.
  static PiecewiseLipschitzFn step(double x0, double left, double right);
  /// Linear interpolation through (x, y) with constant extension past the ends.
  /// A repeated abscissa marks a jump: the first y is the left limit, the
  /// second the right limit.
  static PiecewiseLipschitzFn table(const std::vector<double>& x, const std::vector<double>& y);
  /// Built-in closed forms: const(c), linear(a, b=0), neg_tanh(A=1, L=1),
  /// tanh(A=1, L=1), gauss_bump(A, x0, w, base=0).
  static PiecewiseLipschitzFn expression(const std::string& name, const std::vector<double>& params);

  /// Restricts evaluation to `window`; outside it eval throws OutsideWindow.
  PiecewiseLipschitzFn restricted_to(Interval window) const;

  double operator()(double x, Side side = Side::Auto) const;

  /// Segment containing x; at a jump, Left picks the segment ending there.
  std::size_t segment_of(double x, Side side = Side::Auto) const;
  /// Evaluates segment k's closed form at x (no range check).
  double eval_segment(std::size_t k, double x) const { return segments_[k](x); }
  /// Centered difference of segment k at x with step h.
  double segment_slope(std::size_t k, double x, double h) const;
  /// One-sided difference quotient taken inside the segment that owns x.
  double derivative(double x, double h, Side side = Side::Auto) const;

  const std::vector<double>& jumps() const { return jumps_; }
  std::size_t segment_count() const { return segments_.size(); }
  Interval segment_interval(std::size_t k) const;
  std::pair<double, double> one_sided(std::size_t jump_index) const;
  const std::optional<Interval>& domain() const { return domain_; }

 private:
  std::vector<double> jumps_;
  std::vector<Segment> segments_;
  std::optional<Interval> domain_;
};

/// Combines two functions with the same jump set segment by segment.
PiecewiseLipschitzFn combine(const PiecewiseLipschitzFn& a, const PiecewiseLipschitzFn& b,
                             std::function<double(double, double)> op);

/// Parses "expr:name(p1,p2,...)", "step:x0,left,right", "const:c" or
/// "table:<path>" (two numeric columns, optional header).
PiecewiseLipschitzFn parse_function_spec(const std::string& spec);

}  // namespace awr
