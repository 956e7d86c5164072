#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "awr/error.hpp"

namespace awr {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

/// n equally spaced points covering [lo, hi] inclusive (n >= 2).
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + h * static_cast<double>(i);
  out.back() = hi;
  return out;
}

/// Root of f on [a, b] where f(a) and f(b) have opposite signs (or one is zero).
/// Stops once the bracket is narrower than `tol`; returns the endpoint with the
/// smaller residual.
template <class F>
double bracketed_root(F&& f, double a, double b, double fa, double fb, double tol,
                      std::uintmax_t max_iter = 200) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw BracketFailure("bracketed_root: endpoints do not straddle a root");
  }
  auto stop = [tol](double lo, double hi) { return std::abs(hi - lo) <= tol; };
  std::uintmax_t iters = max_iter;
  auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, stop, iters);
  if (lo == hi) return lo;
  const double flo = f(lo);
  const double fhi = f(hi);
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

/// Composite Simpson rule on uniformly spaced samples (odd count >= 3).
inline double simpson(std::span<const double> values, double h) {
  const std::size_t n = values.size();
  if (n < 3 || n % 2 == 0) throw InvalidInput("simpson: need an odd number (>=3) of samples");
  double acc = values.front() + values.back();
  for (std::size_t i = 1; i + 1 < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
  return acc * h / 3.0;
}

/// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads. Each index
/// is handled by exactly one call; callers write to disjoint slots.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace awr
