#include "awr/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace awr {
namespace {

double lerp_table(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (at <= x.front()) return y.front();
  if (at >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), at);
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  const double s = (at - x[k - 1]) / (x[k] - x[k - 1]);
  return y[k - 1] + s * (y[k] - y[k - 1]);
}

// Piece of a table between two jumps: linear interpolation inside, linear
// extrapolation past an end that borders a jump, constant past a free end.
PiecewiseLipschitzFn::Segment table_piece(std::vector<double> x, std::vector<double> y,
                                          bool extrapolate_left, bool extrapolate_right) {
  return [x = std::move(x), y = std::move(y), extrapolate_left, extrapolate_right](double at) {
    const std::size_t n = x.size();
    if (n == 1) return y[0];
    if (at < x.front() && extrapolate_left) {
      return y[0] + (at - x[0]) * (y[1] - y[0]) / (x[1] - x[0]);
    }
    if (at > x.back() && extrapolate_right) {
      return y[n - 1] + (at - x[n - 1]) * (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
    }
    return lerp_table(x, y, at);
  };
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_number(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(trim(text), &used);
    if (used != trim(text).size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot read number '" + text + "' in " + context);
  }
}

}  // namespace

PiecewiseLipschitzFn::PiecewiseLipschitzFn(std::vector<double> jumps, std::vector<Segment> segments)
    : jumps_(std::move(jumps)), segments_(std::move(segments)) {
  if (segments_.size() != jumps_.size() + 1) {
    throw InvalidInput("piecewise function needs one more segment than jumps");
  }
  for (std::size_t k = 1; k < jumps_.size(); ++k) {
    if (!(jumps_[k] > jumps_[k - 1])) throw InvalidInput("jump locations must increase strictly");
  }
}

PiecewiseLipschitzFn PiecewiseLipschitzFn::constant(double c) {
  return from_segment([c](double) { return c; });
}

PiecewiseLipschitzFn PiecewiseLipschitzFn::from_segment(Segment f) {
  return PiecewiseLipschitzFn({}, {std::move(f)});
}

PiecewiseLipschitzFn PiecewiseLipschitzFn::step(double x0, double left, double right) {
  if (left == right) return constant(left);
  return PiecewiseLipschitzFn({x0}, {[left](double) { return left; }, [right](double) { return right; }});
}

PiecewiseLipschitzFn PiecewiseLipschitzFn::table(const std::vector<double>& x,
                                                 const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw InvalidInput("table needs matching non-empty columns");
  std::vector<double> jumps;
  std::vector<std::vector<double>> xs(1), ys(1);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k > 0 && x[k] < x[k - 1]) throw InvalidInput("table abscissae must be nondecreasing");
    if (k > 0 && x[k] == x[k - 1]) {
      if (!jumps.empty() && jumps.back() == x[k]) {
        throw InvalidInput("table abscissa repeated more than twice");
      }
      jumps.push_back(x[k]);
      xs.emplace_back();
      ys.emplace_back();
    }
    xs.back().push_back(x[k]);
    ys.back().push_back(y[k]);
  }
  std::vector<Segment> segs;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    segs.push_back(table_piece(xs[k], ys[k], k > 0, k + 1 < xs.size()));
  }
  return PiecewiseLipschitzFn(std::move(jumps), std::move(segs));
}

PiecewiseLipschitzFn PiecewiseLipschitzFn::expression(const std::string& name,
                                                      const std::vector<double>& params) {
  auto arg = [&](std::size_t k, double fallback) { return k < params.size() ? params[k] : fallback; };
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (params.size() < lo || params.size() > hi) {
      throw ConfigError("wrong number of parameters for expression '" + name + "'");
    }
  };
  if (name == "const") {
    need(1, 1);
    return constant(params[0]);
  }
  if (name == "linear") {
    need(1, 2);
    const double a = params[0], b = arg(1, 0.0);
    return from_segment([a, b](double x) { return a * x + b; });
  }
  if (name == "neg_tanh" || name == "tanh") {
    need(0, 2);
    const double amp = (name == "tanh" ? 1.0 : -1.0) * arg(0, 1.0);
    const double len = arg(1, 1.0);
    if (!(len > 0.0)) throw ConfigError("tanh length scale must be positive");
    return from_segment([amp, len](double x) { return amp * std::tanh(x / len); });
  }
  if (name == "gauss_bump") {
    need(3, 4);
    const double amp = params[0], x0 = params[1], w = params[2], base = arg(3, 0.0);
    if (!(w > 0.0)) throw ConfigError("gauss_bump width must be positive");
    return from_segment([=](double x) {
      const double s = (x - x0) / w;
      return base + amp * std::exp(-s * s);
    });
  }
  throw ConfigError("unknown expression '" + name + "'");
}

PiecewiseLipschitzFn PiecewiseLipschitzFn::restricted_to(Interval window) const {
  PiecewiseLipschitzFn copy = *this;
  copy.domain_ = window;
  return copy;
}

std::size_t PiecewiseLipschitzFn::segment_of(double x, Side side) const {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - jumps_.begin());
  if (it != jumps_.end() && *it == x && side != Side::Left) ++k;
  return k;
}

double PiecewiseLipschitzFn::operator()(double x, Side side) const {
  if (domain_ && !domain_->contains(x)) {
    std::ostringstream msg;
    msg << "x = " << x << " outside window [" << domain_->lo << ", " << domain_->hi << "]";
    throw OutsideWindow(msg.str());
  }
  return segments_[segment_of(x, side)](x);
}

double PiecewiseLipschitzFn::segment_slope(std::size_t k, double x, double h) const {
  return (segments_[k](x + h) - segments_[k](x - h)) / (2.0 * h);
}

double PiecewiseLipschitzFn::derivative(double x, double h, Side side) const {
  return segment_slope(segment_of(x, side), x, h);
}

Interval PiecewiseLipschitzFn::segment_interval(std::size_t k) const {
  return {k == 0 ? -kInfinity : jumps_[k - 1], k == jumps_.size() ? kInfinity : jumps_[k]};
}

std::pair<double, double> PiecewiseLipschitzFn::one_sided(std::size_t jump_index) const {
  const double x = jumps_.at(jump_index);
  return {segments_[jump_index](x), segments_[jump_index + 1](x)};
}

PiecewiseLipschitzFn combine(const PiecewiseLipschitzFn& a, const PiecewiseLipschitzFn& b,
                             std::function<double(double, double)> op) {
  std::vector<double> jumps = a.jumps();
  jumps.insert(jumps.end(), b.jumps().begin(), b.jumps().end());
  std::sort(jumps.begin(), jumps.end());
  jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());

  std::vector<PiecewiseLipschitzFn::Segment> segs;
  for (std::size_t k = 0; k <= jumps.size(); ++k) {
    // A representative point strictly inside combined segment k.
    double mid;
    if (jumps.empty()) {
      mid = 0.0;
    } else if (k == 0) {
      mid = jumps.front() - 1.0;
    } else if (k == jumps.size()) {
      mid = jumps.back() + 1.0;
    } else {
      mid = 0.5 * (jumps[k - 1] + jumps[k]);
    }
    const std::size_t ka = a.segment_of(mid), kb = b.segment_of(mid);
    segs.push_back([a, b, ka, kb, op](double x) {
      return op(a.eval_segment(ka, x), b.eval_segment(kb, x));
    });
  }
  return PiecewiseLipschitzFn(std::move(jumps), std::move(segs));
}

PiecewiseLipschitzFn parse_function_spec(const std::string& raw) {
  const std::string spec = trim(raw);
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("function spec '" + spec + "' lacks a kind prefix");
  const std::string kind = spec.substr(0, colon);
  const std::string body = trim(spec.substr(colon + 1));

  if (kind == "const") return PiecewiseLipschitzFn::constant(to_number(body, spec));
  if (kind == "step") {
    const auto parts = split(body, ',');
    if (parts.size() != 3) throw ConfigError("step spec needs x0,left,right: '" + spec + "'");
    return PiecewiseLipschitzFn::step(to_number(parts[0], spec), to_number(parts[1], spec),
                                      to_number(parts[2], spec));
  }
  if (kind == "expr") {
    const auto open = body.find('(');
    const auto close = body.rfind(')');
    std::string name = body;
    std::vector<double> params;
    if (open != std::string::npos) {
      if (close == std::string::npos || close < open) throw ConfigError("unbalanced parentheses in '" + spec + "'");
      name = body.substr(0, open);
      const std::string inner = trim(body.substr(open + 1, close - open - 1));
      if (!inner.empty()) {
        for (const auto& p : split(inner, ',')) params.push_back(to_number(p, spec));
      }
    }
    return PiecewiseLipschitzFn::expression(trim(name), params);
  }
  if (kind == "table") {
    std::ifstream in(body);
    if (!in) throw ConfigError("cannot open table '" + body + "'");
    std::vector<double> xs, ys;
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      const auto cols = split(line, ',');
      if (cols.size() != 2) throw ConfigError("table '" + body + "' needs two columns per row");
      try {
        xs.push_back(std::stod(cols[0]));
        ys.push_back(std::stod(cols[1]));
      } catch (const std::exception&) {
        if (xs.empty()) continue;  // header row
        throw ConfigError("non-numeric row in table '" + body + "'");
      }
    }
    try {
      return PiecewiseLipschitzFn::table(xs, ys);
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("table '") + body + "': " + e.what());
    }
  }
  throw ConfigError("unknown function kind '" + kind + "'");
}

}  // namespace awr
