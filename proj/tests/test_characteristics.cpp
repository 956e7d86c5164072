#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <random>

#include "awr/characteristics.hpp"
#include "awr/fields.hpp"
#include "support.hpp"

using namespace awr;
using test::expr;

namespace {

Scenario log_rest(double eps = 0.1) {
  return test::constant_state(PressureModel::log_law(), 0.0, 1.0, eps);
}

Scenario log_linear(double slope, double eps = 0.1) {
  return test::make_scenario(PressureModel::log_law(), expr("linear", {slope}), PiecewiseLipschitzFn::constant(1.0), eps);
}

}  // namespace

TEST_CASE("mu field") {
  CHECK(mu_field(log_rest(), 0.5, 0.0) == doctest::Approx(-0.01).epsilon(1e-12));
  const auto g1 = test::constant_state(PressureModel::gamma_law(1.0), 0.0, 1.0, 0.1);
  CHECK(mu_field(g1, 0.5, 0.0) == doctest::Approx(-0.01).epsilon(1e-12));
  const auto g2 = test::constant_state(PressureModel::gamma_law(2.0), 0.3, 2.0, 0.2);
  const double at0 = mu_field(g2, -1.0, 0.3);
  for (double y : {-4.0, 0.0, 2.5}) CHECK(mu_field(g2, y, 0.3) == doctest::Approx(at0).epsilon(1e-12));
  // -eps^2 rho^2 p'(rho)/g0 = -0.04 * 4 * 4 / 2
  CHECK(at0 == doctest::Approx(-0.32).epsilon(1e-12));
  // a velocity far below Z0 needs a density beyond vacuum for the gamma law
  CHECK_THROWS_AS(mu_field(g1, 0.0, 1.0), VacuumEncountered);
}

TEST_CASE("forward traces") {
  SUBCASE("constant state gives a straight line") {
    const auto s = test::constant_state(PressureModel::gamma_law(2.0), 0.4, 2.0, 0.1);
    const auto tr = trace_forward(s, 0.7, 1.5);
    const double slope = 0.01 * 2.0 * 4.0;
    for (std::size_t k = 0; k < tr.times.size(); k += 97) {
      CHECK(tr.positions[k] == doctest::Approx(0.7 - slope * tr.times[k]).epsilon(1e-13));
      // Eulerian image moves with lambda1 = u - eps^2 rho p'
      CHECK(tr.eulerian_x[k] == doctest::Approx(0.7 + (0.4 - slope) * tr.times[k]).epsilon(1e-13));
      CHECK(tr.density[k] == doctest::Approx(2.0).epsilon(1e-13));
    }
    CHECK(tr.v_const == 0.4);
    CHECK_FALSE(tr.crossed_jump_at.has_value());
  }

  SUBCASE("rest state") {
    const auto tr = trace_forward(log_rest(), 0.02, 1.0);
    CHECK(tr.positions.back() == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(tr.times.back() == 1.0);
  }

  SUBCASE("crossing the density jump") {
    const auto s = test::make_scenario(PressureModel::log_law(), PiecewiseLipschitzFn::constant(0.0),
                                       PiecewiseLipschitzFn::step(0.0, 1.0, 2.0), 0.1);
    // both sides move at -eps^2 because g/g0 = 1 for the log law at rest
    const auto tr = trace_forward(s, 0.005, 1.0);
    REQUIRE(tr.crossed_jump_at.has_value());
    CHECK(*tr.crossed_jump_at == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(tr.positions.back() == doctest::Approx(-0.005).epsilon(1e-10));
    CHECK(tr.density.front() == doctest::Approx(2.0));
    CHECK(tr.density.back() == doctest::Approx(1.0));
  }

  SUBCASE("the log law accumulates I = tau") {
    const auto s = test::default_scenario(0.2);
    for (double xi : {-1.3, 0.0, 0.4, 2.0}) {
      const auto tr = trace_forward(s, xi, 0.9);
      for (std::size_t k = 0; k < tr.times.size(); k += 50) {
        CHECK(tr.I_integral[k] == doctest::Approx(tr.times[k]).epsilon(1e-12));
      }
    }
  }

  SUBCASE("Riemann invariant and monotone I along traces") {
    const auto s = test::make_scenario(PressureModel::gamma_law(1.5), expr("neg_tanh", {0.5}),
                                       PiecewiseLipschitzFn::step(0.2, 1.0, 1.5), 0.3);
    for (double xi : {-0.6, 0.1, 0.25, 1.1}) {
      const auto tr = trace_forward(s, xi, 0.8);
      for (std::size_t k = 0; k < tr.times.size(); ++k) {
        const double y = tr.positions[k];
        const Side side = tr.crossed_jump_at && tr.times[k] >= *tr.crossed_jump_at ? Side::Left : Side::Auto;
        const double q = (s.z0()(y, side) - tr.v_const) / s.eps2();
        CHECK(std::abs(s.model().p(tr.density[k]) - q) <= 10.0 * 1e-12 * std::max(1.0, std::abs(q)));
        if (k > 0) CHECK(tr.I_integral[k] >= tr.I_integral[k - 1]);
      }
    }
  }

  SUBCASE("fourth order in the step") {
    auto end_y = [](double steps) {
      Numerics n;
      n.ode_steps_per_unit_time = steps;
      const auto s = test::make_scenario(PressureModel::gamma_law(2.0), expr("neg_tanh"), PiecewiseLipschitzFn::constant(1.0),
                                         0.5, {-5.0, 5.0}, n);
      return trace_forward(s, 0.3, 0.6).positions.back();
    };
    const double a = end_y(10), b = end_y(20), c = end_y(40);
    const double ratio = (a - b) / (b - c);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
  }
}

TEST_CASE("feet") {
  SUBCASE("constant state inverts the line") {
    const auto s = test::constant_state(PressureModel::gamma_law(2.0), -0.2, 2.0, 0.1);
    const auto f = find_foot(s, 0.3, 1.25);
    CHECK(f.xi == doctest::Approx(0.3 + 0.08 * 1.25).epsilon(1e-12));
  }
  CHECK(find_foot(log_rest(), 0.4, 0.0).xi == 0.4);
  CHECK(find_foot(log_rest(), 0.0, 2.0).xi == doctest::Approx(0.02).epsilon(1e-12));

  SUBCASE("round trip and monotone feet") {
    const auto s = test::default_scenario(0.2);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ys(-3.0, 3.0);
    std::vector<double> batch;
    for (int k = 0; k < 40; ++k) batch.push_back(ys(rng));
    batch.push_back(0.0);
    std::sort(batch.begin(), batch.end());
    const double tau = 0.7;
    const auto feet = find_feet(s, batch, tau);
    for (std::size_t k = 0; k < batch.size(); ++k) {
      const auto st = trace_at(s, feet[k].xi, std::vector<double>{tau}).front();
      CHECK(std::abs(st.y - batch[k]) <= 1e-10);
      if (k > 0) CHECK(feet[k].xi > feet[k - 1].xi);
    }
    // single-target inversion agrees with the batch
    CHECK(find_foot(s, batch[3], tau).xi == doctest::Approx(feet[3].xi).epsilon(1e-10));
  }

  SUBCASE("Eulerian keyed feet") {
    const auto s = test::constant_state(PressureModel::log_law(), 0.5, 1.0, 0.1);
    const double xs[] = {-1.0, 0.25};
    const auto feet = solve_feet(s, xs, 2.0, FootKey::Eulerian);
    // X = xi + (c - eps^2) t
    CHECK(feet[0].xi == doctest::Approx(-1.0 - 0.49 * 2.0).epsilon(1e-12));
    CHECK(feet[1].end.x == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("Riccati gradient") {
  SUBCASE("flat velocity gives zero alpha") {
    const auto s = test::make_scenario(PressureModel::gamma_law(2.0), PiecewiseLipschitzFn::constant(1.0),
                                       expr("gauss_bump", {0.5, 0.0, 1.0, 1.0}), 0.1);
    const auto a = alpha_along(s, trace_forward(s, 0.3, 0.5));
    for (double v : a.alpha) CHECK(v == 0.0);
  }
  SUBCASE("log law with u0 = -y") {
    const auto s = log_linear(-1.0);
    CHECK(alpha0(s, 0.2) == doctest::Approx(-1.0).epsilon(1e-8));
    const auto a = alpha_along(s, trace_forward(s, 0.2, 0.9));
    for (std::size_t k = 0; k < a.times.size(); k += 60) {
      CHECK(a.alpha[k] == doctest::Approx(-1.0 / (1.0 - a.times[k])).epsilon(1e-7));
    }
    CHECK_THROWS_AS(alpha_from(s, -1.0, 1.0 - 1e-7), BlowupReached);
  }
  SUBCASE("rarefaction decays") {
    const auto s = log_linear(0.5);
    const auto a = alpha_along(s, trace_forward(s, 0.0, 2.0));
    for (std::size_t k = 1; k < a.alpha.size(); ++k) {
      CHECK(a.alpha[k] > 0.0);
      CHECK(a.alpha[k] < a.alpha[k - 1]);
    }
  }
}

TEST_CASE("blow-up times") {
  SUBCASE("log law, u0 = -y") {
    for (double eps : {0.3, 0.1}) {
      const auto s = test::make_scenario(PressureModel::log_law(), expr("linear", {-1.0}),
                                         expr("gauss_bump", {1.0, 0.0, 1.0, 1.0}), eps);
      for (double xi : {-1.0, 0.0, 0.7}) CHECK(blowup_time_for_foot(s, xi) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
  CHECK(blowup_time_for_foot(log_linear(0.0), 0.3) == kInfinity);
  CHECK(blowup_time_for_foot(log_linear(0.5), 0.3) == kInfinity);

  SUBCASE("global scan") {
    const auto grid = linspace(-5.0, 5.0, 101);
    auto r = global_blowup_time(test::default_scenario(0.1), grid);
    CHECK(r.T_b == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(r.argmin) < 0.1);
    for (double t : r.times) CHECK(r.T_b <= t);

    r = global_blowup_time(log_linear(-0.5), grid);
    CHECK(r.T_b == doctest::Approx(2.0).epsilon(1e-8));

    r = global_blowup_time(test::make_scenario(PressureModel::log_law(), expr("tanh"), PiecewiseLipschitzFn::constant(1.0), 0.1), grid);
    CHECK(r.T_b == kInfinity);
  }

  SUBCASE("linear gamma law approaches the pressureless time") {
    double prev = kInfinity;
    for (double eps : {0.2, 0.1, 0.05}) {
      const auto s = test::make_scenario(PressureModel::gamma_law(1.0), expr("linear", {-1.0}),
                                         PiecewiseLipschitzFn::constant(1.0), eps, {-2.0, 2.0});
      const double T = blowup_time_for_foot(s, 0.0);
      CHECK(T >= 1.0 - 1e-3);
      CHECK(T <= prev);
      prev = T;
    }
    CHECK(prev - 1.0 < 0.01);
  }
}
