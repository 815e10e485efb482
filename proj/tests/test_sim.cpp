#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rkbal/sim.hpp"

using namespace rkbal;

namespace {

ControlSystem scalar_lag() { return linear_system(-Mat::Identity(1, 1), Mat::Identity(1, 1), Mat::Identity(1, 1)); }

double decay_error(double h) {
  const auto tr = integrate(scalar_lag(), Vec::Ones(1), zero_signal(), SimSettings{1.0, 10, h});
  return std::abs(tr.states(9, 0) - std::exp(-1.0));
}

}  // namespace

TEST_CASE("exponential decay") {
  const auto tr = integrate(scalar_lag(), Vec::Ones(1), zero_signal(), SimSettings{1.0, 100, 1e-3});
  CHECK(tr.size() == 100);
  CHECK(tr.times(99) == doctest::Approx(1.0));
  CHECK(std::abs(tr.states(99, 0) - std::exp(-1.0)) <= 1e-8);
}

TEST_CASE("equilibrium stays at zero") {
  for (const auto& s : {system_2d(), system_7d()}) {
    const auto tr = integrate(s, Vec::Zero(s.n), zero_signal(), SimSettings{1.0, 50, 1e-3});
    CHECK(tr.states.norm() == 0.0);
  }
}

TEST_CASE("RK4 convergence order") {
  const double ratio = decay_error(0.1) / decay_error(0.05);
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("step halving on the 2d system") {
  const auto s = system_2d();
  const auto a = integrate(s, Vec::Zero(2), test_input(),
                           SimSettings{5.0, 800, compatible_step(5.0, 800, 1e-3)});
  const auto b = integrate(s, Vec::Zero(2), test_input(),
                           SimSettings{5.0, 800, compatible_step(5.0, 800, 0.5e-3)});
  const Vec xa = a.states.row(799), xb = b.states.row(799);
  CHECK((xa - xb).norm() <= 1e-6 * xb.norm());
}

TEST_CASE("compatible step") {
  const double h = compatible_step(5.0, 800, 1e-3);
  CHECK(h <= 1e-3);
  const double k = 5.0 / 800 / h;
  CHECK(std::abs(k - std::round(k)) < 1e-9);
  CHECK(compatible_step(1.0, 100, 1e-3) == doctest::Approx(1e-3));
  CHECK_THROWS_AS(integrate(scalar_lag(), Vec::Ones(1), zero_signal(), SimSettings{1.0, 100, 3e-3}),
                  std::invalid_argument);
}

TEST_CASE("divergence is reported with its time") {
  ControlSystem blow{1, 1, 1, [](const Vec& x, const Vec&) -> Vec { return x.array().square(); },
                     [](const Vec& x) -> Vec { return x; }, "blowup"};
  try {
    integrate(blow, Vec::Ones(1), zero_signal(), SimSettings{2.0, 20, 1e-3});
    FAIL("expected divergence");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("t =") != std::string::npos);
  }
}

TEST_CASE("impulse responses") {
  const auto lag = scalar_lag();
  const SimSettings s{5.0, 500, 1e-3};
  const auto runs = impulse_responses(lag, s);
  REQUIRE(runs.size() == 1);
  for (Eigen::Index i = 0; i < 500; i += 37) {
    CHECK(std::abs(runs[0].states(i, 0) - std::exp(-runs[0].times(i))) <= 2e-3);
  }
  const Mat I = Mat::Identity(2, 2);
  CHECK(impulse_responses(linear_system(-I, I, I), s).size() == 2);
}

TEST_CASE("output responses") {
  const SimSettings s{5.0, 500, 1e-3};
  const auto runs = output_responses(scalar_lag(), s);
  REQUIRE(runs.size() == 1);
  for (Eigen::Index i = 0; i < 500; i += 37) {
    CHECK(std::abs(runs[0].outputs(i, 0) - std::exp(-runs[0].times(i))) <= 1e-8);
  }
  const auto seven = output_responses(system_7d(), SimSettings{5.0, 800, 1e-3 * 0.625});
  REQUIRE(seven.size() == 7);
  for (const auto& r : seven) {
    // x0 = e4 leaves x3 at zero, so that response is identically zero.
    if (r.outputs.norm() == 0.0) continue;
    CHECK(r.outputs.row(r.size() - 1).norm() < r.outputs.row(0).norm());
  }
}

TEST_CASE("determinism and csv") {
  const auto a = integrate(system_2d(), Vec::Zero(2), test_input(), SimSettings{1.0, 100, 1e-3});
  const auto b = integrate(system_2d(), Vec::Zero(2), test_input(), SimSettings{1.0, 100, 1e-3});
  CHECK((a.states.array() == b.states.array()).all());
  std::ostringstream os;
  write_trajectory_csv(os, a);
  const std::string text = os.str();
  CHECK(text.rfind("t,x1,x2,y1\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 101);
}
