#include <cmath>
#include <vector>

#include "doctest.h"
#include "mps/rk4.hpp"
#include "oracles.hpp"

using namespace mps;

TEST_CASE("zero right-hand side leaves the state untouched") {
  real_vector y{1.0, -2.0, 0.5};
  real_vector before = y;
  rk4_workspace ws;
  auto rhs = [](const real_vector&, double, real_vector& out) {
    std::fill(out.begin(), out.end(), 0.0);
  };
  for (int n = 0; n < 10; ++n) rk4_step_inplace(y, 0.1 * n, 0.1, rhs, ws, n);
  CHECK(y == before);
}

TEST_CASE("linear decay reproduces the degree-4 Taylor growth factor") {
  const double lambda_dt = -0.1;
  real_vector y{1.0};
  auto rhs = [&](const real_vector& s, double, real_vector& out) { out[0] = -0.1 * s[0]; };
  rk4_workspace ws;
  rk4_step_inplace(y, 0.0, 1.0, rhs, ws, 0);  // dt = 1 so lambda*dt = -0.1
  double taylor = 1.0 + lambda_dt + lambda_dt * lambda_dt / 2.0 +
                  lambda_dt * lambda_dt * lambda_dt / 6.0 +
                  lambda_dt * lambda_dt * lambda_dt * lambda_dt / 24.0;
  CHECK(std::abs(y[0] - taylor) < 1e-15);
}

TEST_CASE("pure quadrature converges at fourth order") {
  // y' = e^t has no y dependence, so the step is a fixed quadrature rule
  auto run = [](int n) {
    real_vector y{0.0};
    rk4_workspace ws;
    auto rhs = [](const real_vector&, double t, real_vector& out) { out[0] = std::exp(t); };
    const double dt = 1.0 / n;
    for (int i = 0; i < n; ++i) rk4_step_inplace(y, i * dt, dt, rhs, ws, i);
    return std::abs(y[0] - (std::exp(1.0) - 1.0));
  };
  const double e8 = run(8), e16 = run(16);
  const double order = std::log2(e8 / e16);
  CHECK(order > 3.8);
  CHECK(order < 4.2);
}

TEST_CASE("forced scalar problem converges at fourth order globally") {
  // y' = -y + sin t, y(0) = 0  =>  y = (sin t - cos t + e^-t) / 2
  auto run = [](int n) {
    real_vector y{0.0};
    rk4_workspace ws;
    auto rhs = [](const real_vector& s, double t, real_vector& out) {
      out[0] = -s[0] + std::sin(t);
    };
    const double dt = 2.0 / n;
    for (int i = 0; i < n; ++i) rk4_step_inplace(y, i * dt, dt, rhs, ws, i);
    double exact = (std::sin(2.0) - std::cos(2.0) + std::exp(-2.0)) / 2.0;
    return std::abs(y[0] - exact);
  };
  const double order = std::log2(run(16) / run(32));
  CHECK(order > 3.8);
  CHECK(order < 4.2);
}

TEST_CASE("non-finite states raise instability with the step index") {
  real_vector y{1.0};
  rk4_workspace ws;
  auto rhs = [](const real_vector& s, double t, real_vector& out) {
    out[0] = t > 0.45 ? std::nan("") : s[0];
  };
  long failed_at = -1;
  try {
    for (long n = 0; n < 10; ++n) rk4_step_inplace(y, 0.1 * n, 0.1, rhs, ws, n);
  } catch (const instability_error& e) {
    failed_at = e.step;
    CHECK(std::string(e.what()).find("at step 4") != std::string::npos);
  }
  // the first stage past t = 0.45 is the midpoint of the step from t = 0.4
  CHECK(failed_at == 4);
}

TEST_CASE("single-step helper matches the in-place form") {
  real_vector y{0.3, -0.7};
  auto rhs = [](const real_vector& s, double t, real_vector& out) {
    out[0] = s[1] + t;
    out[1] = -s[0];
  };
  real_vector a = rk4_step(y, 0.2, 0.05, rhs);
  real_vector b = y;
  rk4_workspace ws;
  rk4_step_inplace(b, 0.2, 0.05, rhs, ws, 0);
  CHECK(a == b);
}
