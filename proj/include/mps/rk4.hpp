#pragma once

#include <cmath>

#include "mps/grid.hpp"

namespace mps {

namespace detail {

inline void ensure_finite(const real_vector& y, long step) {
  for (double v : y)
    if (!std::isfinite(v)) throw instability_error("time integration produced a non-finite value", step);
}

}  // namespace detail

// Workspace for the classical four-stage scheme; reusable across steps.
struct rk4_workspace {
  real_vector k, stage, acc;

  void resize(size_t n) {
    k.resize(n);
    stage.resize(n);
    acc.resize(n);
  }
};

// One classical RK4 step, in place. rhs(y, t, out) must write dy/dt into out;
// time-dependent terms (moving sources) are evaluated at each stage time.
// A non-finite state after the update throws instability_error with step_index.
template <class Rhs>
void rk4_step_inplace(real_vector& y, double t, double dt, Rhs&& rhs, rk4_workspace& ws,
                      long step_index = -1) {
  const size_t n = y.size();
  ws.resize(n);

  rhs(y, t, ws.k);
  for (size_t i = 0; i < n; ++i) {
    ws.acc[i] = y[i] + dt / 6.0 * ws.k[i];
    ws.stage[i] = y[i] + 0.5 * dt * ws.k[i];
  }
  rhs(ws.stage, t + 0.5 * dt, ws.k);
  for (size_t i = 0; i < n; ++i) {
    ws.acc[i] += dt / 3.0 * ws.k[i];
    ws.stage[i] = y[i] + 0.5 * dt * ws.k[i];
  }
  rhs(ws.stage, t + 0.5 * dt, ws.k);
  for (size_t i = 0; i < n; ++i) {
    ws.acc[i] += dt / 3.0 * ws.k[i];
    ws.stage[i] = y[i] + dt * ws.k[i];
  }
  rhs(ws.stage, t + dt, ws.k);
  for (size_t i = 0; i < n; ++i) y[i] = ws.acc[i] + dt / 6.0 * ws.k[i];

  detail::ensure_finite(y, step_index);
}

// Pure single-step form.
template <class Rhs>
real_vector rk4_step(const real_vector& y, double t, double dt, Rhs&& rhs) {
  real_vector out = y;
  rk4_workspace ws;
  rk4_step_inplace(out, t, dt, rhs, ws, 0);
  return out;
}

}  // namespace mps
