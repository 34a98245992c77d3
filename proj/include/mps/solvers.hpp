#pragma once

#include <cmath>
#include <optional>

#include "mps/fd.hpp"
#include "mps/source.hpp"

namespace mps {

struct medium {
  double c = 1.0;
  double K = 1.0;
  double rho = 1.0;

  static medium from_wave_speed(double c) { return {c, c * c, 1.0}; }
  static medium from_bulk_density(double K, double rho) {
    return {std::sqrt(K / rho), K, rho};
  }

  void validate() const {
    if (!(c > 0.0)) throw domain_error("medium: wave speed must be positive");
    if (std::abs(c * c - K / rho) > 1e-12 * c * c)
      throw domain_error("medium: c^2 != K/rho");
  }
};

// Shape selection policy: q = 0 requests the default q = m = s = 2p+2; the
// cutoff wavenumber is computed from v_max * vmax_factor (a safety factor
// gamma >= 1 may widen the protected band).
struct shape_policy {
  int q = 0;
  double vmax_factor = 1.0;
};

struct solver_config {
  periodic_grid grid{1.0, 1};
  std::optional<periodic_grid> grid_y;  // 2D solves; defaults to `grid`
  int order = 4;
  medium med;
  source_time_function g;
  trajectory traj;
  shape_policy shape;
  std::optional<window_spec> window;  // nullopt = global (unwindowed) source
  double cfl = 0.2;
  double t_end = 1.0;

  void validate() const {
    med.validate();
    if (!(cfl > 0.0)) throw domain_error("solver_config: cfl must be positive");
    if (!(t_end > 0.0)) throw domain_error("solver_config: t_end must be positive");
  }
};

struct solution_field {
  real_vector u;                     // advection
  real_vector theta, vx, vy;         // acoustic fields (vy empty in 1D)
  double time = 0.0;
  int Mx = 0, My = 0;                // 2D field extents (theta[iy*Mx + ix])
  double boundary_level = 0.0;       // 2D: max |field| near the seam / field max
  bool boundary_contaminated = false;
};

// u_t + c u_x = g(t) delta(x - x0(t)) on a periodic domain, RK4 in time with
// the source rebuilt at every stage time.
solution_field solve_advection_1d(const solver_config& config);

// Exact solution of the same problem for the straight-line path
// x0(t) = x_start + v0 t with u(x, 0) = 0.
double exact_advection_solution(double x, double t, double c, double v0,
                                const source_time_function& g, double x_start = 1.0);

// rho v_t + theta_x = 0, (1/K) theta_t + v_x = g(t) delta(x - x0(t)).
solution_field solve_wave_1d(const solver_config& config);

// 2D acoustic system with the tensor-product source on the pressure equation.
// Periodic domain; the configured trajectory must keep the wavefield away
// from the domain edge (checked post hoc, reported in the result).
solution_field solve_wave_2d(const solver_config& config);

// Resolved q and cutoff wavenumber for a config (exposed for reports).
int resolve_q(const solver_config& config);
double resolve_k_star(const solver_config& config);

}  // namespace mps
