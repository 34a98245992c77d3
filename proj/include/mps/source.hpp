#pragma once

#include <functional>
#include <memory>
#include <numbers>
#include <utility>

#include "mps/grid.hpp"
#include "mps/shape.hpp"

namespace mps {

// Source time function g(t); Gaussian by default, arbitrary callable allowed.
struct source_time_function {
  double sigma = 1.0;
  double t0 = 0.0;
  std::function<double(double)> custom;  // empty -> Gaussian(sigma, t0)

  static source_time_function gaussian(double sigma, double t0) {
    source_time_function g;
    g.sigma = sigma;
    g.t0 = t0;
    return g;
  }

  double operator()(double t) const {
    if (custom) return custom(t);
    double z = (t - t0) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
  }
};

// Source path x0(t) (and y0(t) in 2D) with its declared maximum speed.
struct trajectory {
  std::function<double(double)> x;
  std::function<double(double)> y;  // empty in 1D
  double v_max = 0.0;

  int dim() const { return y ? 2 : 1; }
};

// Central-difference speed sampling over [t_begin, t_end]; throws domain_error
// if the sampled speed exceeds v_max*(1 + 1e-6). Run once at harness start.
void check_trajectory_speed(const trajectory& traj, double t_begin, double t_end,
                            int samples = 2048);

// Rectangular window of half-width l = cl * h^w around the source position.
struct window_spec {
  double w = 0.5;
  double cl = 4.0;

  window_spec(double exponent, double prefactor) : w(exponent), cl(prefactor) {
    if (!(w > 0.0 && w < 1.0)) throw domain_error("window_spec: exponent must lie in (0, 1)");
    if (!(cl > 0.0)) throw domain_error("window_spec: prefactor must be positive");
  }

  double half_width(double h) const { return cl * std::pow(h, w); }
};

// Grid-space delta weights for a point source at x0, with unit discrete mass
// sum_j h delta_j = 1 and |delta_hat_k| = F(kh)/L independent of x0.
struct delta_vector {
  real_vector values;
  double x0 = 0.0;
  periodic_grid grid{1.0, 1};
  std::shared_ptr<const spectral_shape> shape;
  int nonzero_count = 0;  // M for a fresh delta; survivors after windowing
};

// Assemble delta_hat_k = e^{-ik x0} F(kh)/L over the grid's mode set and
// invert; x0 is reduced into [0, L) first. O(M log M).
delta_vector build_delta(const periodic_grid& grid, std::shared_ptr<const spectral_shape> shape,
                         double x0);

// Zero every entry whose periodic distance to x0 is >= the window half-width;
// the result records the surviving-entry count. Requires 2l < L.
delta_vector apply_window(const delta_vector& delta, const periodic_grid& grid, double x0,
                          const window_spec& win);

// Tensor-product factors of a 2D delta at (x0, y0); consumers form the
// rank-1 outer product lazily.
std::pair<delta_vector, delta_vector> build_delta_2d(const periodic_grid& grid_x,
                                                     const periodic_grid& grid_y,
                                                     std::shared_ptr<const spectral_shape> shape_x,
                                                     std::shared_ptr<const spectral_shape> shape_y,
                                                     double x0, double y0);

namespace detail {
// Reusable workspace for per-stage delta rebuilds inside solvers: F(kh)/L is
// fixed per (grid, shape), so each rebuild is a phase multiply plus one
// inverse transform. Produces values identical to build_delta.
class delta_builder {
 public:
  delta_builder(const periodic_grid& grid, std::shared_ptr<const spectral_shape> shape);

  // writes the delta into `out` (resized to M); returns the reduced x0
  double build(double x0, real_vector& out);

  const periodic_grid& grid() const { return grid_; }

 private:
  periodic_grid grid_;
  std::shared_ptr<const spectral_shape> shape_;
  real_vector f_over_L_;  // by FFT bin
  complex_vector bins_;
};
}  // namespace detail

}  // namespace mps
