#include "mps/source.hpp"

#include <cmath>

#include "mps/spectral.hpp"

namespace mps {

void check_trajectory_speed(const trajectory& traj, double t_begin, double t_end, int samples) {
  if (!traj.x) throw domain_error("trajectory: missing x component");
  const double dt = (t_end - t_begin) / samples;
  const double tol = traj.v_max * (1.0 + 1e-6) + 1e-300;
  for (int i = 0; i <= samples; ++i) {
    double t = t_begin + i * dt;
    double vx = (traj.x(t + dt) - traj.x(t - dt)) / (2.0 * dt);
    double vy = traj.y ? (traj.y(t + dt) - traj.y(t - dt)) / (2.0 * dt) : 0.0;
    if (std::hypot(vx, vy) > tol)
      throw domain_error("trajectory: sampled speed exceeds declared v_max");
  }
}

namespace detail {

delta_builder::delta_builder(const periodic_grid& grid, std::shared_ptr<const spectral_shape> shape)
    : grid_(grid), shape_(std::move(shape)), f_over_L_(grid.M), bins_(grid.M) {
  for (int b = 0; b < grid_.M; ++b) {
    int m = b <= grid_.M / 2 ? b : b - grid_.M;
    f_over_L_[b] = shape_->eval(grid_.wavenumber(m) * grid_.h) / grid_.L;
  }
}

double delta_builder::build(double x0, real_vector& out) {
  const int M = grid_.M;
  double xr = std::fmod(x0, grid_.L);
  if (xr < 0.0) xr += grid_.L;
  for (int b = 0; b < M; ++b) {
    int m = b <= M / 2 ? b : b - M;
    double phase = -grid_.wavenumber(m) * xr;
    bins_[b] = std::polar(f_over_L_[b], phase);
  }
  if (M % 2 == 0) bins_[M / 2].imag(0.0);  // unpaired Nyquist mode of a real vector
  fft_backward(bins_);
  out.resize(M);
  double max_re = 0.0, max_im = 0.0;
  for (int j = 0; j < M; ++j) {
    out[j] = bins_[j].real();
    max_re = std::max(max_re, std::abs(bins_[j].real()));
    max_im = std::max(max_im, std::abs(bins_[j].imag()));
  }
  if (max_im > 1e-12 * max_re)
    throw construction_error("build_delta: imaginary residue above tolerance");
  return xr;
}

}  // namespace detail

delta_vector build_delta(const periodic_grid& grid, std::shared_ptr<const spectral_shape> shape,
                         double x0) {
  detail::delta_builder builder(grid, shape);
  delta_vector d;
  d.grid = grid;
  d.shape = std::move(shape);
  d.x0 = builder.build(x0, d.values);
  d.nonzero_count = grid.M;
  return d;
}

delta_vector apply_window(const delta_vector& delta, const periodic_grid& grid, double x0,
                          const window_spec& win) {
  if (!(grid == delta.grid)) throw dimension_error("apply_window: grid mismatch");
  const double l = win.half_width(grid.h);
  if (2.0 * l >= grid.L) throw domain_error("apply_window: window must be narrower than the domain");
  delta_vector out = delta;
  out.nonzero_count = 0;
  for (int j = 0; j < grid.M; ++j) {
    double dist = std::abs(grid.point(j) - x0);
    dist = std::min(dist, grid.L - dist);
    if (dist >= l)
      out.values[j] = 0.0;
    else
      ++out.nonzero_count;
  }
  return out;
}

std::pair<delta_vector, delta_vector> build_delta_2d(const periodic_grid& grid_x,
                                                     const periodic_grid& grid_y,
                                                     std::shared_ptr<const spectral_shape> shape_x,
                                                     std::shared_ptr<const spectral_shape> shape_y,
                                                     double x0, double y0) {
  return {build_delta(grid_x, std::move(shape_x), x0),
          build_delta(grid_y, std::move(shape_y), y0)};
}

}  // namespace mps
