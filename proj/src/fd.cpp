#include "mps/fd.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mps {

namespace {

std::vector<double> stencil_for(int p) {
  switch (p) {
    case 2: return {1.0 / 2.0};
    case 4: return {2.0 / 3.0, -1.0 / 12.0};
    case 6: return {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
    default: throw domain_error("fd_operator: order must be 2, 4, or 6");
  }
}

}  // namespace

fd_operator::fd_operator(int p) : order(p), stencil(stencil_for(p)) {
  // The cutoff-wavenumber bisection and the shape construction both assume a
  // strictly decreasing symbol on (0, pi]; sampled check at construction.
  // Adjacent samples wobble by a few ulps where the symbol is flat near 0,
  // so ties within rounding noise are tolerated there and strictness is
  // enforced at a coarser stride.
  const int n = 10000, stride = 100;
  const double slack = 16.0 * std::numeric_limits<double>::epsilon();
  double prev = symbol(0.0);
  double prev_strict = prev;
  for (int i = 1; i <= n; ++i) {
    double cur = symbol(std::numbers::pi * i / n);
    if (cur > prev + slack * std::abs(prev))
      throw construction_error("fd_operator: symbol is not decreasing");
    if (i % stride == 0) {
      if (!(cur < prev_strict))
        throw construction_error("fd_operator: symbol is not strictly decreasing");
      prev_strict = cur;
    }
    prev = cur;
  }
}

double fd_operator::symbol(double kappa) const {
  if (kappa < 0.0 || kappa > std::numbers::pi + 1e-15)
    throw domain_error("fd_operator::symbol: kappa must lie in [0, pi]");
  if (kappa == 0.0) return 1.0;
  double acc = 0.0;
  for (size_t nu = 0; nu < stencil.size(); ++nu) acc += stencil[nu] * std::sin((nu + 1) * kappa);
  return 2.0 * acc / kappa;
}

void fd_operator::apply(const real_vector& u, const periodic_grid& grid, real_vector& out) const {
  const int M = grid.M;
  if (static_cast<int>(u.size()) != M) throw dimension_error("fd_operator::apply: length mismatch");
  if (M < order + 1) throw dimension_error("fd_operator::apply: grid too small for stencil");
  out.resize(M);
  const int R = static_cast<int>(stencil.size());
  const double inv_h = 1.0 / grid.h;
  for (int j = 0; j < R; ++j) {
    double acc = 0.0;
    for (int nu = 1; nu <= R; ++nu)
      acc += stencil[nu - 1] * (u[(j + nu) % M] - u[(j - nu + M) % M]);
    out[j] = acc * inv_h;
  }
  for (int j = R; j < M - R; ++j) {
    double acc = 0.0;
    for (int nu = 1; nu <= R; ++nu) acc += stencil[nu - 1] * (u[j + nu] - u[j - nu]);
    out[j] = acc * inv_h;
  }
  for (int j = M - R; j < M; ++j) {
    double acc = 0.0;
    for (int nu = 1; nu <= R; ++nu)
      acc += stencil[nu - 1] * (u[(j + nu) % M] - u[(j - nu + M) % M]);
    out[j] = acc * inv_h;
  }
}

real_vector fd_operator::apply(const real_vector& u, const periodic_grid& grid) const {
  real_vector out;
  apply(u, grid, out);
  return out;
}

}  // namespace mps
