#pragma once

#include "mps/grid.hpp"

namespace mps {

// Centered first-derivative operator of order p in {2, 4, 6}:
// (du)_j = (1/h) sum_{nu=1}^{p/2} a_nu (u_{j+nu} - u_{j-nu}), applied periodically.
// Its symbol is ik*P(kh) with real, even P(kappa) = (2/kappa) sum_nu a_nu sin(nu*kappa).
struct fd_operator {
  int order = 0;
  std::vector<double> stencil;  // a_1 .. a_{p/2}

  explicit fd_operator(int p);

  // P(kappa) on [0, pi]; P(0) = 1 by the removable-singularity limit.
  double symbol(double kappa) const;

  void apply(const real_vector& u, const periodic_grid& grid, real_vector& out) const;
  real_vector apply(const real_vector& u, const periodic_grid& grid) const;
};

inline double symbol_phat(const fd_operator& op, double kappa) { return op.symbol(kappa); }

}  // namespace mps
