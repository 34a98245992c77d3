#pragma once

#include "mps/fd.hpp"
#include "mps/grid.hpp"

namespace mps {

// Even compactly-supported spectral shape F: F(kappa) = Q(|kappa|) for
// |kappa| <= kstar and 0 beyond, where Q is the unique polynomial of degree
// m+s-1 with Q(0) = 1, Q^(nu)(0) = 0 for nu = 1..m-1 (moment conditions) and
// Q^(nu)(kstar) = 0 for nu = 0..s-1 (flatness at the cutoff).
struct spectral_shape {
  int m = 0;                   // moment-condition count
  int s = 0;                   // cutoff-flatness condition count
  double kstar = 0.0;          // cutoff wavenumber (units of kh), in (0, pi]
  std::vector<double> coeffs;  // monomial coefficients of Q in u = kappa/kstar

  // F(kappa); evaluated in the Bernstein basis, where every term is positive
  // (the monomial form cancels catastrophically for large m+s).
  double eval(double kappa) const;

  std::vector<double> bernstein;  // C(m+s-1, j) for j < m
};

// Smallest positive solution of P(kappa) = velocity_ratio on (0, pi],
// by bisection to absolute tolerance 1e-12. velocity_ratio = v_max/c.
double find_k_star(const fd_operator& op, double velocity_ratio);

spectral_shape build_shape(int m, int s, double kstar);

inline double eval_F(const spectral_shape& shape, double kappa) { return shape.eval(kappa); }

}  // namespace mps
