#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "mps/errors.hpp"

namespace mps {

using real_vector = std::vector<double>;
using complex_vector = std::vector<std::complex<double>>;

// Equidistant periodic grid on [0, L): M points x_j = j*h with h = L/M.
// The resolvable integer mode indices are m in [mode_min, mode_max], with
// physical wavenumber k = 2*pi*m/L. For even M this includes the Nyquist
// index m = M/2 (kh = pi).
struct periodic_grid {
  double L;
  int M;
  double h;

  periodic_grid(double length, int points) : L(length), M(points), h(length / points) {
    if (!(length > 0.0)) throw domain_error("periodic_grid: domain length must be positive");
    if (points < 1) throw domain_error("periodic_grid: point count must be positive");
  }

  double point(int j) const { return h * j; }
  int mode_min() const { return -((M - 1) / 2); }
  int mode_max() const { return M / 2; }
  double wavenumber(int m) const { return 2.0 * std::numbers::pi * m / L; }
  bool operator==(const periodic_grid& o) const { return L == o.L && M == o.M; }
};

// Fourier coefficients keyed by integer mode index m (k = 2*pi*m/L),
// stored in natural order m = mode_min..mode_max rather than FFT bin order.
struct mode_map {
  int M = 0;
  complex_vector coeff;

  mode_map() = default;
  explicit mode_map(int points) : M(points), coeff(points) {}

  int mode_min() const { return -((M - 1) / 2); }
  int mode_max() const { return M / 2; }

  std::complex<double>& at(int m) { return coeff[index_of(m)]; }
  const std::complex<double>& at(int m) const { return coeff[index_of(m)]; }

  int index_of(int m) const {
    if (m < mode_min() || m > mode_max())
      throw dimension_error("mode_map: mode index out of range");
    return m - mode_min();
  }
};

}  // namespace mps
