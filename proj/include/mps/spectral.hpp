#pragma once

#include <complex>
#include <string>

#include "mps/grid.hpp"

namespace mps {

// Discrete inner product <u, v>_h = (1/L) sum_j h conj(u_j) v_j = (1/M) sum_j conj(u_j) v_j.
std::complex<double> inner_product(const complex_vector& u, const complex_vector& v,
                                   const periodic_grid& grid);
double inner_product(const real_vector& u, const real_vector& v, const periodic_grid& grid);

// sqrt(<u, u>_h); the norm used by all error reports.
double weighted_norm(const real_vector& u, const periodic_grid& grid);

// Fourier coefficients u_hat_k = <e^{ikx}, u>_h for k in the grid's mode set.
// O(M log M) via FFT; forward transform carries the 1/M normalization.
mode_map to_fourier(const complex_vector& u, const periodic_grid& grid);
mode_map to_fourier(const real_vector& u, const periodic_grid& grid);

// u_j = sum_k u_hat_k e^{ikx_j}. Inverse of to_fourier.
complex_vector from_fourier(const mode_map& coeffs, const periodic_grid& grid);

// Version string of the FFT backend, for run manifests.
std::string fft_backend_version();

namespace detail {
// Unnormalized c2c transforms in FFT bin order (bin b holds mode m = b for
// b <= M/2, else m = b - M). Thread-safe; plans are cached per length.
void fft_forward(complex_vector& inout);
void fft_backward(complex_vector& inout);
}  // namespace detail

}  // namespace mps
