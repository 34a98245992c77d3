#include "mps/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace mps {

std::complex<double> inner_product(const complex_vector& u, const complex_vector& v,
                                   const periodic_grid& grid) {
  if (u.size() != v.size() || static_cast<int>(u.size()) != grid.M)
    throw dimension_error("inner_product: length mismatch");
  std::complex<double> acc = 0.0;
  for (size_t j = 0; j < u.size(); ++j) acc += std::conj(u[j]) * v[j];
  return acc / static_cast<double>(grid.M);
}

double inner_product(const real_vector& u, const real_vector& v, const periodic_grid& grid) {
  if (u.size() != v.size() || static_cast<int>(u.size()) != grid.M)
    throw dimension_error("inner_product: length mismatch");
  double acc = 0.0;
  for (size_t j = 0; j < u.size(); ++j) acc += u[j] * v[j];
  return acc / grid.M;
}

double weighted_norm(const real_vector& u, const periodic_grid& grid) {
  return std::sqrt(inner_product(u, u, grid));
}

namespace detail {

namespace {

// FFTW planning is not thread-safe; execution via fftw_execute_dft on
// distinct buffers is. Plans use FFTW_UNALIGNED so they accept any buffer.
std::mutex plan_mutex;

fftw_plan plan_for(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  complex_vector scratch(n);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, plan);
  return plan;
}

void execute(complex_vector& inout, int sign) {
  fftw_plan plan = plan_for(static_cast<int>(inout.size()), sign);
  auto* p = reinterpret_cast<fftw_complex*>(inout.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace

void fft_forward(complex_vector& inout) { execute(inout, FFTW_FORWARD); }
void fft_backward(complex_vector& inout) { execute(inout, FFTW_BACKWARD); }

}  // namespace detail

mode_map to_fourier(const complex_vector& u, const periodic_grid& grid) {
  if (static_cast<int>(u.size()) != grid.M) throw dimension_error("to_fourier: length mismatch");
  complex_vector bins = u;
  detail::fft_forward(bins);
  mode_map out(grid.M);
  const double scale = 1.0 / grid.M;
  for (int m = out.mode_min(); m <= out.mode_max(); ++m) {
    int b = m >= 0 ? m : m + grid.M;
    out.at(m) = bins[b] * scale;
  }
  return out;
}

mode_map to_fourier(const real_vector& u, const periodic_grid& grid) {
  complex_vector cu(u.begin(), u.end());
  return to_fourier(cu, grid);
}

complex_vector from_fourier(const mode_map& coeffs, const periodic_grid& grid) {
  if (coeffs.M != grid.M) throw dimension_error("from_fourier: missing modes for this grid");
  complex_vector bins(grid.M);
  for (int m = coeffs.mode_min(); m <= coeffs.mode_max(); ++m) {
    int b = m >= 0 ? m : m + grid.M;
    bins[b] = coeffs.at(m);
  }
  detail::fft_backward(bins);
  return bins;
}

std::string fft_backend_version() { return fftw_version; }

}  // namespace mps
