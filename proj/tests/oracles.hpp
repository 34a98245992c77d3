#pragma once

// Independent reference implementations used only by the tests. Everything
// here is written directly against the underlying formulas with its own
// stencil table, bisection, quadrature, and linear algebra, so agreement
// with the library is a real check and not an identity.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------- stencils

inline const std::vector<double>& stencil(int p) {
  static const std::vector<double> s2{1.0 / 2.0};
  static const std::vector<double> s4{2.0 / 3.0, -1.0 / 12.0};
  static const std::vector<double> s6{3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
  switch (p) {
    case 2: return s2;
    case 4: return s4;
    case 6: return s6;
  }
  throw std::invalid_argument("oracle::stencil: order must be 2, 4, or 6");
}

inline double phat(int p, double kappa) {
  if (kappa == 0.0) return 1.0;
  const auto& a = stencil(p);
  double s = 0.0;
  for (std::size_t nu = 0; nu < a.size(); ++nu)
    s += a[nu] * std::sin((static_cast<double>(nu) + 1.0) * kappa);
  return 2.0 * s / kappa;
}

// Root of phat(kappa) = ratio on (0, pi], found by bisection on the oracle's
// own symbol. The symbol decreases from 1 to 0, so the root is unique.
inline double bisect_kstar(int p, double ratio) {
  double lo = 0.0, hi = std::numbers::pi;
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    double mid = 0.5 * (lo + hi);
    (phat(p, mid) > ratio ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Frozen reference roots, computed once with 50-digit arbitrary-precision
// bisection and pasted here to 20 digits.
struct kstar_entry {
  int p;
  double ratio;
  double value;
};

inline const std::array<kstar_entry, 9>& kstar_table() {
  static const std::array<kstar_entry, 9> t{{
      {2, 0.3, 2.3564411498561611737},
      {2, 0.5, 1.8954942670339809471},
      {2, 2.0 / std::numbers::pi, std::numbers::pi / 2.0},
      {4, 0.3, 2.6336929447351049396},
      {4, 0.5, 2.3072871655477751717},
      {4, 2.0 / std::numbers::pi, 2.0634947004960566746},
      {6, 0.3, 2.7452973628942852125},
      {6, 0.5, 2.4816343146411757943},
      {6, 2.0 / std::numbers::pi, 2.2806726676726150599},
  }};
  return t;
}

// ------------------------------------------------------------- small algebra

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
  row[0] = 1.0;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
  return row[static_cast<std::size_t>(k)];
}

// Dense LU with partial pivoting; A is row-major n x n, solved in place.
inline std::vector<double> lu_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (A[piv][col] == 0.0) throw std::runtime_error("oracle::lu_solve: singular matrix");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = A[r][col] / A[col][col];
      for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t ri = n; ri-- > 0;) {
    double s = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) s -= A[ri][c] * x[c];
    x[ri] = s / A[ri][ri];
  }
  return x;
}

inline double falling(int j, int nu) {
  double r = 1.0;
  for (int t = 0; t < nu; ++t) r *= j - t;
  return r;
}

// Monomial coefficients of the degree-(m+s-1) polynomial Q(u) with
// Q(0) = 1, Q^(nu)(0) = 0 for nu = 1..m-1, Q^(nu)(1) = 0 for nu = 0..s-1,
// obtained from the raw interpolation system. The conditions at u = 0 pin
// c_0 = 1 and c_1..c_{m-1} = 0; the s conditions at u = 1 give a dense
// system for c_m..c_{m+s-1}. Conditioning limits this route to small m + s.
inline std::vector<double> shape_coeffs_by_lu(int m, int s) {
  std::vector<std::vector<double>> A(static_cast<std::size_t>(s),
                                     std::vector<double>(static_cast<std::size_t>(s)));
  std::vector<double> rhs(static_cast<std::size_t>(s), 0.0);
  for (int nu = 0; nu < s; ++nu) {
    for (int i = 0; i < s; ++i) A[nu][static_cast<std::size_t>(i)] = falling(m + i, nu);
    rhs[static_cast<std::size_t>(nu)] = nu == 0 ? -1.0 : 0.0;  // moves c_0 = 1 to the right side
  }
  std::vector<double> tail = s > 0 ? lu_solve(A, rhs) : std::vector<double>{};
  std::vector<double> c(static_cast<std::size_t>(m + s), 0.0);
  c[0] = 1.0;
  for (int i = 0; i < s; ++i) c[static_cast<std::size_t>(m + i)] = tail[static_cast<std::size_t>(i)];
  return c;
}

inline double eval_poly(const std::vector<double>& c, double u) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * u + c[i];
  return acc;
}

// F(kappa) for the (m, s) shape with cutoff kstar, straight from the
// Bernstein partial-sum formula: sum_{j<m} C(n,j) u^j (1-u)^(n-j), n = m+s-1.
inline double shape_F(int m, int s, double kstar, double kappa) {
  double u = std::abs(kappa) / kstar;
  if (u > 1.0) return 0.0;
  const int n = m + s - 1;
  double acc = 0.0;
  for (int j = 0; j < m; ++j)
    acc += binom(n, j) * std::pow(u, j) * std::pow(1.0 - u, n - j);
  return acc;
}

// ------------------------------------------------------------- quadrature

namespace detail {
inline std::complex<double> simpson(const std::function<std::complex<double>(double)>& f,
                                    double a, double b, const std::complex<double>& fa,
                                    const std::complex<double>& fm, const std::complex<double>& fb,
                                    const std::complex<double>& whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const std::complex<double> flm = f(lm), frm = f(rm);
  const std::complex<double> left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const std::complex<double> right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const std::complex<double> delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Adaptive Simpson with Richardson correction, absolute tolerance.
inline std::complex<double> integrate(const std::function<std::complex<double>(double)>& f,
                                      double a, double b, double tol = 1e-13) {
  if (a == b) return {0.0, 0.0};
  const double m = 0.5 * (a + b);
  const std::complex<double> fa = f(a), fm = f(m), fb = f(b);
  const std::complex<double> whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// --------------------------------------------------------------- naive DFT

// u_hat_m = (1/M) sum_j e^{-i k_m x_j} u_j, returned in natural mode order
// m = -((M-1)/2) .. M/2 (same layout as the library's mode_map.coeff).
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& u) {
  const int M = static_cast<int>(u.size());
  const int m_lo = -((M - 1) / 2);
  std::vector<std::complex<double>> out(u.size());
  for (int m = m_lo; m <= M / 2; ++m) {
    std::complex<double> acc{0.0, 0.0};
    for (int j = 0; j < M; ++j) {
      double phi = -2.0 * std::numbers::pi * m * j / M;
      acc += u[static_cast<std::size_t>(j)] * std::complex<double>(std::cos(phi), std::sin(phi));
    }
    out[static_cast<std::size_t>(m - m_lo)] = acc / static_cast<double>(M);
  }
  return out;
}

// ------------------------------------------------- semidiscrete mode oracles

// Advection with a straight-line source path x0(tau) = x_start + v0 tau:
//   u_hat(t) = (F(kh)/L) * Integral_0^t g(tau)
//              exp(i k ((c*P - v0) tau - c*P t) - i k x_start) dtau
inline std::complex<double> advection_mode(double k, double phat_k, double F_over_L,
                                           const std::function<double(double)>& g, double c,
                                           double v0, double x_start, double t,
                                           double tol = 1e-13) {
  const std::complex<double> I{0.0, 1.0};
  auto integrand = [&](double tau) {
    return g(tau) * std::exp(I * (k * ((c * phat_k - v0) * tau - c * phat_k * t) - k * x_start));
  };
  return F_over_L * integrate(integrand, 0.0, t, tol);
}

// Pressure mode of the 1D acoustic system driven through the pressure
// equation: theta_hat(t) = K (F/L) Integral_0^t g(tau) e^{-i k x0(tau)}
//                          cos(c k P (t - tau)) dtau
inline std::complex<double> wave_theta_mode(double k, double phat_k, double F_over_L, double K,
                                            const std::function<double(double)>& g,
                                            const std::function<double(double)>& x0, double c,
                                            double t, double tol = 1e-13) {
  const std::complex<double> I{0.0, 1.0};
  auto integrand = [&](double tau) {
    return g(tau) * std::exp(-I * (k * x0(tau))) * std::cos(c * k * phat_k * (t - tau));
  };
  return K * F_over_L * integrate(integrand, 0.0, t, tol);
}

// ------------------------------------------------------------------ misc

// Integral_0^t of the unit-mass Gaussian with parameters (sigma, t0).
inline double gaussian_integral(double sigma, double t0, double t) {
  auto Phi = [](double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); };
  return Phi((t - t0) / sigma) - Phi(-t0 / sigma);
}

inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace oracle
