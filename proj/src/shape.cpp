#include "mps/shape.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mps {

double find_k_star(const fd_operator& op, double velocity_ratio) {
  if (!(velocity_ratio >= 0.0 && velocity_ratio < 1.0))
    throw domain_error("find_k_star: source at or above wave speed (need 0 <= v_max/c < 1)");
  if (velocity_ratio == 0.0) return std::numbers::pi;
  double lo = 0.0, hi = std::numbers::pi;
  // symbol decreases strictly from 1 to 0, so the root is unique and bracketed
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (op.symbol(mid) > velocity_ratio ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// The m+s interpolation conditions are triangular in the Bernstein basis of
// degree n = m+s-1: derivatives at u=0 of order nu involve only the first
// nu+1 Bernstein coefficients and derivatives at u=1 only the last. Forward
// substitution gives c_j = 1 for j < m, backward gives c_j = 0 for j >= m.
// Exact integer conversion to monomials stays below 2^53 through q = m = s = 16
// (max coefficient 1.35e12), so the stored coeffs satisfy the conditions to
// machine precision at any admissible size.
std::vector<double> monomial_from_bernstein(int m, int s) {
  const int n = m + s - 1;
  // binomials C(n, j) via Pascal's triangle, exact in int64 for n <= 40
  std::vector<std::vector<int64_t>> C(n + 1);
  for (int i = 0; i <= n; ++i) {
    C[i].assign(i + 1, 1);
    for (int j = 1; j < i; ++j) C[i][j] = C[i - 1][j - 1] + C[i - 1][j];
  }
  std::vector<int64_t> b(n + 1, 0);
  for (int j = 0; j < m; ++j) {
    // u^j (1-u)^{n-j} = sum_k C(n-j, k) (-1)^k u^{j+k}
    for (int k = 0; k <= n - j; ++k) {
      int64_t term = C[n][j] * C[n - j][k];
      b[j + k] += (k % 2 == 0) ? term : -term;
    }
  }
  return {b.begin(), b.end()};
}

double falling_factorial(int j, int nu) {
  double r = 1.0;
  for (int t = 0; t < nu; ++t) r *= j - t;
  return r;
}

// Relative residual of condition row nu at u = 1: |sum b_j (j)_nu| / sum |b_j (j)_nu|.
double cutoff_residual(const std::vector<double>& b, int nu) {
  double num = 0.0, den = 0.0;
  for (size_t j = 0; j < b.size(); ++j) {
    double term = b[j] * falling_factorial(static_cast<int>(j), nu);
    num += term;
    den += std::abs(term);
  }
  return den > 0.0 ? std::abs(num) / den : std::abs(num);
}

}  // namespace

spectral_shape build_shape(int m, int s, double kstar) {
  if (m < 1) throw domain_error("build_shape: need at least one moment condition");
  if (s < 0) throw domain_error("build_shape: negative condition count");
  if (!(kstar > 0.0 && kstar <= std::numbers::pi + 1e-15))
    throw domain_error("build_shape: cutoff wavenumber must lie in (0, pi]");
  if (m + s - 1 > 40)
    throw construction_error(
        "build_shape: condition count too large for exact construction; use smaller q");

  spectral_shape sh;
  sh.m = m;
  sh.s = s;
  sh.kstar = kstar;
  sh.coeffs = monomial_from_bernstein(m, s);

  const int n = m + s - 1;
  sh.bernstein.resize(m);
  for (int j = 0; j < m; ++j) {
    double c = 1.0;
    for (int i = 0; i < j; ++i) c = c * (n - i) / (i + 1);
    sh.bernstein[j] = c;
  }

  // Moment-condition residuals are zero by construction (coeffs[0..m-1] are
  // exactly 1, 0, ..., 0); verify the s cutoff conditions.
  for (int nu = 0; nu < s; ++nu) {
    if (!(cutoff_residual(sh.coeffs, nu) < 1e-9))
      throw construction_error("build_shape: cutoff condition residual exceeds 1e-9");
  }
  return sh;
}

double spectral_shape::eval(double kappa) const {
  double u = std::abs(kappa) / kstar;
  if (u > 1.0) return 0.0;
  const double v = 1.0 - u;
  // sum_{j<m} C(n,j) u^j v^{n-j} with n = m+s-1; all terms are nonnegative,
  // so the sum carries no cancellation at any admissible size
  double vp = 1.0;
  for (int i = 0; i < s; ++i) vp *= v;  // v^{n-(m-1)}
  double up[41];
  up[0] = 1.0;
  for (int j = 1; j < m; ++j) up[j] = up[j - 1] * u;
  double acc = 0.0;
  for (int j = m - 1; j >= 0; --j) {
    acc += bernstein[j] * up[j] * vp;
    vp *= v;
  }
  return acc;
}

}  // namespace mps
