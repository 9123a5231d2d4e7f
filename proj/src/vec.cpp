#include "envforge/vec.hpp"

#include <algorithm>
#include <cmath>

namespace envforge {

namespace {

// Column k of m as a length-2 array (rows beyond m.rows stay zero).
std::array<double, 2> column(const Mat2& m, int k) {
  std::array<double, 2> c{0.0, 0.0};
  for (int i = 0; i < m.rows; ++i) c[i] = m(i, k);
  return c;
}

double cnorm(const std::array<double, 2>& c) { return std::hypot(c[0], c[1]); }

}  // namespace

SmallSvd svd_small(const Mat2& m) {
  SmallSvd s;
  s.rows = m.rows;
  s.cols = m.cols;

  if (m.cols == 1) {
    auto c0 = column(m, 0);
    double n0 = cnorm(c0);
    s.sigma[0] = n0;
    s.v[0] = {1.0, 0.0};
    if (n0 > 0.0) s.u[0] = {c0[0] / n0, c0[1] / n0};
    return s;
  }

  // Two columns: one Givens rotation G makes the columns of m*G orthogonal;
  // then m*G = U*diag(sigma) with V = G.
  auto c0 = column(m, 0);
  auto c1 = column(m, 1);
  double a = c0[0] * c0[0] + c0[1] * c0[1];
  double b = c1[0] * c1[0] + c1[1] * c1[1];
  double g = c0[0] * c1[0] + c0[1] * c1[1];

  double cth = 1.0, sth = 0.0;
  if (std::abs(g) > 0.0) {
    double theta = 0.5 * std::atan2(2.0 * g, a - b);
    cth = std::cos(theta);
    sth = std::sin(theta);
  }
  std::array<double, 2> r0{cth * c0[0] + sth * c1[0], cth * c0[1] + sth * c1[1]};
  std::array<double, 2> r1{-sth * c0[0] + cth * c1[0], -sth * c0[1] + cth * c1[1]};
  double n0 = cnorm(r0);
  double n1 = cnorm(r1);

  std::array<double, 2> v0{cth, sth};
  std::array<double, 2> v1{-sth, cth};
  if (n1 > n0) {
    std::swap(n0, n1);
    std::swap(r0, r1);
    std::swap(v0, v1);
  }
  s.sigma = {n0, n1};
  s.v[0] = v0;
  s.v[1] = v1;
  if (n0 > 0.0) s.u[0] = {r0[0] / n0, r0[1] / n0};
  if (n1 > 0.0) s.u[1] = {r1[0] / n1, r1[1] / n1};
  return s;
}

LstsqResult lstsq_minnorm(const Mat2& a, const std::array<double, 2>& b, double rel_threshold) {
  SmallSvd s = svd_small(a);
  LstsqResult r;
  r.rank = s.rank(rel_threshold);

  for (int k = 0; k < a.cols; ++k) {
    if (k < r.rank) {
      double ub = 0.0;
      for (int i = 0; i < a.rows; ++i) ub += s.u[k][i] * b[i];
      double q = ub / s.sigma[k];
      for (int j = 0; j < a.cols; ++j) r.x[j] += q * s.v[k][j];
    } else {
      r.kernel[r.kernel_dim] = s.v[k];
      ++r.kernel_dim;
    }
  }

  std::array<double, 2> res{-b[0], -b[1]};
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) res[i] += a(i, j) * r.x[j];
  double rn = 0.0;
  for (int i = 0; i < a.rows; ++i) rn += res[i] * res[i];
  r.residual = std::sqrt(rn);
  return r;
}

bool gauss_solve5(int n, std::array<std::array<double, 5>, 5>& a, std::array<double, 5>& b) {
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    if (a[piv][k] == 0.0) return false;
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (int i = k + 1; i < n; ++i) {
      double f = a[i][k] / a[k][k];
      for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a[i][j] * b[j];
    b[i] = s / a[i][i];
  }
  return true;
}

}  // namespace envforge
