#pragma once

#include <array>
#include <cassert>
#include <cmath>

namespace envforge {

/// Ambient vector of R^2 or R^3. Fixed capacity, runtime dimension.
struct Vec {
  std::array<double, 3> c{0.0, 0.0, 0.0};
  int dim = 0;

  Vec() = default;
  Vec(double x, double y) : c{x, y, 0.0}, dim(2) {}
  Vec(double x, double y, double z) : c{x, y, z}, dim(3) {}

  static Vec zero(int d) {
    Vec v;
    v.dim = d;
    return v;
  }

  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  Vec& operator+=(const Vec& o) {
    assert(dim == o.dim);
    for (int i = 0; i < dim; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    assert(dim == o.dim);
    for (int i = 0; i < dim; ++i) c[i] -= o.c[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim; ++i) c[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator-(Vec a) { return a *= -1.0; }
};

inline double dot(const Vec& a, const Vec& b) {
  assert(a.dim == b.dim);
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s += a.c[i] * b.c[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec normalized(const Vec& a) {
  double n = norm(a);
  Vec r = a;
  if (n > 0.0) r *= 1.0 / n;
  return r;
}

/// Rotation of a plane vector by +pi/2 (anticlockwise).
inline Vec perp(const Vec& a) {
  assert(a.dim == 2);
  return Vec(-a.c[1], a.c[0]);
}

inline Vec cross(const Vec& a, const Vec& b) {
  assert(a.dim == 3 && b.dim == 3);
  return Vec(a.c[1] * b.c[2] - a.c[2] * b.c[1],
             a.c[2] * b.c[0] - a.c[0] * b.c[2],
             a.c[0] * b.c[1] - a.c[1] * b.c[0]);
}

/// Dense matrix with at most 2 rows and 2 columns, runtime shape.
struct Mat2 {
  std::array<std::array<double, 2>, 2> a{{{0.0, 0.0}, {0.0, 0.0}}};
  int rows = 0;
  int cols = 0;

  static Mat2 zero(int r, int c) {
    Mat2 m;
    m.rows = r;
    m.cols = c;
    return m;
  }

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

  Mat2 transposed() const {
    Mat2 t = zero(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t(j, i) = a[i][j];
    return t;
  }
};

/// Singular value decomposition of a matrix with shape <= 2x2.
/// One-sided Jacobi on the columns: a single rotation orthogonalizes two
/// columns, so singular values carry no cancellation error and a rank
/// threshold of 1e-9 * sigma_max is meaningful.
struct SmallSvd {
  int rows = 0, cols = 0;
  std::array<double, 2> sigma{0.0, 0.0};           // descending
  std::array<std::array<double, 2>, 2> u{{{0.0, 0.0}, {0.0, 0.0}}};  // u[k] = k-th left vector
  std::array<std::array<double, 2>, 2> v{{{0.0, 0.0}, {0.0, 0.0}}};  // v[k] = k-th right vector

  int rank(double rel_threshold) const {
    double cut = rel_threshold * sigma[0];
    int r = 0;
    for (int k = 0; k < cols; ++k)
      if (sigma[k] > cut && sigma[k] > 0.0) ++r;
    return r;
  }
};

SmallSvd svd_small(const Mat2& m);

/// Minimum-norm least-squares solution of A x = b with the rank decided by
/// svd_small at the given relative threshold.
struct LstsqResult {
  std::array<double, 2> x{0.0, 0.0};
  double residual = 0.0;  // ||A x - b||
  int rank = 0;
  int kernel_dim = 0;
  std::array<std::array<double, 2>, 2> kernel{{{0.0, 0.0}, {0.0, 0.0}}};  // kernel[k] in R^cols
};

LstsqResult lstsq_minnorm(const Mat2& a, const std::array<double, 2>& b, double rel_threshold);

/// Gaussian elimination with partial pivoting for systems up to 5x5.
/// Used by the degree-4 polynomial fits of the limit treatment.
bool gauss_solve5(int n, std::array<std::array<double, 5>, 5>& a, std::array<double, 5>& b);

}  // namespace envforge
