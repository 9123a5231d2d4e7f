#include "envforge/sphere.hpp"

#include <algorithm>
#include <cmath>

namespace envforge {

TangentFrame make_frame(const UnitVector& base) {
  TangentFrame f{base, {}};
  const Vec& b = base.v;
  if (base.sphere_dim() == 1) {
    f.basis[0] = Vec(-b[1], b[0]);
    return f;
  }

  // Pick the two standard axes least aligned with base; stable order keeps
  // the tie-break at the lower axis index.
  std::array<int, 3> axes{0, 1, 2};
  std::stable_sort(axes.begin(), axes.end(),
                   [&b](int i, int j) { return std::abs(b[i]) < std::abs(b[j]); });
  int a0 = std::min(axes[0], axes[1]);
  int a1 = std::max(axes[0], axes[1]);

  Vec e0 = Vec::zero(3);
  e0[a0] = 1.0;
  Vec v0 = normalized(e0 - dot(e0, b) * b);

  Vec e1 = Vec::zero(3);
  e1[a1] = 1.0;
  Vec v1 = normalized(e1 - dot(e1, b) * b - dot(e1, v0) * v0);

  f.basis[0] = v0;
  f.basis[1] = v1;
  return f;
}

std::array<double, 2> frame_components(const TangentFrame& frame, const Vec& ambient) {
  std::array<double, 2> c{0.0, 0.0};
  for (int i = 0; i < frame.n(); ++i) c[i] = dot(ambient, frame.basis[i]);
  return c;
}

Vec levi_civita_translate(const UnitVector& x0, const UnitVector& x, const Vec& v) {
  double c = dot(x0.v, x.v);
  if (c <= -1.0 + 1e-9) throw AntipodalError();
  // Rotation carrying a to b, identity on span{a, b}'s complement:
  //   R v = v - ((a+b).v / (1+a.b)) (a+b) + 2 (a.v) b
  Vec ab = x0.v + x.v;
  return v - (dot(ab, v) / (1.0 + c)) * ab + (2.0 * dot(x0.v, v)) * x.v;
}

UnitVector exp_map(const UnitVector& x0, const Vec& v) {
  double t = norm(v);
  if (t == 0.0) return x0;
  // cos(t) x0 + sin(t) v / t; stays unit up to roundoff, constructor renorms.
  return UnitVector(std::cos(t) * x0.v + (std::sin(t) / t) * v);
}

Vec log_map(const UnitVector& x0, const UnitVector& x) {
  double c = std::clamp(dot(x0.v, x.v), -1.0, 1.0);
  if (c <= -1.0 + 1e-9) throw AntipodalError();
  Vec w = x.v - c * x0.v;
  double s = norm(w);
  double theta = std::atan2(s, c);
  if (s == 0.0) return Vec::zero(x0.ambient_dim());
  return (theta / s) * w;
}

}  // namespace envforge
