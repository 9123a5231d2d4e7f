#pragma once

#include <array>

#include "envforge/errors.hpp"
#include "envforge/vec.hpp"

namespace envforge {

/// Geometry kernel for the unit sphere S^n inside R^(n+1), n = 1 or 2.
///
/// Normal coordinates at a point are the components of the inverse
/// exponential map in a deterministic tangent frame. The creator solve
/// always works at the chart center, where Levi-Civita translation is the
/// identity; the translation itself is exposed for cross-sample checks.

/// Point on S^n; renormalized on construction to |norm - 1| <= 1e-12.
struct UnitVector {
  Vec v;

  explicit UnitVector(const Vec& raw) : v(normalized(raw)) {
    if (!(norm(raw) > 0.0)) throw Error("cannot normalize the zero vector");
  }

  int ambient_dim() const { return v.dim; }
  int sphere_dim() const { return v.dim - 1; }
};

/// Orthonormal basis of the tangent space at `base`.
struct TangentFrame {
  UnitVector base;
  std::array<Vec, 2> basis;  // first sphere_dim() entries are valid

  int n() const { return base.sphere_dim(); }
};

/// Tangent (equivalently, via the round metric, cotangent) vector in a frame.
/// Identified with the ambient vector sum(components[i] * basis[i]).
struct TangentVector {
  TangentFrame frame;
  std::array<double, 2> components{0.0, 0.0};

  Vec ambient() const {
    Vec a = Vec::zero(frame.base.ambient_dim());
    for (int i = 0; i < frame.n(); ++i) a += components[i] * frame.basis[i];
    return a;
  }
};

/// Deterministic frame: n=1 rotates base by +pi/2; n=2 Gram-Schmidts the two
/// standard axes least aligned with base (ties broken by lower axis index).
TangentFrame make_frame(const UnitVector& base);

/// Components of `ambient` (assumed tangent at frame.base) in the frame.
std::array<double, 2> frame_components(const TangentFrame& frame, const Vec& ambient);

/// Parallel transport along the geodesic from X0 to X: the rotation of the
/// ambient space in span{X0, X} carrying X0 to X, identity on the orthogonal
/// complement. Throws AntipodalError when X . X0 <= -1 + 1e-9.
Vec levi_civita_translate(const UnitVector& x0, const UnitVector& x, const Vec& v);

/// exp_map(X0, v) = cos|v| X0 + sin|v| v/|v| (X0 at v = 0).
UnitVector exp_map(const UnitVector& x0, const Vec& v);

/// Inverse of exp_map on the geodesic ball of radius pi.
/// Throws AntipodalError at the antipode.
Vec log_map(const UnitVector& x0, const UnitVector& x);

}  // namespace envforge
