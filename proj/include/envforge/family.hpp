#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "envforge/errors.hpp"
#include "envforge/expr.hpp"
#include "envforge/vec.hpp"

namespace envforge {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// Uniform sampling grid over an axis-aligned parameter box.
/// Flat ordering is axis-0 major: flat = i0 * counts[1] + i1 for two axes.
struct SampleGrid {
  std::vector<Interval> axes;
  std::vector<int> counts;

  /// Throws Error unless every axis has >= 2 points and positive width.
  static SampleGrid uniform(std::vector<Interval> axes, std::vector<int> counts);
  static SampleGrid uniform(std::vector<Interval> axes, int count_per_axis = 401);

  int dim() const { return static_cast<int>(axes.size()); }
  long total() const;
  double step(int axis) const;
  double coord(int axis, int i) const;
  std::array<int, 2> unflatten(long flat) const;
  long flatten(std::span<const int> idx) const;
  /// Parameter point of a flat index; size == dim().
  std::vector<double> point(long flat) const;
};

/// Family of affine hyperplanes {X : (X - phi(x)) . nu(x) = 0} over a
/// rectangular parameter box. n is the parameter dimension (1 or 2); the
/// ambient space is R^{n+1}.
struct HyperplaneFamily {
  int n = 1;
  std::vector<std::string> params;  // size n
  std::vector<Interval> domain;     // size n
  std::vector<Expr> phi;            // size n+1
  std::vector<Expr> nu;             // size n+1

  // Rotation bookkeeping: rotate_family composes angles through these fields
  // so that rotating by theta0 and then by -theta0 restores the original
  // expression trees exactly, not just up to rounding.
  std::shared_ptr<const HyperplaneFamily> rotation_base;
  double rotation_angle = 0.0;

  int ambient_dim() const { return n + 1; }
  SampleGrid grid(int count_per_axis = 401) const;

  Vec phi_at(std::span<const double> x) const;
  Vec nu_at(std::span<const double> x) const;
};

/// Value and exact parameter Jacobian of a vector of expressions,
/// both obtained from one forward-mode evaluation.
struct VecJet {
  Vec value;
  std::array<Vec, 2> partial;  // partial[j] meaningful for j < point size
};

VecJet eval_vec_jet(const std::vector<Expr>& comps, std::span<const double> x);

/// Checks the family on every grid sample: ||nu|| = 1 within 1e-9 and both
/// phi and nu evaluate cleanly. Throws Error or propagates DomainError.
void validate_family(const HyperplaneFamily& fam, const SampleGrid& grid);

/// Support function gamma(x) = phi(x) . nu(x) with its exact gradient.
struct SupportValue {
  double gamma = 0.0;
  std::array<double, 2> grad{0.0, 0.0};  // grad[j] meaningful for j < n
};

SupportValue support(const HyperplaneFamily& fam, std::span<const double> x);

/// gamma as an expression tree (for symbolic derivatives downstream).
Expr support_expr(const HyperplaneFamily& fam);

/// Frenet frame of a catalog curve: component expressions plus per-sample
/// numeric tables over the grid the curve was built on.
struct FrenetData {
  std::vector<Expr> r;  // 2 or 3 components
  std::vector<Expr> t;  // unit tangent
  std::vector<Expr> n;  // unit normal (plane: +pi/2 rotation of t)
  std::vector<Expr> b;  // binormal; empty for plane curves

  SampleGrid grid;
  std::vector<Vec> t_vals, n_vals, b_vals;
  std::vector<double> kappa;
  std::vector<double> tau;  // empty for plane curves
};

/// Throws DegenerateCurve where ||r'|| < 1e-9 on the grid.
FrenetData frenet_plane(const std::array<Expr, 2>& r, const std::string& param,
                        Interval dom, int samples = 401);

/// Throws DegenerateCurve where ||r'|| < 1e-9 and VanishingCurvature where
/// ||t'|| < 1e-9 on the grid.
FrenetData frenet_space(const std::array<Expr, 3>& r, const std::string& param,
                        Interval dom, int samples = 401);

/// Affine tangent lines of a plane curve: phi = r, nu = unit normal.
HyperplaneFamily tangent_line_family(const std::array<Expr, 2>& r,
                                     const std::string& param, Interval dom,
                                     int samples = 401);

/// Osculating planes of a space curve: phi(s,u) = r(s), nu(s,u) = b(s).
/// u is a dummy second parameter.
HyperplaneFamily osculating_plane_family(const std::array<Expr, 3>& r,
                                         const std::string& param, Interval s_dom,
                                         Interval u_dom, int samples = 401);

/// Tangent planes of the graph of h: phi = (x, y, h), nu the upward unit
/// normal (-h_x, -h_y, 1)/sqrt(h_x^2 + h_y^2 + 1), derived symbolically.
HyperplaneFamily graph_normal_family(const Expr& h,
                                     const std::array<std::string, 2>& params,
                                     std::array<Interval, 2> dom,
                                     int samples = 401);

/// Central-projection normal nu(p) = (p_1,...,p_n, -1)/sqrt(sum p_i^2 + 1)
/// with phi = gamma * nu, so the support function equals `gamma` exactly.
/// The hyperplane at p is Y = X . p - gamma(p) * sqrt(sum p_i^2 + 1).
HyperplaneFamily clairaut_family(const Expr& gamma, int n,
                                 std::array<Interval, 2> dom, int samples = 401);

/// Rotates nu by theta0 in the plane (n = 1 only); phi is unchanged.
/// Successive rotations compose their angles, so a rotation and its inverse
/// cancel to the original family.
HyperplaneFamily rotate_family(const HyperplaneFamily& fam, double theta0);

struct CatalogOptions {
  double theta0 = 0.0;
  Expr alpha;        // free shift along the hyperplane; null means 0
  double c = 1.0;    // clairaut-const support level
  int n = 1;         // clairaut-const parameter dimension
  int samples = 401; // validation resolution per axis
};

/// Named example families. Throws UnknownCatalogEntry.
HyperplaneFamily catalog(const std::string& name, const CatalogOptions& opts = {});

std::vector<std::string> catalog_names();
std::string catalog_describe(const std::string& name);

}  // namespace envforge
