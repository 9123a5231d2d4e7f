#pragma once

#include <array>
#include <span>
#include <vector>

#include "envforge/family.hpp"
#include "envforge/sphere.hpp"
#include "envforge/vec.hpp"

namespace envforge {

/// Per-sample acceptance threshold for the creator system residual.
inline double tol_creative(double grad_norm) { return 1e-7 * (1.0 + grad_norm); }

/// Relative singular-value cutoff for rank decisions on the normal's Jacobian.
inline constexpr double kSigmaRank = 1e-9;

/// Creator data at one parameter sample. The frame sits at nu(x); omega is
/// the 1-form solved from J^T omega = grad gamma, stored both as frame
/// components and as the ambient tangent vector sum(omega_i * basis_i).
struct CreatorSample {
  TangentFrame frame;
  std::array<double, 2> omega{0.0, 0.0};
  Vec omega_ambient;
  double residual = 0.0;   // ||J^T omega - grad gamma|| after any limit treatment
  int rank = 0;            // rank of J at the kSigmaRank relative threshold
  bool singular = false;   // rank < n
  bool limit_treated = false;
  bool failed = false;     // residual above tolerance and limit treatment failed
};

struct CreatorField {
  SampleGrid grid;
  std::vector<CreatorSample> samples;
};

enum class Verdict { Creative, NotCreative, CreativeNonUnique };
enum class Uniqueness { Unique, NonUnique };

const char* to_string(Verdict v);
const char* to_string(Uniqueness u);

/// Inclusive grid-index box flagged by the uniqueness rule.
struct FlaggedBox {
  std::array<int, 2> lo{0, 0};
  std::array<int, 2> hi{0, 0};
};

struct CreativityReport {
  Verdict verdict = Verdict::Creative;
  SampleGrid grid;

  double worst_residual = 0.0;
  long worst_residual_at = -1;  // flat sample index

  std::vector<long> singular_samples;
  std::vector<int> kernel_dims;  // parallel to singular_samples
  std::vector<char> singular_mask;
  double regular_fraction = 1.0;

  // Continuity proxy: the solved ambient creator is extrapolated to each
  // isolated singular sample from both sides along each axis; a mismatch
  // means no continuous creator exists there.
  bool continuity_failed = false;
  double worst_mismatch = 0.0;
  long worst_mismatch_at = -1;

  Uniqueness uniqueness = Uniqueness::Unique;
  std::vector<FlaggedBox> flagged;
};

struct CreatorSolution {
  CreatorField field;
  CreativityReport report;
};

/// Decides creativity over the grid and solves for the creator field.
/// At each sample: frame at nu(x); J[i][j] = basis_i . dnu/dx_j (exact via
/// forward-mode evaluation; this is d(Theta_i o nu) at the chart center);
/// g = grad gamma; J^T omega = g by rank-revealing least squares. Samples
/// with rank-deficient J and residual above tol_creative get the limit
/// treatment (degree-4 ratio limit along each axis). Throws GridTooCoarse
/// when the treatment is needed on fewer than 5 samples per axis.
CreatorSolution solve_creator(const HyperplaneFamily& fam, const SampleGrid& grid);

/// Creator solve at one arbitrary parameter point (no limit treatment,
/// no continuity proxy). Used by pointwise consumers and property tests.
CreatorSample creator_at(const HyperplaneFamily& fam, std::span<const double> x);

/// Density-of-regular-points proxy: a sample votes NonUnique when it lies in
/// a run of >= 3 consecutive singular samples along EVERY axis (for one
/// parameter this is just a run of >= 3). Fills report.uniqueness and
/// report.flagged, and refines Creative to CreativeNonUnique.
Uniqueness uniqueness_verdict(const HyperplaneFamily& fam, CreativityReport& report);

/// Orthonormal basis of ker(J^T) at a singular point: the directions in
/// which the creator may be perturbed without violating the defining system.
/// Throws FullRank when J has full rank at x.
struct AmbiguityBasis {
  TangentFrame frame;
  int kernel_dim = 0;
  std::array<std::array<double, 2>, 2> components{};  // kernel vectors, frame comps
  std::array<Vec, 2> ambient{};
};

AmbiguityBasis creator_ambiguity(const HyperplaneFamily& fam, std::span<const double> x);

/// One-parameter specialization: alpha(t) = gamma'(t) / Theta'(t) with
/// Theta' = perp(nu) . nu'. Agrees with solve_creator componentwise.
CreatorField creator_1d_fast(const HyperplaneFamily& fam, const SampleGrid& grid);

}  // namespace envforge
