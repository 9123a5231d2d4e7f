#pragma once

#include <array>
#include <vector>

#include "envforge/creative.hpp"
#include "envforge/family.hpp"

namespace envforge {

// Envelope sample with its tangential/normal split: f = omega + gamma*nu.
struct EnvelopeSample {
  Vec f;
  Vec omega;
  Vec gamma_nu;
};

struct EnvelopeMap {
  SampleGrid grid;
  std::vector<EnvelopeSample> samples;
};

// f(x) = sum_i omega_i(x) basis_i(x) + gamma(x) nu(x) at every grid sample.
EnvelopeMap build_envelope(const HyperplaneFamily& fam, const CreatorField& creator);

// Membership residual (a): |(f - phi) . nu|.
// Per-sample values behind the verification maxima: membership gap
// |(f - phi) . nu| and grid-derivative tangency norm at each sample.
struct ResidualSamples {
  std::vector<double> membership;
  std::vector<double> tangency;
};

ResidualSamples envelope_residuals(const HyperplaneFamily& fam, const EnvelopeMap& env);

// Tangency residual (b): ||J_f^T nu||, J_f exact for closed-form candidates,
// else fourth-order finite differences on the grid (one-sided at the edges).
struct VerificationReport {
  double max_membership = 0.0;
  long max_membership_at = 0;
  double max_tangency = 0.0;
  long max_tangency_at = 0;
  double tol = 0.0;
  bool pass = false;
};

VerificationReport verify_envelope(const HyperplaneFamily& fam, const EnvelopeMap& env);
VerificationReport verify_envelope(const HyperplaneFamily& fam, const std::vector<Expr>& f,
                                   const SampleGrid& grid);

// Intersection-limit envelope for one-parameter families: intersect H(t0) with
// H(t0+h) for shrinking h and extrapolate h -> 0.
enum class E1Status { Ok, Unreliable, ParallelLines };

struct E1Sample {
  E1Status status = E1Status::ParallelLines;
  Vec point;
  double order = 0.0;
  double distance = 0.0;
};

struct E1Estimate {
  SampleGrid grid;
  std::vector<E1Sample> samples;
  long defined = 0;
  double max_distance = 0.0;
  long max_distance_at = -1;
  double min_order = 0.0;
};

E1Estimate e1_envelope(const HyperplaneFamily& fam, const SampleGrid& grid,
                       const EnvelopeMap& reference);
E1Estimate e1_envelope(const HyperplaneFamily& fam, const SampleGrid& grid);

// One envelope per coefficient alpha: f = omega + alpha*bump*kappa + gamma*nu,
// where kappa is the sign-aligned unit kernel field of the creator system and
// the bump cuts alpha off smoothly at the boundary of each flagged singular
// box (no cutoff along axes the box spans entirely).
std::vector<EnvelopeMap> alternative_envelopes(const HyperplaneFamily& fam,
                                               const CreatorSolution& sol,
                                               const std::vector<Expr>& alphas);

// Envelope of the complete-solution hyperplanes of Y = X.p - gamma(p), sampled
// over a chart grid in p. Points are ambient: the first n components are X,
// the last is Y.
struct ClairautSolution {
  SampleGrid grid;
  std::vector<Vec> points;
};

ClairautSolution clairaut_singular_solution(const Expr& gamma, int n,
                                            const std::array<Interval, 2>& dom, int samples);
ClairautSolution clairaut_singular_solution(double c, int n, int samples = 201);

}  // namespace envforge
