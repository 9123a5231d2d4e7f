#pragma once

#include <cstdint>
#include <vector>

#include "envforge/creative.hpp"
#include "envforge/family.hpp"

namespace envforge {

// Mirror image of an auxiliary point P in every hyperplane of the family,
// with the Gauss direction of the resulting frontal where available.
// Samples with |(phi - P) . nu| <= 1e-9 are masked inadmissible, never
// dropped. Construction throws InadmissiblePoint only when no sample at all
// is admissible.
struct OrthotomicMap {
  Vec P;
  SampleGrid grid;
  std::vector<Vec> f_p;
  std::vector<Vec> v_p;
  std::vector<Vec> nu_p;
  std::vector<char> admissible;
  long admissible_count = 0;
};

// With a creator field the Gauss direction comes from the tangent formula
// v_P = sum_i ((omega - P) . b_i) b_i - ((phi - P) . nu) nu.
OrthotomicMap orthotomic(const HyperplaneFamily& fam, const CreatorField& creator,
                         const Vec& P);
// Without one, f_P alone is computed; fill nu_p afterwards if a frontal is
// known (chord rule below).
OrthotomicMap orthotomic(const HyperplaneFamily& fam, const SampleGrid& grid, const Vec& P);

// Chord rule nu_P = (f - f_P)/||f - f_P|| for a known frontal f.
void frontal_gauss(OrthotomicMap& ortho, const std::vector<Vec>& frontal);

struct PointField {
  SampleGrid grid;
  std::vector<Vec> points;
  std::vector<char> admissible;
  long admissible_count = 0;
};

// Inversion of the mirror construction: intersects each normal line of the
// orthotomic with the reconstructed mirror. Samples where the chord grazes
// the orthotomic, |(f_P - P) . nu_P| <= 1e-9, are masked; throws
// GrazingNormal when nothing remains.
PointField anti_orthotomic(const OrthotomicMap& ortho);

// Foot of the perpendicular from P onto each hyperplane; the midpoint of P
// and the orthotomic sample.
PointField pedal(const HyperplaneFamily& fam, const SampleGrid& grid, const Vec& P);

// Fixed-seed auxiliary point, redrawn until admissible on at least 95% of
// the grid samples.
Vec random_auxiliary_point(const HyperplaneFamily& fam, const SampleGrid& grid,
                           std::uint64_t seed);

// Support density gamma on the unit circle, as a function of the angle chart
// theta -> (cos theta, sin theta).
struct WulffDensity {
  Expr gamma;
  Interval domain{0.0, 6.283185307179586};
};

struct WulffShape {
  SampleGrid grid;
  std::vector<Vec> points;
};

// Boundary point grad gamma(x) + gamma(x) x for each sphere sample x; the
// gradient is the chart derivative times the unit tangent.
WulffShape cahn_hoffman(const WulffDensity& density, int samples = 401);

}  // namespace envforge
