#include "envforge/optics.hpp"

#include <cmath>
#include <cstddef>
#include <random>

#include "envforge/errors.hpp"

namespace envforge {

namespace {

std::size_t idx(long f) { return static_cast<std::size_t>(f); }

constexpr double kAdmissible = 1e-9;

OrthotomicMap mirror_images(const HyperplaneFamily& fam, const SampleGrid& grid,
                            const Vec& P) {
  if (P.dim != fam.ambient_dim())
    throw Error("auxiliary point must live in the ambient space of the family");
  OrthotomicMap out{P, grid, {}, {}, {}, {}, 0};
  long total = grid.total();
  out.f_p.resize(idx(total), Vec::zero(P.dim));
  out.v_p.resize(idx(total), Vec::zero(P.dim));
  out.nu_p.resize(idx(total), Vec::zero(P.dim));
  out.admissible.assign(idx(total), 0);
  for (long f = 0; f < total; ++f) {
    std::vector<double> x = grid.point(f);
    Vec phi = fam.phi_at(x);
    Vec nu = fam.nu_at(x);
    double depth = dot(phi - P, nu);
    out.f_p[idx(f)] = (2.0 * depth) * nu + P;
    if (std::abs(depth) > kAdmissible) {
      out.admissible[idx(f)] = 1;
      out.admissible_count += 1;
    }
  }
  return out;
}

}  // namespace

OrthotomicMap orthotomic(const HyperplaneFamily& fam, const SampleGrid& grid, const Vec& P) {
  OrthotomicMap out = mirror_images(fam, grid, P);
  if (out.admissible_count == 0)
    throw InadmissiblePoint("auxiliary point lies on every hyperplane of the family");
  return out;
}

OrthotomicMap orthotomic(const HyperplaneFamily& fam, const CreatorField& creator,
                         const Vec& P) {
  OrthotomicMap out = mirror_images(fam, creator.grid, P);
  for (long f = 0; f < creator.grid.total(); ++f) {
    if (!out.admissible[idx(f)]) continue;
    std::vector<double> x = creator.grid.point(f);
    Vec phi = fam.phi_at(x);
    Vec nu = fam.nu_at(x);
    const CreatorSample& cs = creator.samples[idx(f)];
    Vec v = (-dot(phi - P, nu)) * nu;
    for (int i = 0; i < fam.n; ++i) {
      const Vec& b = cs.frame.basis[static_cast<std::size_t>(i)];
      v += dot(cs.omega_ambient - P, b) * b;
    }
    double len = norm(v);
    if (len <= 1e-12) {
      out.admissible[idx(f)] = 0;
      out.admissible_count -= 1;
      continue;
    }
    out.v_p[idx(f)] = v;
    out.nu_p[idx(f)] = (1.0 / len) * v;
  }
  if (out.admissible_count == 0)
    throw InadmissiblePoint("auxiliary point lies on every hyperplane of the family");
  return out;
}

void frontal_gauss(OrthotomicMap& ortho, const std::vector<Vec>& frontal) {
  if (frontal.size() != ortho.f_p.size())
    throw Error("frontal sample count does not match the orthotomic grid");
  for (std::size_t i = 0; i < frontal.size(); ++i) {
    if (!ortho.admissible[i]) continue;
    Vec chord = frontal[i] - ortho.f_p[i];
    double len = norm(chord);
    if (len <= 1e-12) {
      ortho.admissible[i] = 0;
      ortho.admissible_count -= 1;
      continue;
    }
    ortho.v_p[i] = chord;
    ortho.nu_p[i] = (1.0 / len) * chord;
  }
}

PointField anti_orthotomic(const OrthotomicMap& ortho) {
  PointField out{ortho.grid, {}, {}, 0};
  long total = ortho.grid.total();
  out.points.resize(idx(total), Vec::zero(ortho.P.dim));
  out.admissible.assign(idx(total), 0);
  for (long f = 0; f < total; ++f) {
    if (!ortho.admissible[idx(f)]) continue;
    const Vec& nup = ortho.nu_p[idx(f)];
    if (nup.dim == 0 || norm(nup) == 0.0) continue;
    Vec chord = ortho.f_p[idx(f)] - ortho.P;
    double depth = dot(chord, nup);
    if (std::abs(depth) <= kAdmissible) continue;
    out.points[idx(f)] = ortho.f_p[idx(f)] - (dot(chord, chord) / (2.0 * depth)) * nup;
    out.admissible[idx(f)] = 1;
    out.admissible_count += 1;
  }
  if (out.admissible_count == 0)
    throw GrazingNormal("every normal line grazes the orthotomic");
  return out;
}

PointField pedal(const HyperplaneFamily& fam, const SampleGrid& grid, const Vec& P) {
  if (P.dim != fam.ambient_dim())
    throw Error("auxiliary point must live in the ambient space of the family");
  PointField out{grid, {}, {}, 0};
  long total = grid.total();
  out.points.resize(idx(total), Vec::zero(P.dim));
  out.admissible.assign(idx(total), 0);
  for (long f = 0; f < total; ++f) {
    std::vector<double> x = grid.point(f);
    Vec phi = fam.phi_at(x);
    Vec nu = fam.nu_at(x);
    double depth = dot(phi - P, nu);
    out.points[idx(f)] = depth * nu + P;
    if (std::abs(depth) > kAdmissible) {
      out.admissible[idx(f)] = 1;
      out.admissible_count += 1;
    }
  }
  return out;
}

Vec random_auxiliary_point(const HyperplaneFamily& fam, const SampleGrid& grid,
                           std::uint64_t seed) {
  int dim = fam.ambient_dim();
  Vec lo = Vec::zero(dim);
  Vec hi = Vec::zero(dim);
  bool first = true;
  for (long f = 0; f < grid.total(); ++f) {
    std::vector<double> x = grid.point(f);
    Vec phi = fam.phi_at(x);
    for (int c = 0; c < dim; ++c) {
      lo[c] = first ? phi[c] : std::min(lo[c], phi[c]);
      hi[c] = first ? phi[c] : std::max(hi[c], phi[c]);
    }
    first = false;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int attempt = 0; attempt < 256; ++attempt) {
    Vec P = Vec::zero(dim);
    for (int c = 0; c < dim; ++c) {
      double half = 0.5 * (hi[c] - lo[c]) + 1.0;
      P[c] = 0.5 * (lo[c] + hi[c]) + 1.5 * half * unit(rng);
    }
    long good = 0;
    for (long f = 0; f < grid.total(); ++f) {
      std::vector<double> x = grid.point(f);
      if (std::abs(dot(fam.phi_at(x) - P, fam.nu_at(x))) > kAdmissible) good += 1;
    }
    if (20 * good >= 19 * grid.total()) return P;
  }
  throw InadmissiblePoint("no auxiliary point admissible on 95% of samples after 256 draws");
}

WulffShape cahn_hoffman(const WulffDensity& density, int samples) {
  SampleGrid grid = SampleGrid::uniform({density.domain}, samples);
  WulffShape out{grid, {}};
  out.points.reserve(idx(grid.total()));
  for (long f = 0; f < grid.total(); ++f) {
    double theta = grid.coord(0, static_cast<int>(f));
    double x[] = {theta};
    DualNumber g = eval_dual(density.gamma, x);
    Vec radial(std::cos(theta), std::sin(theta));
    Vec tangent(-std::sin(theta), std::cos(theta));
    out.points.push_back(g.partials[0] * tangent + g.value * radial);
  }
  return out;
}

}  // namespace envforge
