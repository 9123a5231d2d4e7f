#include "envforge/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include "envforge/errors.hpp"

namespace envforge {

namespace {

std::size_t idx(long f) { return static_cast<std::size_t>(f); }

// Fourth-order first derivative along one grid line; second order when the
// line is too short for the five-point stencils.
Vec line_derivative(const std::vector<Vec>& line, int i, double h) {
  int count = static_cast<int>(line.size());
  std::size_t u = static_cast<std::size_t>(i);
  if (count >= 5) {
    if (i >= 2 && i <= count - 3)
      return (1.0 / (12.0 * h)) *
             (line[u - 2] - 8.0 * line[u - 1] + 8.0 * line[u + 1] - line[u + 2]);
    if (i == 0)
      return (1.0 / (12.0 * h)) * (-25.0 * line[0] + 48.0 * line[1] - 36.0 * line[2] +
                                   16.0 * line[3] - 3.0 * line[4]);
    if (i == 1)
      return (1.0 / (12.0 * h)) *
             (-3.0 * line[0] - 10.0 * line[1] + 18.0 * line[2] - 6.0 * line[3] + line[4]);
    std::size_t e = static_cast<std::size_t>(count - 1);
    if (i == count - 1)
      return (1.0 / (12.0 * h)) * (25.0 * line[e] - 48.0 * line[e - 1] + 36.0 * line[e - 2] -
                                   16.0 * line[e - 3] + 3.0 * line[e - 4]);
    return (1.0 / (12.0 * h)) *
           (3.0 * line[e] + 10.0 * line[e - 1] - 18.0 * line[e - 2] + 6.0 * line[e - 3] -
            line[e - 4]);
  }
  if (i > 0 && i < count - 1) return (0.5 / h) * (line[u + 1] - line[u - 1]);
  if (i == 0) return (1.0 / h) * (line[1] - line[0]);
  return (1.0 / h) * (line[u] - line[u - 1]);
}

struct ResidualAccumulator {
  VerificationReport rep;
  double phi_sup = 0.0;

  void membership(double r, long f) {
    if (r > rep.max_membership) {
      rep.max_membership = r;
      rep.max_membership_at = f;
    }
  }
  void tangency(double r, long f) {
    if (r > rep.max_tangency) {
      rep.max_tangency = r;
      rep.max_tangency_at = f;
    }
  }
  VerificationReport finish() {
    rep.tol = 1e-6 * (1.0 + phi_sup);
    rep.pass = rep.max_membership <= rep.tol && rep.max_tangency <= rep.tol;
    return rep;
  }
};

// Smooth cutoff: 1 at the box center, 0 at and beyond the box faces, except
// along axes the box spans entirely (nothing to vanish towards there).
double bump_factor(const FlaggedBox& box, const std::array<int, 2>& at,
                   const SampleGrid& grid) {
  double factor = 1.0;
  for (int a = 0; a < grid.dim(); ++a) {
    std::size_t ua = static_cast<std::size_t>(a);
    if (box.lo[ua] == 0 && box.hi[ua] == grid.counts[static_cast<std::size_t>(a)] - 1) continue;
    double width = static_cast<double>(box.hi[ua] - box.lo[ua]);
    if (width == 0.0) return 0.0;
    double s = 2.0 * static_cast<double>(at[ua] - box.lo[ua]) / width - 1.0;
    if (std::abs(s) >= 1.0) return 0.0;
    factor *= std::exp(1.0 - 1.0 / (1.0 - s * s));
  }
  return factor;
}

}  // namespace

EnvelopeMap build_envelope(const HyperplaneFamily& fam, const CreatorField& creator) {
  EnvelopeMap env{creator.grid, {}};
  env.samples.reserve(static_cast<std::size_t>(creator.grid.total()));
  for (long f = 0; f < creator.grid.total(); ++f) {
    std::vector<double> x = creator.grid.point(f);
    SupportValue sv = support(fam, x);
    Vec nu = fam.nu_at(x);
    Vec gn = sv.gamma * nu;
    Vec omega = creator.samples[idx(f)].omega_ambient;
    env.samples.push_back(EnvelopeSample{omega + gn, omega, gn});
  }
  return env;
}

ResidualSamples envelope_residuals(const HyperplaneFamily& fam, const EnvelopeMap& env) {
  const SampleGrid& grid = env.grid;
  ResidualSamples out;
  out.membership.resize(static_cast<std::size_t>(grid.total()), 0.0);
  for (long f = 0; f < grid.total(); ++f) {
    std::vector<double> x = grid.point(f);
    out.membership[idx(f)] =
        std::abs(dot(env.samples[idx(f)].f - fam.phi_at(x), fam.nu_at(x)));
  }
  // tangency from grid derivatives, one axis line at a time
  std::vector<double> tang(static_cast<std::size_t>(grid.total()), 0.0);
  for (int a = 0; a < grid.dim(); ++a) {
    int count = grid.counts[static_cast<std::size_t>(a)];
    double h = grid.step(a);
    long lines = grid.total() / count;
    std::vector<Vec> line(static_cast<std::size_t>(count));
    for (long l = 0; l < lines; ++l) {
      std::array<int, 2> at{0, 0};
      if (grid.dim() == 2) at[static_cast<std::size_t>(1 - a)] = static_cast<int>(l);
      for (int i = 0; i < count; ++i) {
        at[static_cast<std::size_t>(a)] = i;
        line[static_cast<std::size_t>(i)] =
            env.samples[idx(grid.flatten(std::span<const int>(at.data(),
                                                              static_cast<std::size_t>(grid.dim()))))]
                .f;
      }
      for (int i = 0; i < count; ++i) {
        at[static_cast<std::size_t>(a)] = i;
        long f = grid.flatten(
            std::span<const int>(at.data(), static_cast<std::size_t>(grid.dim())));
        std::vector<double> x = grid.point(f);
        double d = dot(line_derivative(line, i, h), fam.nu_at(x));
        tang[idx(f)] += d * d;
      }
    }
  }
  out.tangency.resize(static_cast<std::size_t>(grid.total()), 0.0);
  for (long f = 0; f < grid.total(); ++f) out.tangency[idx(f)] = std::sqrt(tang[idx(f)]);
  return out;
}

VerificationReport verify_envelope(const HyperplaneFamily& fam, const EnvelopeMap& env) {
  const SampleGrid& grid = env.grid;
  ResidualSamples res = envelope_residuals(fam, env);
  ResidualAccumulator acc;
  for (long f = 0; f < grid.total(); ++f) {
    acc.phi_sup = std::max(acc.phi_sup, norm(fam.phi_at(grid.point(f))));
    acc.membership(res.membership[idx(f)], f);
    acc.tangency(res.tangency[idx(f)], f);
  }
  return acc.finish();
}

VerificationReport verify_envelope(const HyperplaneFamily& fam, const std::vector<Expr>& f,
                                   const SampleGrid& grid) {
  if (static_cast<int>(f.size()) != fam.ambient_dim())
    throw Error("candidate envelope must have " + std::to_string(fam.ambient_dim()) +
                " components");
  ResidualAccumulator acc;
  for (long s = 0; s < grid.total(); ++s) {
    std::vector<double> x = grid.point(s);
    Vec phi = fam.phi_at(x);
    Vec nu = fam.nu_at(x);
    acc.phi_sup = std::max(acc.phi_sup, norm(phi));
    VecJet fj = eval_vec_jet(f, x);
    acc.membership(std::abs(dot(fj.value - phi, nu)), s);
    double t2 = 0.0;
    for (int j = 0; j < grid.dim(); ++j) {
      double d = dot(fj.partial[static_cast<std::size_t>(j)], nu);
      t2 += d * d;
    }
    acc.tangency(std::sqrt(t2), s);
  }
  return acc.finish();
}

E1Estimate e1_envelope(const HyperplaneFamily& fam, const SampleGrid& grid,
                       const EnvelopeMap& reference) {
  if (fam.n != 1) throw NotApplicable("intersection-limit envelope needs a one-parameter family");
  E1Estimate est{grid, {}, 0, 0.0, -1, 0.0};
  est.samples.resize(static_cast<std::size_t>(grid.total()));
  double h0 = 1e-2 * fam.domain[0].width();
  bool any = false;
  for (long s = 0; s < grid.total(); ++s) {
    double t0 = grid.coord(0, static_cast<int>(s));
    double x0[] = {t0};
    Vec nu0 = fam.nu_at(x0);
    double g0 = support(fam, x0).gamma;
    // offsets whose planes are parallel to the base plane carry no
    // intersection and are dropped from the extrapolation table
    std::array<Vec, 4> p;
    std::array<double, 4> hs;
    std::array<bool, 4> ok{};
    int valid = 0;
    for (int k = 0; k < 4; ++k) {
      std::size_t uk = static_cast<std::size_t>(k);
      double h = h0 / static_cast<double>(1 << k);
      double x1[] = {t0 + h};
      Vec nu1 = fam.nu_at(x1);
      double g1 = support(fam, x1).gamma;
      double det = nu0[0] * nu1[1] - nu0[1] * nu1[0];
      hs[uk] = h;
      if (std::abs(det) <= 1e-14) continue;
      p[uk] = Vec((g0 * nu1[1] - g1 * nu0[1]) / det, (g1 * nu0[0] - g0 * nu1[0]) / det);
      ok[uk] = true;
      valid += 1;
    }
    E1Sample& out = est.samples[idx(s)];
    if (valid == 0) {
      out.status = E1Status::ParallelLines;
      continue;
    }
    // polynomial extrapolation in h to h = 0 over the valid offsets; with all
    // four offsets this is iterated Richardson for an O(h) leading error
    auto extrapolate = [&](int from) {
      Vec e = Vec::zero(fam.ambient_dim());
      for (int k = from; k < 4; ++k) {
        if (!ok[static_cast<std::size_t>(k)]) continue;
        double w = 1.0;
        for (int j = from; j < 4; ++j) {
          if (j == k || !ok[static_cast<std::size_t>(j)]) continue;
          std::size_t uj = static_cast<std::size_t>(j);
          std::size_t uk = static_cast<std::size_t>(k);
          w *= -hs[uj] / (hs[uk] - hs[uj]);
        }
        e = e + w * p[static_cast<std::size_t>(k)];
      }
      return e;
    };
    Vec e1 = extrapolate(0);
    out.point = e1;
    // dropping the coarsest offset must not move the answer; when it does the
    // expansion is contaminated and the limit is not trustworthy
    int coarsest = 0;
    while (!ok[static_cast<std::size_t>(coarsest)]) coarsest += 1;
    double correction = valid >= 2 ? norm(e1 - extrapolate(coarsest + 1))
                                   : std::numeric_limits<double>::infinity();
    // empirical order: worst ratio over consecutive dyadic triples; a clean
    // O(h) error gives 1 on every triple, contamination drives it to 0
    bool have_order = false;
    double order = 0.0;
    for (int k = 0; k + 2 < 4; ++k) {
      std::size_t uk = static_cast<std::size_t>(k);
      if (!ok[uk] || !ok[uk + 1] || !ok[uk + 2]) continue;
      double da = norm(p[uk] - p[uk + 1]);
      double db = norm(p[uk + 1] - p[uk + 2]);
      double o;
      if (db < 1e-300)
        o = da < 1e-300 ? 1.0 : 4.0;
      else
        o = std::log2(da / db);
      order = have_order ? std::min(order, o) : o;
      have_order = true;
    }
    out.order = have_order ? order : 0.0;
    out.distance = norm(out.point - reference.samples[idx(s)].f);
    bool shaky = out.order < 0.5 || correction > 5e-6 * (1.0 + norm(e1));
    out.status = shaky ? E1Status::Unreliable : E1Status::Ok;
    if (out.status == E1Status::Ok) {
      est.defined += 1;
      if (!any || out.distance > est.max_distance) {
        est.max_distance = out.distance;
        est.max_distance_at = s;
      }
      est.min_order = any ? std::min(est.min_order, out.order) : out.order;
      any = true;
    }
  }
  return est;
}

E1Estimate e1_envelope(const HyperplaneFamily& fam, const SampleGrid& grid) {
  CreatorSolution sol = solve_creator(fam, grid);
  return e1_envelope(fam, grid, build_envelope(fam, sol.field));
}

std::vector<EnvelopeMap> alternative_envelopes(const HyperplaneFamily& fam,
                                               const CreatorSolution& sol,
                                               const std::vector<Expr>& alphas) {
  if (sol.report.uniqueness == Uniqueness::Unique)
    throw NotApplicable("envelope is unique; there is no member family to choose from");
  const SampleGrid& grid = sol.field.grid;
  long total = grid.total();

  // unit kernel directions, sign-aligned along the grid
  std::vector<Vec> kernel(static_cast<std::size_t>(total));
  std::vector<char> have(static_cast<std::size_t>(total), 0);
  for (long f = 0; f < total; ++f) {
    if (!sol.field.samples[idx(f)].singular) continue;
    std::vector<double> x = grid.point(f);
    AmbiguityBasis amb = creator_ambiguity(fam, x);
    Vec k = amb.ambient[0];
    std::array<int, 2> at = grid.unflatten(f);
    bool aligned = false;
    for (int a = 0; a < grid.dim(); ++a) {
      if (at[static_cast<std::size_t>(a)] == 0) continue;
      std::array<int, 2> nb = at;
      nb[static_cast<std::size_t>(a)] -= 1;
      long fn = grid.flatten(
          std::span<const int>(nb.data(), static_cast<std::size_t>(grid.dim())));
      if (!have[idx(fn)]) continue;
      double d = dot(k, kernel[idx(fn)]);
      if (d != 0.0) {
        if (d < 0.0) k = -1.0 * k;
        aligned = true;
        break;
      }
    }
    if (!aligned) {
      int lead = 0;
      for (int c = 1; c < k.dim; ++c)
        if (std::abs(k[c]) > std::abs(k[lead])) lead = c;
      if (k[lead] < 0.0) k = -1.0 * k;
    }
    kernel[idx(f)] = k;
    have[idx(f)] = 1;
  }

  std::vector<double> factor(static_cast<std::size_t>(total), 0.0);
  for (long f = 0; f < total; ++f) {
    if (!have[idx(f)]) continue;
    std::array<int, 2> at = grid.unflatten(f);
    for (const FlaggedBox& box : sol.report.flagged) {
      bool inside = true;
      for (int a = 0; a < grid.dim(); ++a) {
        std::size_t ua = static_cast<std::size_t>(a);
        if (at[ua] < box.lo[ua] || at[ua] > box.hi[ua]) inside = false;
      }
      if (inside) {
        factor[idx(f)] = bump_factor(box, at, grid);
        break;
      }
    }
  }

  EnvelopeMap base = build_envelope(fam, sol.field);
  std::vector<EnvelopeMap> out;
  out.reserve(alphas.size());
  for (const Expr& alpha : alphas) {
    EnvelopeMap env = base;
    for (long f = 0; f < total; ++f) {
      if (!have[idx(f)] || factor[idx(f)] == 0.0) continue;
      std::vector<double> x = grid.point(f);
      Vec shift = (eval(alpha, x) * factor[idx(f)]) * kernel[idx(f)];
      env.samples[idx(f)].omega = env.samples[idx(f)].omega + shift;
      env.samples[idx(f)].f = env.samples[idx(f)].f + shift;
    }
    out.push_back(std::move(env));
  }
  return out;
}

ClairautSolution clairaut_singular_solution(const Expr& gamma, int n,
                                            const std::array<Interval, 2>& dom, int samples) {
  HyperplaneFamily fam = clairaut_family(gamma, n, dom, samples);
  SampleGrid grid = fam.grid(samples);
  CreatorSolution sol = solve_creator(fam, grid);
  EnvelopeMap env = build_envelope(fam, sol.field);
  ClairautSolution out{grid, {}};
  out.points.reserve(env.samples.size());
  for (const EnvelopeSample& s : env.samples) out.points.push_back(s.f);
  return out;
}

ClairautSolution clairaut_singular_solution(double c, int n, int samples) {
  return clairaut_singular_solution(mk_const(c), n, {Interval{-2.2, 2.2}, Interval{-2.2, 2.2}},
                                    samples);
}

}  // namespace envforge
