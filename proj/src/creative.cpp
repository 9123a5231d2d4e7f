#include "envforge/creative.hpp"

#include <algorithm>
#include <cmath>

namespace envforge {

namespace {

struct SystemData {
  Mat2 jt;                      // J^T: one row per parameter, one column per frame axis
  std::array<double, 2> g{0.0, 0.0};
  double gnorm = 0.0;
  TangentFrame frame;
};

SystemData assemble(const HyperplaneFamily& fam, std::span<const double> x) {
  VecJet nu = eval_vec_jet(fam.nu, x);
  VecJet ph = eval_vec_jet(fam.phi, x);
  SystemData sd{Mat2::zero(fam.n, fam.n), {0.0, 0.0}, 0.0,
                make_frame(UnitVector(nu.value))};
  for (int j = 0; j < fam.n; ++j) {
    for (int i = 0; i < fam.n; ++i)
      sd.jt(j, i) = dot(sd.frame.basis[static_cast<std::size_t>(i)],
                        nu.partial[static_cast<std::size_t>(j)]);
    sd.g[static_cast<std::size_t>(j)] =
        dot(ph.partial[static_cast<std::size_t>(j)], nu.value) +
        dot(ph.value, nu.partial[static_cast<std::size_t>(j)]);
  }
  sd.gnorm = std::sqrt(sd.g[0] * sd.g[0] + sd.g[1] * sd.g[1]);
  return sd;
}

CreatorSample solve_sample(const SystemData& sd, int n) {
  LstsqResult ls = lstsq_minnorm(sd.jt, sd.g, kSigmaRank);
  CreatorSample s{sd.frame, {}, {}, 0.0, 0, false, false, false};
  s.omega = ls.x;
  s.omega_ambient = TangentVector{sd.frame, ls.x}.ambient();
  s.residual = ls.residual;
  s.rank = ls.rank;
  s.singular = ls.rank < n;
  s.failed = ls.residual > tol_creative(sd.gnorm);
  return s;
}

double maxabs(const std::array<double, 5>& a, int m) {
  double best = 0.0;
  for (int i = 0; i < m; ++i) best = std::max(best, std::abs(a[i]));
  return best;
}

// Exact degree-(m-1) interpolation coefficients in powers of zeta.
std::array<double, 5> poly_coeffs(const std::array<double, 5>& zeta,
                                  const std::array<double, 5>& y, int m) {
  std::array<std::array<double, 5>, 5> a{};
  std::array<double, 5> b{};
  for (int r = 0; r < m; ++r) {
    double p = 1.0;
    for (int c = 0; c < m; ++c) {
      a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = p;
      p *= zeta[static_cast<std::size_t>(r)];
    }
    b[static_cast<std::size_t>(r)] = y[static_cast<std::size_t>(r)];
  }
  gauss_solve5(m, a, b);
  return b;
}

double lagrange_at_zero(const std::array<double, 5>& zeta,
                        const std::array<double, 5>& y, int m) {
  double s = 0.0;
  for (int j = 0; j < m; ++j) {
    double w = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == j) continue;
      w *= (0.0 - zeta[static_cast<std::size_t>(i)]) /
           (zeta[static_cast<std::size_t>(j)] - zeta[static_cast<std::size_t>(i)]);
    }
    s += w * y[static_cast<std::size_t>(j)];
  }
  return s;
}

// Ratio limit num/den at sample k of a one-parameter grid: interpolate both
// on the 5 nearest samples (offsets as the abscissa, so the limit sits at 0)
// and cancel the common vanishing order. False when the limit does not exist.
bool ratio_limit_1d(const std::vector<double>& num, const std::vector<double>& den,
                    long k, long total, double* out) {
  long n0 = std::clamp(k - 2, 0L, total - 5);
  std::array<double, 5> zeta{}, ny{}, dy{};
  for (int j = 0; j < 5; ++j) {
    zeta[static_cast<std::size_t>(j)] = static_cast<double>(n0 + j - k);
    ny[static_cast<std::size_t>(j)] = num[static_cast<std::size_t>(n0 + j)];
    dy[static_cast<std::size_t>(j)] = den[static_cast<std::size_t>(n0 + j)];
  }
  std::array<double, 5> nc = poly_coeffs(zeta, ny, 5);
  std::array<double, 5> dc = poly_coeffs(zeta, dy, 5);
  double dthr = 1e-7 * (1.0 + maxabs(dc, 5));
  int kden = -1;
  for (int i = 0; i < 5; ++i) {
    if (std::abs(dc[static_cast<std::size_t>(i)]) > dthr) {
      kden = i;
      break;
    }
  }
  if (kden < 0) return false;  // denominator vanishes identically
  double nthr = 1e-7 * (1.0 + maxabs(nc, 5));
  for (int i = 0; i < kden; ++i)
    if (std::abs(nc[static_cast<std::size_t>(i)]) > nthr) return false;  // pole
  *out = nc[static_cast<std::size_t>(kden)] / dc[static_cast<std::size_t>(kden)];
  return true;
}

void require_treatable(const SampleGrid& grid) {
  for (int c : grid.counts)
    if (c < 5) throw GridTooCoarse("limit treatment needs at least 5 samples per axis");
}

// Nearest regular samples along one axis through `idx`, sorted by |offset|.
// Returns how many were found (up to 5).
int gather_regular_line(const SampleGrid& grid, const std::vector<CreatorSample>& samples,
                        std::array<int, 2> idx, int axis, std::array<double, 5>* zeta,
                        std::array<long, 5>* flats) {
  int found = 0;
  int count = grid.counts[static_cast<std::size_t>(axis)];
  for (int d = 1; d < count && found < 5; ++d) {
    for (int sgn : {-1, 1}) {
      if (found >= 5) break;
      int pos = idx[static_cast<std::size_t>(axis)] + sgn * d;
      if (pos < 0 || pos >= count) continue;
      std::array<int, 2> nb = idx;
      nb[static_cast<std::size_t>(axis)] = pos;
      long flat = grid.flatten(std::span<const int>(nb.data(), static_cast<std::size_t>(grid.dim())));
      if (samples[static_cast<std::size_t>(flat)].singular) continue;
      (*zeta)[static_cast<std::size_t>(found)] = static_cast<double>(sgn * d);
      (*flats)[static_cast<std::size_t>(found)] = flat;
      ++found;
    }
  }
  return found;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Creative: return "Creative";
    case Verdict::NotCreative: return "NotCreative";
    case Verdict::CreativeNonUnique: return "CreativeNonUnique";
  }
  return "?";
}

const char* to_string(Uniqueness u) {
  return u == Uniqueness::Unique ? "Unique" : "NonUnique";
}

CreatorSample creator_at(const HyperplaneFamily& fam, std::span<const double> x) {
  return solve_sample(assemble(fam, x), fam.n);
}

CreatorSolution solve_creator(const HyperplaneFamily& fam, const SampleGrid& grid) {
  if (grid.dim() != fam.n) throw Error("grid dimension does not match the family");
  long total = grid.total();

  std::vector<SystemData> systems;
  systems.reserve(static_cast<std::size_t>(total));
  CreatorField field{grid, {}};
  field.samples.reserve(static_cast<std::size_t>(total));
  for (long f = 0; f < total; ++f) {
    systems.push_back(assemble(fam, grid.point(f)));
    field.samples.push_back(solve_sample(systems.back(), fam.n));
  }

  // Limit treatment for samples whose system is rank-deficient yet inconsistent.
  for (long f = 0; f < total; ++f) {
    CreatorSample& s = field.samples[static_cast<std::size_t>(f)];
    if (!s.failed || !s.singular) continue;
    require_treatable(grid);
    const SystemData& sd = systems[static_cast<std::size_t>(f)];
    bool ok = false;
    if (fam.n == 1) {
      // scalar ratio gamma' / Theta' continued through the zero of Theta'
      static thread_local std::vector<double> num, den;
      num.resize(static_cast<std::size_t>(total));
      den.resize(static_cast<std::size_t>(total));
      for (long j = 0; j < total; ++j) {
        num[static_cast<std::size_t>(j)] = systems[static_cast<std::size_t>(j)].g[0];
        den[static_cast<std::size_t>(j)] = systems[static_cast<std::size_t>(j)].jt(0, 0);
      }
      double w = 0.0;
      if (ratio_limit_1d(num, den, f, total, &w)) {
        s.omega = {w, 0.0};
        ok = true;
      }
    } else {
      // extrapolate the ambient creator from regular neighbours, then accept
      // it only if it actually satisfies this sample's system
      std::array<int, 2> idx = grid.unflatten(f);
      Vec acc = Vec::zero(fam.ambient_dim());
      int votes = 0;
      for (int axis = 0; axis < fam.n; ++axis) {
        std::array<double, 5> zeta{};
        std::array<long, 5> flats{};
        if (gather_regular_line(grid, field.samples, idx, axis, &zeta, &flats) < 5) continue;
        Vec cand = Vec::zero(fam.ambient_dim());
        for (int c = 0; c < fam.ambient_dim(); ++c) {
          std::array<double, 5> y{};
          for (int j = 0; j < 5; ++j)
            y[static_cast<std::size_t>(j)] =
                field.samples[static_cast<std::size_t>(flats[static_cast<std::size_t>(j)])]
                    .omega_ambient[c];
          cand[c] = lagrange_at_zero(zeta, y, 5);
        }
        acc += cand;
        ++votes;
      }
      if (votes > 0) {
        acc *= 1.0 / votes;
        std::array<double, 2> w{};
        for (int i = 0; i < fam.n; ++i)
          w[static_cast<std::size_t>(i)] = dot(sd.frame.basis[static_cast<std::size_t>(i)], acc);
        double r0 = sd.jt(0, 0) * w[0] + sd.jt(0, 1) * w[1] - sd.g[0];
        double r1 = sd.jt(1, 0) * w[0] + sd.jt(1, 1) * w[1] - sd.g[1];
        if (std::sqrt(r0 * r0 + r1 * r1) <= tol_creative(sd.gnorm)) {
          s.omega = w;
          ok = true;
        }
      }
    }
    if (ok) {
      s.omega_ambient = TangentVector{sd.frame, s.omega}.ambient();
      s.limit_treated = true;
      s.failed = false;
      double r0 = sd.jt(0, 0) * s.omega[0] + sd.jt(0, 1) * s.omega[1] - sd.g[0];
      double r1 = fam.n == 2 ? sd.jt(1, 0) * s.omega[0] + sd.jt(1, 1) * s.omega[1] - sd.g[1] : 0.0;
      s.residual = std::sqrt(r0 * r0 + r1 * r1);
    }
  }

  CreativityReport rep;
  rep.grid = grid;
  rep.singular_mask.assign(static_cast<std::size_t>(total), 0);
  bool any_failed = false;
  for (long f = 0; f < total; ++f) {
    const CreatorSample& s = field.samples[static_cast<std::size_t>(f)];
    if (s.residual > rep.worst_residual) {
      rep.worst_residual = s.residual;
      rep.worst_residual_at = f;
    }
    if (s.singular) {
      rep.singular_mask[static_cast<std::size_t>(f)] = 1;
      rep.singular_samples.push_back(f);
      rep.kernel_dims.push_back(fam.n - s.rank);
    }
    any_failed = any_failed || s.failed;
  }
  rep.regular_fraction =
      1.0 - static_cast<double>(rep.singular_samples.size()) / static_cast<double>(total);

  // Continuity proxy: extrapolate the ambient creator onto each singular
  // sample from both sides; a mismatch means no continuous creator exists.
  for (long f : rep.singular_samples) {
    std::array<int, 2> idx = grid.unflatten(f);
    for (int axis = 0; axis < fam.n; ++axis) {
      int pos = idx[static_cast<std::size_t>(axis)];
      int count = grid.counts[static_cast<std::size_t>(axis)];
      if (pos < 5 || pos + 5 >= count) continue;
      bool clean = true;
      double scale = 0.0;
      std::array<double, 5> left{}, right{};
      for (int c = 0; c < fam.ambient_dim() && clean; ++c) {
        std::array<double, 5> zl{}, zr{};
        for (int d = 1; d <= 5; ++d) {
          std::array<int, 2> nb = idx;
          nb[static_cast<std::size_t>(axis)] = pos - d;
          long fl = grid.flatten(std::span<const int>(nb.data(), static_cast<std::size_t>(grid.dim())));
          nb[static_cast<std::size_t>(axis)] = pos + d;
          long fr = grid.flatten(std::span<const int>(nb.data(), static_cast<std::size_t>(grid.dim())));
          if (field.samples[static_cast<std::size_t>(fl)].singular ||
              field.samples[static_cast<std::size_t>(fr)].singular) {
            clean = false;
            break;
          }
          left[static_cast<std::size_t>(d - 1)] =
              field.samples[static_cast<std::size_t>(fl)].omega_ambient[c];
          right[static_cast<std::size_t>(d - 1)] =
              field.samples[static_cast<std::size_t>(fr)].omega_ambient[c];
          zl[static_cast<std::size_t>(d - 1)] = -d;
          zr[static_cast<std::size_t>(d - 1)] = d;
          scale = std::max({scale, std::abs(left[static_cast<std::size_t>(d - 1)]),
                            std::abs(right[static_cast<std::size_t>(d - 1)])});
        }
        if (!clean) break;
        double el = lagrange_at_zero(zl, left, 5);
        double er = lagrange_at_zero(zr, right, 5);
        double mismatch = std::abs(el - er);
        // Degree-3 vs degree-4 disagreement estimates each side's own
        // truncation error; a smooth creator on a coarse grid stays within
        // a few multiples of it, a genuine jump or pole exceeds it tenfold.
        double self_err = std::abs(el - lagrange_at_zero(zl, left, 4)) +
                          std::abs(er - lagrange_at_zero(zr, right, 4));
        if (mismatch > rep.worst_mismatch) {
          rep.worst_mismatch = mismatch;
          rep.worst_mismatch_at = f;
        }
        if (mismatch > std::max(1e-3 * (1.0 + scale), 4.0 * self_err))
          rep.continuity_failed = true;
      }
    }
  }

  if (any_failed || rep.continuity_failed) {
    rep.verdict = Verdict::NotCreative;
  } else {
    rep.verdict = Verdict::Creative;
    uniqueness_verdict(fam, rep);
  }
  return CreatorSolution{std::move(field), std::move(rep)};
}

Uniqueness uniqueness_verdict(const HyperplaneFamily& fam, CreativityReport& report) {
  const SampleGrid& grid = report.grid;
  long total = grid.total();
  if (static_cast<long>(report.singular_mask.size()) != total)
    throw Error("report carries no singular mask for this grid");

  // A sample votes NonUnique when it sits in a run of >= 3 consecutive
  // singular samples along every axis (grid proxy for a singular set with
  // nonempty interior, the negation of dense regular points).
  std::vector<char> flagged(static_cast<std::size_t>(total), 1);
  for (int axis = 0; axis < fam.n; ++axis) {
    std::vector<char> mark(static_cast<std::size_t>(total), 0);
    int count = grid.counts[static_cast<std::size_t>(axis)];
    int other = fam.n == 2 ? grid.counts[static_cast<std::size_t>(1 - axis)] : 1;
    for (int line = 0; line < other; ++line) {
      int run = 0;
      for (int pos = 0; pos <= count; ++pos) {
        bool sing = false;
        if (pos < count) {
          std::array<int, 2> idx{};
          idx[static_cast<std::size_t>(axis)] = pos;
          if (fam.n == 2) idx[static_cast<std::size_t>(1 - axis)] = line;
          long f = grid.flatten(std::span<const int>(idx.data(), static_cast<std::size_t>(fam.n)));
          sing = report.singular_mask[static_cast<std::size_t>(f)] != 0;
        }
        if (sing) {
          ++run;
        } else {
          if (run >= 3) {
            for (int back = pos - run; back < pos; ++back) {
              std::array<int, 2> idx{};
              idx[static_cast<std::size_t>(axis)] = back;
              if (fam.n == 2) idx[static_cast<std::size_t>(1 - axis)] = line;
              long f = grid.flatten(std::span<const int>(idx.data(), static_cast<std::size_t>(fam.n)));
              mark[static_cast<std::size_t>(f)] = 1;
            }
          }
          run = 0;
        }
      }
    }
    for (long f = 0; f < total; ++f)
      flagged[static_cast<std::size_t>(f)] =
          flagged[static_cast<std::size_t>(f)] && mark[static_cast<std::size_t>(f)];
  }

  // Bounding boxes of the flagged components (4-adjacency).
  report.flagged.clear();
  std::vector<char> seen(static_cast<std::size_t>(total), 0);
  std::vector<long> stack;
  for (long f0 = 0; f0 < total; ++f0) {
    if (!flagged[static_cast<std::size_t>(f0)] || seen[static_cast<std::size_t>(f0)]) continue;
    FlaggedBox box;
    std::array<int, 2> idx0 = grid.unflatten(f0);
    box.lo = box.hi = idx0;
    stack.assign(1, f0);
    seen[static_cast<std::size_t>(f0)] = 1;
    while (!stack.empty()) {
      long f = stack.back();
      stack.pop_back();
      std::array<int, 2> idx = grid.unflatten(f);
      for (int a = 0; a < fam.n; ++a) {
        box.lo[static_cast<std::size_t>(a)] = std::min(box.lo[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(a)]);
        box.hi[static_cast<std::size_t>(a)] = std::max(box.hi[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(a)]);
      }
      for (int a = 0; a < fam.n; ++a) {
        for (int sgn : {-1, 1}) {
          std::array<int, 2> nb = idx;
          nb[static_cast<std::size_t>(a)] += sgn;
          if (nb[static_cast<std::size_t>(a)] < 0 ||
              nb[static_cast<std::size_t>(a)] >= grid.counts[static_cast<std::size_t>(a)])
            continue;
          long fn = grid.flatten(std::span<const int>(nb.data(), static_cast<std::size_t>(fam.n)));
          if (flagged[static_cast<std::size_t>(fn)] && !seen[static_cast<std::size_t>(fn)]) {
            seen[static_cast<std::size_t>(fn)] = 1;
            stack.push_back(fn);
          }
        }
      }
    }
    report.flagged.push_back(box);
  }

  report.uniqueness = report.flagged.empty() ? Uniqueness::Unique : Uniqueness::NonUnique;
  if (report.uniqueness == Uniqueness::NonUnique && report.verdict == Verdict::Creative)
    report.verdict = Verdict::CreativeNonUnique;
  return report.uniqueness;
}

AmbiguityBasis creator_ambiguity(const HyperplaneFamily& fam, std::span<const double> x) {
  SystemData sd = assemble(fam, x);
  LstsqResult ls = lstsq_minnorm(sd.jt, sd.g, kSigmaRank);
  if (ls.kernel_dim == 0)
    throw FullRank("creator system has full rank here; no ambiguity");
  AmbiguityBasis out{sd.frame};
  out.kernel_dim = ls.kernel_dim;
  for (int k = 0; k < ls.kernel_dim; ++k) {
    out.components[static_cast<std::size_t>(k)] = ls.kernel[static_cast<std::size_t>(k)];
    out.ambient[static_cast<std::size_t>(k)] =
        TangentVector{sd.frame, ls.kernel[static_cast<std::size_t>(k)]}.ambient();
  }
  return out;
}

CreatorField creator_1d_fast(const HyperplaneFamily& fam, const SampleGrid& grid) {
  if (fam.n != 1) throw Error("fast creator path requires a one-parameter family");
  if (grid.dim() != 1) throw Error("grid dimension does not match the family");
  long total = grid.total();

  std::vector<double> theta_rate(static_cast<std::size_t>(total));
  std::vector<double> gprime(static_cast<std::size_t>(total));
  CreatorField field{grid, {}};
  field.samples.reserve(static_cast<std::size_t>(total));
  for (long f = 0; f < total; ++f) {
    std::vector<double> x = grid.point(f);
    VecJet nu = eval_vec_jet(fam.nu, x);
    VecJet ph = eval_vec_jet(fam.phi, x);
    TangentFrame frame = make_frame(UnitVector(nu.value));
    double tp = dot(frame.basis[0], nu.partial[0]);
    double gp = dot(ph.partial[0], nu.value) + dot(ph.value, nu.partial[0]);
    theta_rate[static_cast<std::size_t>(f)] = tp;
    gprime[static_cast<std::size_t>(f)] = gp;
    CreatorSample s{frame, {}, {}, 0.0, 0, false, false, false};
    if (tp != 0.0) {
      s.omega = {gp / tp, 0.0};
      s.rank = 1;
    } else {
      s.rank = 0;
      s.singular = true;
      s.residual = std::abs(gp);
      s.failed = s.residual > tol_creative(std::abs(gp));
    }
    s.omega_ambient = TangentVector{frame, s.omega}.ambient();
    field.samples.push_back(s);
  }

  for (long f = 0; f < total; ++f) {
    CreatorSample& s = field.samples[static_cast<std::size_t>(f)];
    if (!s.failed) continue;
    require_treatable(grid);
    double w = 0.0;
    if (ratio_limit_1d(gprime, theta_rate, f, total, &w)) {
      s.omega = {w, 0.0};
      s.omega_ambient = TangentVector{s.frame, s.omega}.ambient();
      s.limit_treated = true;
      s.failed = false;
    }
  }
  return field;
}

}  // namespace envforge
