#pragma once

#include <array>
#include <cmath>

namespace envforge {

/// Forward-mode dual number: a value and its first partials with respect to
/// the declared parameters (identity seed, d p_i / d p_j = delta_ij).
/// Arithmetic applies the chain rule exactly; no truncation error anywhere.
///
/// Domain checks (sqrt of a negative and the like) live in the expression
/// evaluator, which knows the offending sub-expression; the functions here
/// assume their arguments are inside the domain.
struct DualNumber {
  double value = 0.0;
  int nparams = 0;
  std::array<double, 4> partials{0.0, 0.0, 0.0, 0.0};

  static constexpr int kMaxParams = 4;

  static DualNumber constant(double v, int nparams) {
    DualNumber d;
    d.value = v;
    d.nparams = nparams;
    return d;
  }

  /// Seed for parameter `index`: value v, partial 1 in slot `index`.
  static DualNumber variable(double v, int index, int nparams) {
    DualNumber d = constant(v, nparams);
    d.partials[static_cast<std::size_t>(index)] = 1.0;
    return d;
  }
};

namespace dual_ops {

inline DualNumber add(const DualNumber& a, const DualNumber& b) {
  DualNumber r = a;
  r.value += b.value;
  for (int i = 0; i < r.nparams; ++i) r.partials[i] += b.partials[i];
  return r;
}

inline DualNumber sub(const DualNumber& a, const DualNumber& b) {
  DualNumber r = a;
  r.value -= b.value;
  for (int i = 0; i < r.nparams; ++i) r.partials[i] -= b.partials[i];
  return r;
}

inline DualNumber neg(const DualNumber& a) {
  DualNumber r = a;
  r.value = -r.value;
  for (int i = 0; i < r.nparams; ++i) r.partials[i] = -r.partials[i];
  return r;
}

inline DualNumber mul(const DualNumber& a, const DualNumber& b) {
  DualNumber r = DualNumber::constant(a.value * b.value, a.nparams);
  for (int i = 0; i < r.nparams; ++i)
    r.partials[i] = a.partials[i] * b.value + a.value * b.partials[i];
  return r;
}

inline DualNumber div(const DualNumber& a, const DualNumber& b) {
  DualNumber r = DualNumber::constant(a.value / b.value, a.nparams);
  double inv2 = 1.0 / (b.value * b.value);
  for (int i = 0; i < r.nparams; ++i)
    r.partials[i] = (a.partials[i] * b.value - a.value * b.partials[i]) * inv2;
  return r;
}

/// Chain rule for a unary function: value f(a), partials f'(a) * da.
inline DualNumber lift(const DualNumber& a, double f, double fprime) {
  DualNumber r = DualNumber::constant(f, a.nparams);
  for (int i = 0; i < r.nparams; ++i) r.partials[i] = fprime * a.partials[i];
  return r;
}

inline DualNumber sin(const DualNumber& a) { return lift(a, std::sin(a.value), std::cos(a.value)); }
inline DualNumber cos(const DualNumber& a) { return lift(a, std::cos(a.value), -std::sin(a.value)); }
inline DualNumber tan(const DualNumber& a) {
  double c = std::cos(a.value);
  return lift(a, std::tan(a.value), 1.0 / (c * c));
}
inline DualNumber sqrt(const DualNumber& a) {
  double s = std::sqrt(a.value);
  return lift(a, s, 0.5 / s);  // infinite slope at 0 is the honest answer
}
inline DualNumber exp(const DualNumber& a) {
  double e = std::exp(a.value);
  return lift(a, e, e);
}
inline DualNumber log(const DualNumber& a) { return lift(a, std::log(a.value), 1.0 / a.value); }

/// |a| with the subgradient convention sign(0) = 0.
inline DualNumber abs(const DualNumber& a) {
  double s = a.value > 0.0 ? 1.0 : (a.value < 0.0 ? -1.0 : 0.0);
  return lift(a, std::abs(a.value), s);
}

inline DualNumber atan2(const DualNumber& y, const DualNumber& x) {
  DualNumber r = DualNumber::constant(std::atan2(y.value, x.value), y.nparams);
  double d = x.value * x.value + y.value * y.value;
  for (int i = 0; i < r.nparams; ++i)
    r.partials[i] = (x.value * y.partials[i] - y.value * x.partials[i]) / d;
  return r;
}

/// a^k for integer k (negative base allowed).
inline DualNumber powi(const DualNumber& a, long long k) {
  double v = std::pow(a.value, static_cast<double>(k));
  double fp = k == 0 ? 0.0 : static_cast<double>(k) * std::pow(a.value, static_cast<double>(k - 1));
  return lift(a, v, fp);
}

/// a^b for a > 0 via exp(b log a).
inline DualNumber pow_general(const DualNumber& a, const DualNumber& b) {
  double v = std::pow(a.value, b.value);
  DualNumber r = DualNumber::constant(v, a.nparams);
  double la = std::log(a.value);
  for (int i = 0; i < r.nparams; ++i)
    r.partials[i] = v * (b.partials[i] * la + b.value * a.partials[i] / a.value);
  return r;
}

}  // namespace dual_ops
}  // namespace envforge
