#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "cncfl/errors.hpp"

namespace cncfl {

/// Sparsity penalty families. Every kind has unit slope at the origin and
/// curvature -a at 0+, so `a` is the degree of non-convexity in all of them.
enum class PenaltyKind { L1, Log, Atan, Rational };

template <typename Scalar = double>
struct PenaltySpecT {
  PenaltyKind kind = PenaltyKind::L1;
  Scalar a = Scalar(0);
};

using PenaltySpec = PenaltySpecT<double>;

inline std::string_view to_string(PenaltyKind kind) {
  switch (kind) {
  case PenaltyKind::L1:
    return "l1";
  case PenaltyKind::Log:
    return "log";
  case PenaltyKind::Atan:
    return "atan";
  case PenaltyKind::Rational:
    return "rational";
  }
  return "?";
}

inline PenaltyKind parse_penalty_kind(std::string_view name) {
  if (name == "l1")
    return PenaltyKind::L1;
  if (name == "log")
    return PenaltyKind::Log;
  if (name == "atan")
    return PenaltyKind::Atan;
  if (name == "rational")
    return PenaltyKind::Rational;
  throw ParameterError("unknown penalty kind '" + std::string(name) + "'");
}

template <typename Scalar>
void validate(const PenaltySpecT<Scalar> &p) {
  using std::isfinite;
  if (!(p.a >= Scalar(0)) || !isfinite(p.a))
    throw ParameterError("penalty parameter a must be finite and >= 0");
}

/// The non-convexity degree actually in effect: L1 ignores `a`.
template <typename Scalar>
Scalar effective_a(const PenaltySpecT<Scalar> &p) {
  validate(p);
  return p.kind == PenaltyKind::L1 ? Scalar(0) : p.a;
}

namespace detail {

// All kinds are written in the scaled variable t = a|x| >= 0 so that
//   phi(x;a) = phi_unit(t) / a,  s(x;a) = s_unit(t) / a,
//   s'(x;a)  = sign(x) * ds_unit(t).
// Below this t the residual s_unit uses its Taylor series; the closed form
// loses digits to cancellation there.
template <typename Scalar> constexpr Scalar series_cutoff() {
  return Scalar(1e-3);
}

template <typename Scalar> Scalar phi_unit(PenaltyKind kind, Scalar t) {
  using std::atan;
  using std::log1p;
  using std::sqrt;
  switch (kind) {
  case PenaltyKind::Log:
    return log1p(t);
  case PenaltyKind::Rational:
    return t / (Scalar(1) + t / Scalar(2));
  case PenaltyKind::Atan: {
    // atan((1+2t)/sqrt3) - pi/6 folded into a single atan (no cancellation).
    const Scalar sqrt3 = sqrt(Scalar(3));
    return Scalar(2) / sqrt3 * atan(sqrt3 * t / (Scalar(2) + t));
  }
  case PenaltyKind::L1:
    break;
  }
  return t;
}

template <typename Scalar> Scalar s_unit(PenaltyKind kind, Scalar t) {
  const Scalar t2 = t * t;
  switch (kind) {
  case PenaltyKind::Log:
    if (t < series_cutoff<Scalar>())
      return -t2 * (Scalar(1) / 2 -
                    t * (Scalar(1) / 3 -
                         t * (Scalar(1) / 4 -
                              t * (Scalar(1) / 5 - t * (Scalar(1) / 6)))));
    return phi_unit(kind, t) - t;
  case PenaltyKind::Rational:
    return -t2 / (Scalar(2) + t);
  case PenaltyKind::Atan:
    // integral of 1/(1+t+t^2) - 1 = -t + t^2 - t^4 + t^5 - t^7 + ...
    if (t < series_cutoff<Scalar>())
      return t2 * (-Scalar(1) / 2 +
                   t2 * (Scalar(1) / 4 -
                         t * (Scalar(1) / 5 - t2 * (Scalar(1) / 7 - t / 8))));
    return phi_unit(kind, t) - t;
  case PenaltyKind::L1:
    break;
  }
  return Scalar(0);
}

template <typename Scalar> Scalar ds_unit(PenaltyKind kind, Scalar t) {
  switch (kind) {
  case PenaltyKind::Log:
    return -t / (Scalar(1) + t);
  case PenaltyKind::Rational: {
    const Scalar h = Scalar(1) + t / Scalar(2);
    return -t * (Scalar(1) + t / Scalar(4)) / (h * h);
  }
  case PenaltyKind::Atan:
    return -t * (Scalar(1) + t) / (Scalar(1) + t + t * t);
  case PenaltyKind::L1:
    break;
  }
  return Scalar(0);
}

} // namespace detail

/// Penalty value phi(x;a). Reduces to |x| exactly when a = 0.
template <typename Scalar>
Scalar phi(Scalar x, const PenaltySpecT<Scalar> &p) {
  using std::abs;
  const Scalar a = effective_a(p);
  if (a == Scalar(0))
    return abs(x);
  return detail::phi_unit(p.kind, a * abs(x)) / a;
}

/// Smooth concave residual s(x;a) = phi(x;a) - |x|, evaluated in closed form.
template <typename Scalar>
Scalar s_value(Scalar x, const PenaltySpecT<Scalar> &p) {
  using std::abs;
  const Scalar a = effective_a(p);
  if (a == Scalar(0))
    return Scalar(0);
  return detail::s_unit(p.kind, a * abs(x)) / a;
}

/// Derivative s'(x;a). Odd in x, zero at the origin, |s'| < 1.
template <typename Scalar>
Scalar s_prime(Scalar x, const PenaltySpecT<Scalar> &p) {
  using std::abs;
  const Scalar a = effective_a(p);
  if (a == Scalar(0) || x == Scalar(0))
    return Scalar(0);
  const Scalar d = detail::ds_unit(p.kind, a * abs(x));
  return x > Scalar(0) ? d : -d;
}

/// Tangent-line majorizer of phi at v: |x| + s'(v)(x - v) + s(v).
/// Dominates phi everywhere and touches it at x = v.
template <typename Scalar>
Scalar phi_majorizer(Scalar x, Scalar v, const PenaltySpecT<Scalar> &p) {
  using std::abs;
  return abs(x) + s_prime(v, p) * (x - v) + s_value(v, p);
}

} // namespace cncfl
