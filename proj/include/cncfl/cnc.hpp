#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Core>

#include "cncfl/errors.hpp"
#include "cncfl/penalties.hpp"
#include "cncfl/prox.hpp"
#include "cncfl/types.hpp"

namespace cncfl {

enum class Initializer { L1Flsa, Zero };

/// Parameters of the convex non-convex fused lasso problem
///   F(x) = 1/2 ||y - x||^2 + lambda0 sum phi(x_n; a0)
///                          + lambda1 sum phi([Dx]_n; a1).
template <typename Scalar = double> struct CncConfigT {
  Scalar lambda0 = Scalar(1);
  Scalar lambda1 = Scalar(1);
  PenaltySpecT<Scalar> penalty0{};
  PenaltySpecT<Scalar> penalty1{};
  int max_iter = 50;
  /// Relative objective change at which the MM iteration stops.
  Scalar tol = Scalar(1e-9);
  /// Permit lambda0 == 0 (pure TVD inner step) or lambda1 == 0 (pure
  /// soft-thresholding).
  bool allow_degenerate = false;
  /// Skip the convexity-margin precondition in solve().
  bool allow_nonconvex = false;
  Initializer init = Initializer::L1Flsa;
};

using CncConfig = CncConfigT<double>;

template <typename Scalar = double> struct SolveResultT {
  SignalT<Scalar> x;
  /// F at every iterate, starting with the initializer.
  std::vector<Scalar> objective_history;
  int iterations = 0;
  bool converged = false;
};

using SolveResult = SolveResultT<double>;

/// Margins down to -slack count as convex; a0 = 1/lambda0 style choices
/// land a rounding error away from the boundary.
template <typename Scalar> constexpr Scalar convexity_slack() {
  return Scalar(16) * std::numeric_limits<Scalar>::epsilon();
}

template <typename Scalar> void validate(const CncConfigT<Scalar> &cfg) {
  using std::isfinite;
  auto check_lambda = [&](Scalar v, const char *name) {
    if (!isfinite(v) || v < Scalar(0) ||
        (v == Scalar(0) && !cfg.allow_degenerate))
      throw ParameterError(std::string(name) +
                           " must be finite and > 0 (or 0 in degenerate mode)");
  };
  check_lambda(cfg.lambda0, "lambda0");
  check_lambda(cfg.lambda1, "lambda1");
  validate(cfg.penalty0);
  validate(cfg.penalty1);
  if (cfg.max_iter <= 0)
    throw ParameterError("max_iter must be positive");
  if (!(cfg.tol > Scalar(0)) || !isfinite(cfg.tol))
    throw ParameterError("tol must be finite and > 0");
}

/// 1 - a0 lambda0 - 4 a1 lambda1 on the configured a values; F is strictly
/// convex when this is >= 0. Values within the slack of the boundary are
/// returned as exactly 0.
template <typename Scalar>
Scalar convexity_margin(const CncConfigT<Scalar> &cfg) {
  using std::abs;
  const Scalar m = Scalar(1) - cfg.penalty0.a * cfg.lambda0 -
                   Scalar(4) * cfg.penalty1.a * cfg.lambda1;
  return abs(m) <= convexity_slack<Scalar>() ? Scalar(0) : m;
}

template <typename Scalar> bool is_convex(const CncConfigT<Scalar> &cfg) {
  return convexity_margin(cfg) >= -convexity_slack<Scalar>();
}

/// Largest a1 keeping F convex for the given a0: places (a0, a1) on the
/// boundary line a0 lambda0 + 4 a1 lambda1 = 1.
template <typename Scalar>
Scalar select_a1(Scalar lambda0, Scalar lambda1, Scalar a0) {
  using std::isfinite;
  if (!(lambda0 >= Scalar(0)) || !(lambda1 > Scalar(0)) || !isfinite(lambda0) ||
      !isfinite(lambda1))
    throw ParameterError("select_a1 requires lambda0 >= 0 and lambda1 > 0");
  if (!(a0 >= Scalar(0)) || !isfinite(a0))
    throw ParameterError("select_a1 requires a0 >= 0");
  const Scalar budget = Scalar(1) - a0 * lambda0;
  if (budget < -convexity_slack<Scalar>()) {
    std::ostringstream msg;
    msg << "a0*lambda0 = " << a0 * lambda0
        << " exceeds 1; no convex choice of a1 exists";
    throw ParameterError(msg.str());
  }
  return std::max(Scalar(0), budget) / (Scalar(4) * lambda1);
}

namespace detail {

template <typename DerivedX, typename DerivedY>
void require_same_size(const Eigen::MatrixBase<DerivedX> &x,
                       const Eigen::MatrixBase<DerivedY> &y, const char *what) {
  if (x.size() != y.size() || x.size() == 0)
    throw SizeError(std::string(what) + ": signals must be non-empty and of equal length");
}

template <typename Derived, typename Fn>
typename Derived::Scalar sum_of(const Eigen::MatrixBase<Derived> &v, Fn &&fn) {
  typename Derived::Scalar acc(0);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    acc += fn(v(i));
  return acc;
}

template <typename Derived>
SignalT<typename Derived::Scalar>
differences_or_empty(const Eigen::MatrixBase<Derived> &x) {
  if (x.size() < 2)
    return SignalT<typename Derived::Scalar>(0);
  return diff(x);
}

} // namespace detail

/// The CNC fused lasso objective F.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar objective_F(const Eigen::MatrixBase<DerivedX> &x,
                                      const Eigen::MatrixBase<DerivedY> &y,
                                      const CncConfigT<typename DerivedX::Scalar> &cfg) {
  using Scalar = typename DerivedX::Scalar;
  detail::require_same_size(x, y, "objective_F");
  const SignalT<Scalar> dx = detail::differences_or_empty(x);
  const Scalar amp = detail::sum_of(x, [&](Scalar t) { return phi(t, cfg.penalty0); });
  const Scalar tv = detail::sum_of(dx, [&](Scalar t) { return phi(t, cfg.penalty1); });
  return Scalar(0.5) * (y - x).squaredNorm() + cfg.lambda0 * amp + cfg.lambda1 * tv;
}

/// Smooth part G = F - lambda0 ||x||_1 - lambda1 ||Dx||_1. Convexity of G
/// is what the margin condition certifies.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar objective_G(const Eigen::MatrixBase<DerivedX> &x,
                                      const Eigen::MatrixBase<DerivedY> &y,
                                      const CncConfigT<typename DerivedX::Scalar> &cfg) {
  using Scalar = typename DerivedX::Scalar;
  detail::require_same_size(x, y, "objective_G");
  const SignalT<Scalar> dx = detail::differences_or_empty(x);
  const Scalar amp = detail::sum_of(x, [&](Scalar t) { return s_value(t, cfg.penalty0); });
  const Scalar tv = detail::sum_of(dx, [&](Scalar t) { return s_value(t, cfg.penalty1); });
  return Scalar(0.5) * (y - x).squaredNorm() + cfg.lambda0 * amp + cfg.lambda1 * tv;
}

/// Majorizer of F at v with all constants kept: the penalties are replaced
/// by their tangent-line majorizers. Equals F at x = v and dominates it.
template <typename DerivedX, typename DerivedV, typename DerivedY>
typename DerivedX::Scalar
objective_majorizer(const Eigen::MatrixBase<DerivedX> &x,
                    const Eigen::MatrixBase<DerivedV> &v,
                    const Eigen::MatrixBase<DerivedY> &y,
                    const CncConfigT<typename DerivedX::Scalar> &cfg) {
  using Scalar = typename DerivedX::Scalar;
  detail::require_same_size(x, y, "objective_majorizer");
  detail::require_same_size(v, y, "objective_majorizer");
  Scalar amp(0), tv(0);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    amp += phi_majorizer(x(i), v(i), cfg.penalty0);
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i)
    tv += phi_majorizer(x(i + 1) - x(i), v(i + 1) - v(i), cfg.penalty1);
  return Scalar(0.5) * (y - x).squaredNorm() + cfg.lambda0 * amp + cfg.lambda1 * tv;
}

/// Input of the l1 FLSA problem whose minimizer is the MM update from v:
///   y - lambda0 s'(v; a0) - lambda1 D^T s'(Dv; a1).
template <typename DerivedV, typename DerivedY>
SignalT<typename DerivedV::Scalar>
majorized_input(const Eigen::MatrixBase<DerivedV> &v,
                const Eigen::MatrixBase<DerivedY> &y,
                const CncConfigT<typename DerivedV::Scalar> &cfg) {
  using Scalar = typename DerivedV::Scalar;
  detail::require_same_size(v, y, "majorized_input");
  const auto &p0 = cfg.penalty0;
  const auto &p1 = cfg.penalty1;
  SignalT<Scalar> out =
      y - cfg.lambda0 * v.unaryExpr([&](Scalar t) { return s_prime(t, p0); });
  if (v.size() >= 2) {
    const SignalT<Scalar> grad_tv =
        diff(v).unaryExpr([&](Scalar t) { return s_prime(t, p1); });
    out -= cfg.lambda1 * diff_adjoint(grad_tv);
  }
  return out;
}

/// Majorization-minimization solver for the CNC fused lasso problem.
///
/// Starts from the l1 FLSA solution (or zero, see Initializer) and repeats
///   x <- soft(tvd(majorized_input(x), lambda1), lambda0)
/// until the relative decrease of F drops to cfg.tol or cfg.max_iter
/// updates have been made. F never increases along the iteration.
template <typename Derived>
SolveResultT<typename Derived::Scalar>
solve(const Eigen::MatrixBase<Derived> &y,
      const CncConfigT<typename Derived::Scalar> &cfg) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::max;
  validate(cfg);
  if (y.size() == 0)
    throw SizeError("solve: empty input");
  detail::require_finite(y, "solve input");
  if (!cfg.allow_nonconvex && !is_convex(cfg)) {
    std::ostringstream msg;
    msg << "convexity margin " << convexity_margin(cfg)
        << " < 0; pass allow_nonconvex to solve anyway";
    throw ConvexityError(msg.str());
  }

  const SignalT<Scalar> obs = y;
  SolveResultT<Scalar> res;
  res.x = cfg.init == Initializer::L1Flsa
              ? flsa_l1(obs, cfg.lambda0, cfg.lambda1)
              : SignalT<Scalar>::Zero(obs.size()).eval();
  Scalar f = objective_F(res.x, obs, cfg);
  res.objective_history.reserve(static_cast<std::size_t>(cfg.max_iter) + 1);
  res.objective_history.push_back(f);

  for (int k = 0; k < cfg.max_iter; ++k) {
    res.x = flsa_l1(majorized_input(res.x, obs, cfg), cfg.lambda0, cfg.lambda1);
    const Scalar f_next = objective_F(res.x, obs, cfg);
    res.objective_history.push_back(f_next);
    ++res.iterations;
    const Scalar change = abs(f - f_next) / max(Scalar(1), abs(f));
    f = f_next;
    if (change <= cfg.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

} // namespace cncfl
