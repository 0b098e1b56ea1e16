#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cncfl/errors.hpp"
#include "cncfl/types.hpp"

namespace cncfl {

namespace detail {

template <typename Scalar>
void require_threshold(Scalar lambda, const char *what) {
  using std::isfinite;
  if (!(lambda >= Scalar(0)) || !isfinite(lambda))
    throw ParameterError(std::string(what) + " must be finite and >= 0");
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived> &x, const char *what) {
  if (!x.allFinite())
    throw DomainError(std::string(what) + " contains non-finite samples");
}

} // namespace detail

/// Soft threshold. |x| <= lambda maps to exactly zero.
template <typename Scalar> Scalar soft(Scalar x, Scalar lambda) {
  detail::require_threshold(lambda, "soft-threshold lambda");
  if (x > lambda)
    return x - lambda;
  if (x < -lambda)
    return x + lambda;
  return Scalar(0);
}

/// Element-wise soft threshold.
template <typename Derived>
SignalT<typename Derived::Scalar>
soft(const Eigen::MatrixBase<Derived> &x, typename Derived::Scalar lambda) {
  using Scalar = typename Derived::Scalar;
  detail::require_threshold(lambda, "soft-threshold lambda");
  return x.unaryExpr([lambda](Scalar v) { return soft(v, lambda); });
}

/// First difference Dx: out[n] = x[n+1] - x[n], length N-1.
template <typename Derived>
SignalT<typename Derived::Scalar> diff(const Eigen::MatrixBase<Derived> &x) {
  const Eigen::Index n = x.size();
  if (n < 2)
    throw SizeError("diff requires at least 2 samples");
  return x.tail(n - 1) - x.head(n - 1);
}

/// Adjoint D^T z of the first difference, length size(z)+1.
template <typename Derived>
SignalT<typename Derived::Scalar>
diff_adjoint(const Eigen::MatrixBase<Derived> &z) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = z.size();
  if (m < 1)
    throw SizeError("diff_adjoint requires a non-empty input");
  SignalT<Scalar> out(m + 1);
  out(0) = -z(0);
  out.segment(1, m - 1) = z.head(m - 1) - z.tail(m - 1);
  out(m) = z(m - 1);
  return out;
}

namespace detail {

/// Exact 1-D total variation denoising by the taut-string construction.
///
/// The integrated solution F(i) = sum_{j<i} x_j is the shortest path from
/// (0, 0) to (N, S_N) inside the tube S_i - lambda <= F(i) <= S_i + lambda,
/// where S are the cumulative sums of y. The path is built with a funnel:
/// a fixed apex plus a convex chain of ceiling contacts and a concave chain
/// of floor contacts. Each vertex enters and leaves a chain at most once,
/// so the worst case is O(N). Output samples are the slopes of the path.
template <typename Scalar>
void taut_string(std::span<const Scalar> y, Scalar lambda,
                 std::span<Scalar> out) {
  struct Point {
    std::ptrdiff_t t;
    Scalar f;
  };
  const auto n = static_cast<std::ptrdiff_t>(y.size());
  if (n == 0)
    return;

  auto slope = [](const Point &p, const Point &q) {
    return (q.f - p.f) / static_cast<Scalar>(q.t - p.t);
  };
  auto emit = [&](const Point &p, const Point &q) {
    const Scalar level = slope(p, q);
    std::fill(out.begin() + p.t, out.begin() + q.t, level);
  };

  // Chains stored as vector + head index; chain[head] is always the apex.
  std::vector<Point> upper, lower;
  upper.reserve(static_cast<std::size_t>(n) + 1);
  lower.reserve(static_cast<std::size_t>(n) + 1);
  std::size_t uh = 0, lh = 0;
  Point apex{0, Scalar(0)};
  upper.push_back(apex);
  lower.push_back(apex);

  auto add_ceiling = [&](const Point &p) {
    bool moved = false;
    while (lower.size() - lh >= 2 && slope(apex, p) < slope(apex, lower[lh + 1])) {
      emit(apex, lower[lh + 1]);
      apex = lower[++lh];
      moved = true;
    }
    if (moved) {
      upper.clear();
      uh = 0;
      upper.push_back(apex);
    } else {
      while (upper.size() - uh >= 2 &&
             slope(upper[upper.size() - 2], p) <=
                 slope(upper[upper.size() - 2], upper.back()))
        upper.pop_back();
    }
    upper.push_back(p);
  };

  auto add_floor = [&](const Point &q) {
    bool moved = false;
    while (upper.size() - uh >= 2 && slope(apex, q) > slope(apex, upper[uh + 1])) {
      emit(apex, upper[uh + 1]);
      apex = upper[++uh];
      moved = true;
    }
    if (moved) {
      lower.clear();
      lh = 0;
      lower.push_back(apex);
    } else {
      while (lower.size() - lh >= 2 &&
             slope(lower[lower.size() - 2], q) >=
                 slope(lower[lower.size() - 2], lower.back()))
        lower.pop_back();
    }
    lower.push_back(q);
  };

  Scalar cumsum(0);
  for (std::ptrdiff_t i = 1; i <= n; ++i) {
    cumsum += y[static_cast<std::size_t>(i - 1)];
    const Scalar band = i == n ? Scalar(0) : lambda;
    add_ceiling(Point{i, cumsum + band});
    add_floor(Point{i, cumsum - band});
  }
  emit(apex, Point{n, cumsum});
}

} // namespace detail

/// Total variation denoising: the unique minimizer of
/// 1/2 ||y - x||^2 + lambda ||Dx||_1, computed exactly in linear time.
template <typename Derived>
SignalT<typename Derived::Scalar> tvd(const Eigen::MatrixBase<Derived> &y,
                                      typename Derived::Scalar lambda) {
  using Scalar = typename Derived::Scalar;
  detail::require_threshold(lambda, "tvd lambda");
  detail::require_finite(y, "tvd input");
  const SignalT<Scalar> in = y;
  if (in.size() <= 1 || lambda == Scalar(0))
    return in;
  SignalT<Scalar> out(in.size());
  detail::taut_string<Scalar>(
      std::span<const Scalar>(in.data(), static_cast<std::size_t>(in.size())),
      lambda, std::span<Scalar>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

/// Maximum violation of the TVD optimality conditions at x.
///
/// The dual vector u is recovered from x - y = -lambda D^T u by a running
/// sum; x is the minimizer iff |u_n| <= 1, u_n = sign([Dx]_n) wherever the
/// difference is nonzero, and the trailing partial sum closes to zero.
template <typename DerivedY, typename DerivedX>
typename DerivedY::Scalar
tvd_optimality_residual(const Eigen::MatrixBase<DerivedY> &y,
                        const Eigen::MatrixBase<DerivedX> &x,
                        typename DerivedY::Scalar lambda) {
  using Scalar = typename DerivedY::Scalar;
  using std::abs;
  using std::max;
  if (y.size() != x.size())
    throw SizeError("tvd_optimality_residual: length mismatch");
  const Eigen::Index n = y.size();
  if (lambda <= Scalar(0))
    return n == 0 ? Scalar(0) : (x - y).cwiseAbs().maxCoeff();

  Scalar worst(0);
  Scalar u(0);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    u += (x(i) - y(i)) / lambda;
    const Scalar d = x(i + 1) - x(i);
    if (d > Scalar(0))
      worst = max(worst, abs(u - Scalar(1)));
    else if (d < Scalar(0))
      worst = max(worst, abs(u + Scalar(1)));
    else
      worst = max(worst, abs(u) - Scalar(1));
  }
  if (n > 0)
    u += (x(n - 1) - y(n - 1)) / lambda;
  return max(worst, abs(u));
}

/// l1 fused lasso signal approximation:
/// argmin 1/2 ||y - x||^2 + lambda0 ||x||_1 + lambda1 ||Dx||_1,
/// solved exactly as soft(tvd(y, lambda1), lambda0).
template <typename Derived>
SignalT<typename Derived::Scalar> flsa_l1(const Eigen::MatrixBase<Derived> &y,
                                          typename Derived::Scalar lambda0,
                                          typename Derived::Scalar lambda1) {
  detail::require_threshold(lambda0, "flsa lambda0");
  detail::require_threshold(lambda1, "flsa lambda1");
  return soft(tvd(y, lambda1), lambda0);
}

} // namespace cncfl
