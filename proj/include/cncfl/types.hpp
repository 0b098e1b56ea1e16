#pragma once

#include <Eigen/Core>

namespace cncfl {

/// Dense column vector of samples; the value carrier for every operation.
template <typename Scalar>
using SignalT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Signal = SignalT<double>;

} // namespace cncfl
