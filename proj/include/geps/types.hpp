#pragma once

#include <Eigen/Core>

#include <limits>

namespace geps {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

using Vec3 = Vector3<double>;
using Mat3 = Matrix3<double>;

/// Exponent value standing for p = infinity in norm arguments.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace geps
