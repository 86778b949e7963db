#pragma once

#include "geps/types.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace geps {

/// Orthonormal triple (u_hat, j_hat, k_hat) with k_hat = j_hat x u_hat.
template <typename Scalar>
struct ScatteringFrame {
  Vector3<Scalar> u_hat;
  Vector3<Scalar> j_hat;
  Vector3<Scalar> k_hat;
};

template <typename Scalar>
struct CollisionPair {
  Vector3<Scalar> v;
  Vector3<Scalar> v_star;

  Vector3<Scalar> u() const { return v - v_star; }
  Scalar u_norm() const { return (v - v_star).norm(); }
};

/// Builds the frame from j = e1 - u_hat u_hat_1 (normalized). When u_hat is
/// within 1e-12 of +-e1 the construction starts from e2 instead.
template <typename Derived>
ScatteringFrame<typename Derived::Scalar> frame_of(const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  using V = Vector3<Scalar>;
  const Scalar norm = u.norm();
  if (!(norm > Scalar(0))) throw std::invalid_argument("frame_of: u must be nonzero");
  ScatteringFrame<Scalar> fr;
  fr.u_hat = u / norm;
  V j = V::UnitX() - fr.u_hat * fr.u_hat.x();
  if (j.norm() < Scalar(1e-12)) j = V::UnitY() - fr.u_hat * fr.u_hat.y();
  fr.j_hat = j.normalized();
  fr.k_hat = fr.j_hat.cross(fr.u_hat);
  return fr;
}

/// sigma = u_hat cos(theta) + (j_hat cos(phi) + k_hat sin(phi)) sin(theta).
template <typename Scalar>
Vector3<Scalar> sigma_of(const ScatteringFrame<Scalar>& fr, Scalar theta, Scalar phi) {
  using std::cos;
  using std::sin;
  return fr.u_hat * cos(theta) + (fr.j_hat * cos(phi) + fr.k_hat * sin(phi)) * sin(theta);
}

/// (v', v_*') = (v + (|u| sigma - u)/2, v_* - (|u| sigma - u)/2).
template <typename Scalar, typename Derived>
std::pair<Vector3<Scalar>, Vector3<Scalar>> post_collision(const CollisionPair<Scalar>& pair,
                                                           const Eigen::MatrixBase<Derived>& sigma) {
  using std::abs;
  if (abs(sigma.norm() - Scalar(1)) > Scalar(1e-10))
    throw std::invalid_argument("post_collision: sigma must be a unit vector");
  const Vector3<Scalar> u = pair.u();
  const Vector3<Scalar> half = (u.norm() * sigma - u) / Scalar(2);
  return {pair.v + half, pair.v_star - half};
}

/// u+ = (u + |u| sigma)/2 and u- = (u - |u| sigma)/2.
template <typename DerivedU, typename DerivedS>
std::pair<Vector3<typename DerivedU::Scalar>, Vector3<typename DerivedU::Scalar>> u_plus_minus(
    const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedS>& sigma) {
  using Scalar = typename DerivedU::Scalar;
  const Scalar n = u.norm();
  return {(u + n * sigma) / Scalar(2), (u - n * sigma) / Scalar(2)};
}

template <typename Scalar>
struct AzimuthalMoments {
  Vector3<Scalar> first;   ///< int (v' - v) dphi
  Matrix3<Scalar> second;  ///< int (v' - v)(v' - v)^T dphi
  Scalar cubic;            ///< int |v' - v|^3 dphi
};

/// Uniform nodes phi_m = -pi + 2 pi m / M, m = 0..M-1.
template <typename Scalar>
Scalar azimuth_node(int m, int count) {
  return -std::numbers::pi_v<Scalar> + Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(m) / Scalar(count);
}

/// Trapezoid quadrature over phi in [-pi, pi] of the three displacement moments
/// at fixed scattering angle theta. The displacement v' - v depends only on u,
/// so v is taken as the origin.
template <typename Derived>
AzimuthalMoments<typename Derived::Scalar> azimuthal_moments(const Eigen::MatrixBase<Derived>& u,
                                                             typename Derived::Scalar theta, int nodes) {
  using Scalar = typename Derived::Scalar;
  if (nodes < 4) throw std::invalid_argument("azimuthal_moments: need at least 4 nodes");
  AzimuthalMoments<Scalar> out{Vector3<Scalar>::Zero(), Matrix3<Scalar>::Zero(), Scalar(0)};
  const Scalar norm = u.norm();
  if (norm == Scalar(0)) return out;
  const auto fr = frame_of(u);
  const Scalar w = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(nodes);
  using std::cos;
  using std::sin;
  // |u| sigma - u written with cos(theta) - 1 = -2 sin^2(theta/2) to avoid cancellation at small theta.
  const Scalar sh = sin(theta / Scalar(2));
  const Vector3<Scalar> axial = -norm * sh * sh * fr.u_hat;
  const Scalar radial = norm * sin(theta) / Scalar(2);
  for (int m = 0; m < nodes; ++m) {
    const Scalar phi = azimuth_node<Scalar>(m, nodes);
    const Vector3<Scalar> d = axial + radial * (fr.j_hat * cos(phi) + fr.k_hat * sin(phi));
    out.first += w * d;
    out.second += w * d * d.transpose();
    const Scalar len = d.norm();
    out.cubic += w * len * len * len;
  }
  return out;
}

}  // namespace geps
