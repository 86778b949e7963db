#pragma once

#include "geps/collision_operator.hpp"
#include "geps/grid_state.hpp"
#include "geps/kernel.hpp"
#include "geps/test_function.hpp"

#include <string>
#include <vector>

namespace geps {

/// I - u_hat u_hat^T. Throws std::invalid_argument for u = 0.
template <typename Derived>
Matrix3<typename Derived::Scalar> projector(const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  const Scalar norm = u.norm();
  if (!(norm > Scalar(0))) throw std::invalid_argument("projector: u must be nonzero");
  const Vector3<Scalar> uh = u / norm;
  return Matrix3<Scalar>::Identity() - uh * uh.transpose();
}

struct LandauWeakForm {
  double value = 0.0;
  /// Part of `value` from pairs with 0 < |u| <= 2h.
  double near_diagonal = 0.0;
  /// Sum of absolute pair contributions.
  double magnitude = 0.0;
};

/// Pair-sum quadrature over ordered pairs i != j of
///   f_i f_j |u|^gamma [ -2 (grad phi_i - grad phi_j).u + 1/2 |u|^2 (D2 phi_i + D2 phi_j) : Pi(u) ].
LandauWeakForm weak_form_ql(const Distribution& f, const TestFunction& phi, double gamma);

struct GrazingGapRecord {
  double gamma = 0.0;
  double eps = 0.0;
  double weak_boltzmann = 0.0;
  double weak_landau = 0.0;
  double gap = 0.0;
  std::string phi_id;
  std::string f_id;
  double near_diagonal = 0.0;
};

/// One record per kernel, all evaluated on the same f. Kernels must share gamma.
std::vector<GrazingGapRecord> grazing_gap(const Distribution& f, const std::string& f_id, const TestFunction& phi,
                                          const std::vector<KernelParams<double>>& params_list,
                                          const QuadratureSpec& quad);

/// As above with a separate f per kernel (e.g. each evolved under its own eps).
std::vector<GrazingGapRecord> grazing_gap(const std::vector<Distribution>& fs, const std::string& f_id,
                                          const TestFunction& phi,
                                          const std::vector<KernelParams<double>>& params_list,
                                          const QuadratureSpec& quad);

/// Least-squares slope of log(gap) against log(eps). Needs >= 2 records with gap > 0.
double loglog_slope(const std::vector<GrazingGapRecord>& records);

}  // namespace geps
