#include "geps/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace geps {

GaussRule gauss_legendre(int count, double a, double b) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(count, count);
  for (int k = 1; k < count; ++k) {
    const double off = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = off;
    jacobi(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussRule rule;
  const double half = (b - a) / 2.0, mid = (a + b) / 2.0;
  rule.nodes = mid + half * es.eigenvalues().array();
  rule.weights = 2.0 * half * es.eigenvectors().row(0).transpose().array().square();
  return rule;
}

}  // namespace geps
