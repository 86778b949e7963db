#pragma once

#include <Eigen/Core>

namespace geps {

struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Gauss-Legendre rule with `count` nodes on [a, b] (Golub-Welsch).
GaussRule gauss_legendre(int count, double a = -1.0, double b = 1.0);

}  // namespace geps
