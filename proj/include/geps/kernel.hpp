#pragma once

// The concentrated collision kernel
//
//   g_eps(|u|, mu) = 4/(pi eps) * delta(1 - mu - m_eps(|u|)),   m_eps(x) = min{2, eps x^gamma},
//
// which puts all scattering of a pair with relative speed |u| on the single
// cone cos(theta) = 1 - m_eps(|u|). Its sigma-sphere mass is 8/eps for every u.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace geps {

template <typename Scalar = double>
struct KernelParams {
  Scalar eps;
  Scalar gamma;

  /// Throws std::invalid_argument unless eps > 0 and -3 <= gamma < 0.
  void validate() const {
    if (!(eps > 0) || !std::isfinite(static_cast<double>(eps)))
      throw std::invalid_argument("kernel: eps must be positive, got " + std::to_string(double(eps)));
    if (!(gamma >= Scalar(-3) && gamma < Scalar(0)))
      throw std::invalid_argument("kernel: gamma must lie in [-3, 0), got " +
                                  std::to_string(double(gamma)));
  }
};

/// m_eps(x) = min{2, eps x^gamma}; m_eps(0) = 2.
template <typename Scalar>
Scalar m_eps(const KernelParams<Scalar>& k, Scalar x) {
  using std::pow;
  if (x < Scalar(0)) throw std::invalid_argument("m_eps: x must be nonnegative");
  if (x == Scalar(0)) return Scalar(2);
  const Scalar v = k.eps * pow(x, k.gamma);
  return v < Scalar(2) ? v : Scalar(2);
}

template <typename Scalar>
Scalar mu_eps(const KernelParams<Scalar>& k, Scalar x) {
  return Scalar(1) - m_eps(k, x);
}

/// Scattering angle of the concentration cone. Evaluated through the half-angle
/// form 2 asin(sqrt(m/2)) so that sin^2(theta/2) = m/2 holds to rounding even
/// when m is tiny.
template <typename Scalar>
Scalar theta_eps(const KernelParams<Scalar>& k, Scalar x) {
  using std::asin;
  using std::sqrt;
  const Scalar m = m_eps(k, x);
  return Scalar(2) * asin(sqrt(m / Scalar(2)));
}

/// Closed-form angular moment beta_k[g_eps](u) over mu in [0, 1]:
/// (2^{2-k/2}/pi) eps^{k/2-1} |u|^{gamma k/2} when eps |u|^gamma <= 1, else 0.
template <typename Scalar>
Scalar beta_k_closed(const KernelParams<Scalar>& k, Scalar u_norm, Scalar order) {
  using std::pow;
  if (!(u_norm > Scalar(0))) throw std::invalid_argument("beta_k_closed: |u| must be positive");
  if (!(order >= Scalar(2))) throw std::invalid_argument("beta_k_closed: k must be >= 2");
  if (k.eps * pow(u_norm, k.gamma) > Scalar(1)) return Scalar(0);
  const Scalar half = order / Scalar(2);
  return pow(Scalar(2), Scalar(2) - half) / std::numbers::pi_v<Scalar> *
         pow(k.eps, half - Scalar(1)) * pow(u_norm, k.gamma * half);
}

/// Loss rate 8/eps: the sigma-sphere mass of g_eps.
template <typename Scalar>
Scalar total_rate(const KernelParams<Scalar>& k) {
  return Scalar(8) / k.eps;
}

}  // namespace geps
