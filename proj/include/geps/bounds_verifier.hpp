#pragma once

#include "geps/collision_operator.hpp"
#include "geps/grid_state.hpp"
#include "geps/kernel.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace geps {

using ScalarField = std::function<double(const Vec3&)>;
using RadialFunction = std::function<double(double)>;

struct RadialProfile {
  std::vector<double> radii;
  std::vector<double> values;
};

/// Shell-wise L^p spherical average of f: (mean over the sphere of |f(r s)|^p)^{1/p}.
/// Gauss-Legendre in cos(theta) times uniform phi, `sphere_quad` nodes each.
/// p = kInf gives the sampled maximum. Shells must lie in (0, v_max].
RadialProfile radial_rearrangement(const Distribution& f, double p, const std::vector<double>& shells,
                                   int sphere_quad);

/// (4 pi int_0^R profile(r)^p r^2 dr)^{1/p} with Gauss-Legendre shells on [0, R].
double rearranged_lp_norm(const Distribution& f, double p, double radius, int radial_nodes, int sphere_quad);

/// (4/(pi eps)) sum_phi w_phi eta(u-) psi(u+) on the cone theta = theta_eps(|u|).
double p_eps_eval(const ScalarField& eta, const ScalarField& psi, const Vec3& u, const KernelParams<double>& params,
                  int m_phi);

/// (4/(pi eps)) eta(a1) psi(a2) when eps x^gamma <= 1, else 0, with
/// a1 = x sqrt((1 + mu)/2), a2 = x sqrt((1 - mu)/2), mu = mu_eps(x).
double b_eps_1d(const RadialFunction& eta_bar, const RadialFunction& psi_bar, double x,
                const KernelParams<double>& params);

inline constexpr double kVerifyTolRel = 1e-9;

struct VerificationRecord {
  std::string suite;
  std::string inequality_id;
  std::uint64_t trial_seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  double aux = 0.0;
};

/// margin = rhs - lhs; pass iff margin >= -kVerifyTolRel * rhs.
VerificationRecord make_record(std::string suite, std::string id, std::uint64_t seed, double lhs, double rhs,
                               double aux = 0.0);

/// ||Q+(f, h)||_r against (16/eps) ||f||_p ||h||_q; aux = lhs/rhs.
/// Throws unless 1/p + 1/q = 1 + 1/r.
VerificationRecord check_young(const Distribution& f, const Distribution& h, double p, double q, double r,
                               const KernelParams<double>& params, const QuadratureSpec& quad);

/// ||Q+(f, f)||_p against K^{1/p'} (16/eps) ||f||_p^{1/2} + 16/(eps log K) llogl ||f||_p
/// (p = inf: 16K/eps + 16/(eps log K) llogl ||f||_inf). aux carries the same bound
/// with K^{1/(2p')} in place of K^{1/p'}.
VerificationRecord check_lloglsplit(const Distribution& f, double f0_llogl, double p, double K,
                                    const KernelParams<double>& params, const QuadratureSpec& quad);

/// (4 pi / (alpha q + 3))^{1/q} with q = p'/2: the L^{p'/2} norm of |v|^alpha on the unit ball.
double convolution_constant(double alpha, double p);

/// sum_{i != j} f_i f_j |v_i - v_j|^alpha h^6 against 2^k ||f||_1 ||f||_{1,k} (alpha >= 0)
/// or ||f||_1^2 + C ||f||_p^2 (alpha < 0); aux = C for alpha < 0.
VerificationRecord check_convolution_bound(const Distribution& f, double alpha, double p, double k);

/// ||B_eps(eta, psi)||_{L^p(x^2 dx)} against (8/(pi eps)) ||psi||_inf ||eta||_{L^p(x^2 dx)},
/// both sides by composite Gauss-Legendre on [0, x_max].
VerificationRecord check_b_eps_bound(const RadialFunction& eta_bar, const RadialFunction& psi_bar, double p,
                                     const KernelParams<double>& params, double x_max);

/// Sum of 1-4 Gaussians with random weights, centers and widths, sampled on the grid.
Distribution random_gaussian_mixture(const GridSpec& grid, std::mt19937_64& rng);

struct SuiteOptions {
  std::vector<int> grid_sizes{8, 12, 16};
  double v_max = 4.0;
  int m_phi = 16;
};

/// Seed of trial t in a run started from `seed`.
std::uint64_t trial_seed(std::uint64_t seed, int trial);

/// Suites: geometry, kernel, young, rearrange, llogl, convolution, all.
/// Throws std::invalid_argument for an unknown suite.
std::vector<VerificationRecord> run_suite(const std::string& suite, std::uint64_t seed, int trials,
                                          const SuiteOptions& opts = {});

const std::vector<std::string>& suite_names();

}  // namespace geps
