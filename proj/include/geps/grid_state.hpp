#pragma once

#include "geps/types.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <map>
#include <vector>

namespace geps {

/// Uniform velocity lattice on [-v_max, v_max]^3 with n points per axis.
/// Linear index is i + n (j + n k): i runs fastest.
struct GridSpec {
  int n = 0;
  double v_max = 0.0;

  /// Throws std::invalid_argument unless n >= 8 and v_max > 0.
  static GridSpec make(int n, double v_max);

  double h() const { return 2.0 * v_max / (n - 1); }
  double cell_volume() const { return h() * h() * h(); }
  std::size_t size() const { return std::size_t(n) * n * n; }
  std::size_t index(int i, int j, int k) const { return std::size_t(i) + std::size_t(n) * (j + std::size_t(n) * k); }
  double coord(int i) const { return -v_max + i * h(); }
  Vec3 node(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }
  Vec3 node(std::size_t idx) const;

  bool operator==(const GridSpec&) const = default;
};

/// Signed nodal data (operator outputs such as Q = Q+ - Q-).
struct GridField {
  GridSpec grid;
  Eigen::ArrayXd values;
};

/// Nonnegative density sampled on a grid. Immutable once constructed.
class Distribution {
 public:
  /// Throws std::invalid_argument on size mismatch or a negative/non-finite value.
  Distribution(GridSpec grid, Eigen::ArrayXd values);

  static Distribution zeros(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  const Eigen::ArrayXd& values() const { return values_; }
  double operator()(int i, int j, int k) const { return values_[grid_.index(i, j, k)]; }
  double operator[](std::size_t idx) const { return values_[idx]; }

  GridField as_field() const { return {grid_, values_}; }

 private:
  GridSpec grid_;
  Eigen::ArrayXd values_;
};

struct MomentReport {
  double mass = 0.0;
  Vec3 momentum = Vec3::Zero();
  double energy = 0.0;   ///< int f |v|^2
  double entropy = 0.0;  ///< int f log f over f > 0
  std::map<double, double> lp_norms;
  double llogl = 0.0;    ///< int f |log f| over f > 0
};

MomentReport moments(const Distribution& f, const std::vector<double>& lp_list = {});

/// (h^3 sum |f|^p)^{1/p}; p = kInf gives max |f|. Throws for p < 1.
double lp_norm(const GridField& f, double p);
double lp_norm(const Distribution& f, double p);

/// int f (1 + |v|^2)^{k/2}.
double weighted_l1(const Distribution& f, double k);

/// int f |log f|.
double llogl_norm(const Distribution& f);

/// rho (2 pi T)^{-3/2} exp(-|v - bulk|^2 / (2T)) sampled at the nodes, not renormalized.
Distribution maxwellian(const GridSpec& grid, double mass, const Vec3& bulk, double temperature);

/// Trilinear interpolation; zero outside [-v_max, v_max]^3.
double interpolate(const Distribution& f, const Vec3& v);

/// f 1_{|v| <= R}.
Distribution truncate_ball(const Distribution& f, double radius);

/// Mass carried by nodes within 2h of the box boundary.
double boundary_mass(const Distribution& f);

/// Maxwellian with the mass, momentum and energy of f.
Distribution matched_maxwellian(const Distribution& f);

}  // namespace geps
