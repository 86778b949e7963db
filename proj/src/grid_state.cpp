#include "geps/grid_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace geps {

GridSpec GridSpec::make(int n, double v_max) {
  if (n < 8) throw std::invalid_argument("grid: n must be >= 8, got " + std::to_string(n));
  if (!(v_max > 0.0) || !std::isfinite(v_max))
    throw std::invalid_argument("grid: v_max must be positive");
  return GridSpec{n, v_max};
}

Vec3 GridSpec::node(std::size_t idx) const {
  const auto nn = std::size_t(n);
  return node(int(idx % nn), int((idx / nn) % nn), int(idx / (nn * nn)));
}

Distribution::Distribution(GridSpec grid, Eigen::ArrayXd values) : grid_(grid), values_(std::move(values)) {
  if (std::size_t(values_.size()) != grid_.size())
    throw std::invalid_argument("distribution: expected " + std::to_string(grid_.size()) + " values, got " +
                                std::to_string(values_.size()));
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0)
      throw std::invalid_argument("distribution: value at node " + std::to_string(i) +
                                  " is negative or not finite");
  }
}

Distribution Distribution::zeros(const GridSpec& grid) {
  return Distribution(grid, Eigen::ArrayXd::Zero(Eigen::Index(grid.size())));
}

MomentReport moments(const Distribution& f, const std::vector<double>& lp_list) {
  const GridSpec& g = f.grid();
  const double w = g.cell_volume();
  MomentReport r;
  // Fixed-order accumulation: reports must be reproducible bit for bit.
  double mass = 0.0, energy = 0.0, entropy = 0.0, llogl = 0.0;
  Vec3 mom = Vec3::Zero();
  std::size_t idx = 0;
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i, ++idx) {
        const double fv = f[idx];
        if (fv == 0.0) continue;
        const Vec3 v = g.node(i, j, k);
        mass += fv;
        mom += fv * v;
        energy += fv * v.squaredNorm();
        const double l = std::log(fv);
        entropy += fv * l;
        llogl += fv * std::abs(l);
      }
  r.mass = w * mass;
  r.momentum = w * mom;
  r.energy = w * energy;
  r.entropy = w * entropy;
  r.llogl = w * llogl;
  for (double p : lp_list) r.lp_norms[p] = lp_norm(f, p);
  return r;
}

double lp_norm(const GridField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) return f.values.size() ? f.values.abs().maxCoeff() : 0.0;
  const double w = f.grid.cell_volume();
  double s = 0.0;
  if (p == 1.0) {
    for (Eigen::Index i = 0; i < f.values.size(); ++i) s += std::abs(f.values[i]);
    return w * s;
  }
  if (p == 2.0) {
    for (Eigen::Index i = 0; i < f.values.size(); ++i) s += f.values[i] * f.values[i];
    return std::sqrt(w * s);
  }
  for (Eigen::Index i = 0; i < f.values.size(); ++i) s += std::pow(std::abs(f.values[i]), p);
  return std::pow(w * s, 1.0 / p);
}

double lp_norm(const Distribution& f, double p) {
  return lp_norm(GridField{f.grid(), f.values()}, p);
}

double weighted_l1(const Distribution& f, double k) {
  const GridSpec& g = f.grid();
  double s = 0.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (f[idx] == 0.0) continue;
    s += f[idx] * std::pow(1.0 + g.node(idx).squaredNorm(), k / 2.0);
  }
  return g.cell_volume() * s;
}

double llogl_norm(const Distribution& f) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < f.values().size(); ++i) {
    const double fv = f.values()[i];
    if (fv > 0.0) s += fv * std::abs(std::log(fv));
  }
  return f.grid().cell_volume() * s;
}

Distribution maxwellian(const GridSpec& grid, double mass, const Vec3& bulk, double temperature) {
  if (!(mass > 0.0)) throw std::invalid_argument("maxwellian: mass must be positive");
  if (!(temperature > 0.0)) throw std::invalid_argument("maxwellian: temperature must be positive");
  const double norm = mass * std::pow(2.0 * std::numbers::pi * temperature, -1.5);
  Eigen::ArrayXd vals(Eigen::Index(grid.size()));
  for (std::size_t idx = 0; idx < grid.size(); ++idx)
    vals[Eigen::Index(idx)] = norm * std::exp(-(grid.node(idx) - bulk).squaredNorm() / (2.0 * temperature));
  return Distribution(grid, std::move(vals));
}

double interpolate(const Distribution& f, const Vec3& v) {
  const GridSpec& g = f.grid();
  const double h = g.h();
  int base[3];
  double t[3];
  for (int a = 0; a < 3; ++a) {
    if (!(v[a] >= -g.v_max && v[a] <= g.v_max)) return 0.0;
    const double s = (v[a] + g.v_max) / h;
    int i0 = int(std::floor(s));
    if (i0 >= g.n - 1) i0 = g.n - 2;
    if (i0 < 0) i0 = 0;
    base[a] = i0;
    t[a] = std::clamp(s - i0, 0.0, 1.0);
  }
  double acc = 0.0;
  for (int c = 0; c < 8; ++c) {
    const int dx = c & 1, dy = (c >> 1) & 1, dz = (c >> 2) & 1;
    const double w = (dx ? t[0] : 1.0 - t[0]) * (dy ? t[1] : 1.0 - t[1]) * (dz ? t[2] : 1.0 - t[2]);
    if (w == 0.0) continue;
    acc += w * f(base[0] + dx, base[1] + dy, base[2] + dz);
  }
  return acc < 0.0 ? 0.0 : acc;
}

Distribution truncate_ball(const Distribution& f, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("truncate_ball: R must be positive");
  const GridSpec& g = f.grid();
  Eigen::ArrayXd vals = f.values();
  const double r2 = radius * radius;
  for (std::size_t idx = 0; idx < g.size(); ++idx)
    if (g.node(idx).squaredNorm() > r2) vals[Eigen::Index(idx)] = 0.0;
  return Distribution(g, std::move(vals));
}

double boundary_mass(const Distribution& f) {
  const GridSpec& g = f.grid();
  double s = 0.0;
  std::size_t idx = 0;
  auto near_edge = [&](int i) { return i <= 2 || i >= g.n - 3; };
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i, ++idx)
        if (near_edge(i) || near_edge(j) || near_edge(k)) s += f[idx];
  return g.cell_volume() * s;
}

Distribution matched_maxwellian(const Distribution& f) {
  const MomentReport m = moments(f);
  if (!(m.mass > 0.0)) throw std::invalid_argument("matched_maxwellian: f has no mass");
  const Vec3 bulk = m.momentum / m.mass;
  const double temperature = (m.energy / m.mass - bulk.squaredNorm()) / 3.0;
  return maxwellian(f.grid(), m.mass, bulk, temperature);
}

}  // namespace geps
