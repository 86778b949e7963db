#include "geps/time_integrator.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace geps {

double max_stable_dt(const KernelParams<double>& params, double mass) {
  params.validate();
  if (!(mass > 0.0)) return kInf;
  return params.eps / (8.0 * mass);
}

namespace {

double mass_of(const Distribution& f) { return f.grid().cell_volume() * f.values().sum(); }

void check_dt(double dt, const KernelParams<double>& params, double mass) {
  const double limit = max_stable_dt(params, mass);
  // slack for mass sums taken in a different order; the keep factor is clamped at 0
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "dt = " << dt << " violates dt <= eps/(8 mass) = " << limit
        << " (required for a nonnegative explicit step)";
    throw StepRejected(msg.str(), limit);
  }
}

}  // namespace

Distribution step(const Distribution& f, const SimulationConfig& cfg) {
  cfg.kernel.validate();
  if (!(cfg.dt >= 0.0)) throw std::invalid_argument("step: dt must be nonnegative");
  if (cfg.dt == 0.0) return f;
  const double mass = mass_of(f);
  check_dt(cfg.dt, cfg.kernel, mass);
  const double keep = std::max(0.0, 1.0 - cfg.dt * total_rate(cfg.kernel) * mass);
  const Distribution gain = q_gain(f, cfg.kernel, cfg.quad);
  return Distribution(f.grid(), keep * f.values() + cfg.dt * gain.values());
}

Distribution correct_moments(const Distribution& f, const MomentTarget& target) {
  using Vec5 = Eigen::Matrix<double, 5, 1>;
  using Mat5 = Eigen::Matrix<double, 5, 5>;
  const GridSpec& g = f.grid();
  const double w = g.cell_volume();
  std::vector<Vec5> psi;
  std::vector<std::size_t> support;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (f[idx] == 0.0) continue;
    const Vec3 v = g.node(idx);
    Vec5 p;
    p << 1.0, v, v.squaredNorm();
    psi.push_back(p);
    support.push_back(idx);
  }
  if (support.empty()) throw std::invalid_argument("correct_moments: f has no mass");
  Vec5 goal;
  goal << target.mass, target.momentum, target.energy;
  const double scale = std::max({std::abs(target.mass), std::abs(target.energy), target.momentum.norm()});

  Vec5 lambda = Vec5::Zero();
  for (int iter = 0; iter < 50; ++iter) {
    Vec5 resid = -goal;
    Mat5 jac = Mat5::Zero();
    for (std::size_t s = 0; s < support.size(); ++s) {
      const double wi = w * f[support[s]] * std::exp(lambda.dot(psi[s]));
      resid += wi * psi[s];
      jac.noalias() += wi * psi[s] * psi[s].transpose();
    }
    if (resid.cwiseAbs().maxCoeff() <= 1e-15 * scale) break;
    lambda -= jac.ldlt().solve(resid);
  }
  Eigen::ArrayXd vals = Eigen::ArrayXd::Zero(Eigen::Index(g.size()));
  for (std::size_t s = 0; s < support.size(); ++s)
    vals[Eigen::Index(support[s])] = f[support[s]] * std::exp(lambda.dot(psi[s]));
  return Distribution(g, std::move(vals));
}

double lp_ceiling(const Distribution& f0, double p) {
  return std::max(16.0 * std::exp(8.0 * llogl_norm(f0)), lp_norm(f0, p));
}

namespace {

TimeSeriesRecord make_record(int step_no, double t, const Distribution& f, const SimulationConfig& cfg,
                             const std::map<double, double>& ceilings, bool corrected) {
  TimeSeriesRecord r;
  r.step = step_no;
  r.t = t;
  r.moments = moments(f, cfg.lp_list);
  r.ceilings = ceilings;
  r.boundary_mass = boundary_mass(f);
  const Distribution m = matched_maxwellian(f);
  r.l1_maxwellian = lp_norm(GridField{f.grid(), f.values() - m.values()}, 1.0);
  r.corrected = corrected;
  return r;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

}  // namespace

RunResult run(const Distribution& f0, const SimulationConfig& cfg, const ReportHook& on_report) {
  cfg.kernel.validate();
  cfg.quad.validate();
  if (!(f0.grid() == cfg.grid)) throw std::invalid_argument("run: f0 does not live on the configured grid");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("run: dt must be positive");
  if (!(cfg.t_end > 0.0)) throw std::invalid_argument("run: t_end must be positive");
  if (cfg.report_every < 1) throw std::invalid_argument("run: report_every must be >= 1");
  const MomentReport m0 = moments(f0, cfg.lp_list);
  if (!(m0.mass > 0.0)) throw std::invalid_argument("run: f0 has no mass");
  check_dt(cfg.dt, cfg.kernel, m0.mass);

  std::map<double, double> ceilings;
  for (double p : cfg.lp_list) ceilings[p] = lp_ceiling(f0, p);
  const MomentTarget target{m0.mass, m0.momentum, m0.energy};
  const double h_scale = std::abs(m0.entropy);

  RunResult res{{}, std::nullopt, f0, f0.values().minCoeff(), 0.0};
  res.records.push_back(make_record(0, 0.0, f0, cfg, ceilings, false));
  if (on_report) on_report(res.records.back(), f0);

  const auto nsteps = int(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  Distribution f = f0;
  double h_prev = m0.entropy;
  double t = 0.0;
  for (int k = 1; k <= nsteps; ++k) {
    SimulationConfig sc = cfg;
    sc.dt = std::min(cfg.dt, cfg.t_end - t);
    Distribution next = step(f, sc);
    if (cfg.conservation_correction) next = correct_moments(next, target);
    t = (k == nsteps) ? cfg.t_end : t + cfg.dt;
    f = std::move(next);

    res.min_value = std::min(res.min_value, f.values().minCoeff());
    const MomentReport m = moments(f, cfg.lp_list);
    const double rise = h_scale > 0.0 ? (m.entropy - h_prev) / h_scale : m.entropy - h_prev;
    res.max_entropy_rise = std::max(res.max_entropy_rise, rise);
    h_prev = m.entropy;

    std::string breach;
    if (f.values().minCoeff() < 0.0) breach = "negative value in iterate";
    if (breach.empty() && rise > cfg.monitors.entropy_rel)
      breach = "entropy rose by " + fmt(rise) + " |H(0)| in one step";
    if (breach.empty() && cfg.monitors.check_ceiling) {
      for (const auto& [p, norm] : m.lp_norms)
        if (norm > ceilings[p]) {
          breach = "L^" + fmt(p) + " norm " + fmt(norm) + " exceeds ceiling " + fmt(ceilings[p]);
          break;
        }
    }
    if (breach.empty()) {
      const double dm = std::abs(m.mass - m0.mass) / m0.mass;
      if (cfg.conservation_correction) {
        const double de = std::abs(m.energy - m0.energy) / m0.energy;
        const double dp = (m.momentum - m0.momentum).norm() / std::sqrt(m0.mass * m0.energy);
        if (std::max({dm, de, dp}) > cfg.monitors.conservation_rel)
          breach = "conservation drift " + fmt(std::max({dm, de, dp})) + " after correction";
      } else if (dm > cfg.monitors.mass_drift_rel) {
        breach = "mass drift " + fmt(dm);
      }
    }

    const bool report = !breach.empty() || k % cfg.report_every == 0 || k == nsteps;
    if (report) {
      res.records.push_back(make_record(k, t, f, cfg, ceilings, cfg.conservation_correction));
      if (on_report) on_report(res.records.back(), f);
    }
    if (!breach.empty()) {
      res.breach = "step " + std::to_string(k) + " (t = " + fmt(t) + "): " + breach;
      break;
    }
  }
  res.final_state = f;
  return res;
}

}  // namespace geps
