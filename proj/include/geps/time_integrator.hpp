#pragma once

#include "geps/collision_operator.hpp"
#include "geps/grid_state.hpp"
#include "geps/kernel.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace geps {

struct MonitorTolerances {
  /// Allowed per-step entropy rise, relative to |H(0)|.
  double entropy_rel = 1e-6;
  /// Allowed relative drift of mass and energy from f0 (with correction on).
  double conservation_rel = 1e-10;
  /// Allowed relative mass drift without correction (interpolation and boundary leak).
  double mass_drift_rel = 5e-2;
  bool check_ceiling = true;
};

struct SimulationConfig {
  KernelParams<double> kernel{0.1, -3.0};
  GridSpec grid;
  QuadratureSpec quad;
  double dt = 0.0;
  double t_end = 0.0;
  int report_every = 1;
  std::vector<double> lp_list{1.0, 2.0, kInf};
  bool conservation_correction = false;
  MonitorTolerances monitors;
};

/// Thrown when dt (8/eps) mass(f) > 1; carries the largest admissible dt.
class StepRejected : public std::invalid_argument {
 public:
  StepRejected(const std::string& what, double max_dt) : std::invalid_argument(what), max_dt_(max_dt) {}
  double max_dt() const { return max_dt_; }

 private:
  double max_dt_;
};

/// Largest dt keeping the explicit step nonnegative: eps / (8 mass).
double max_stable_dt(const KernelParams<double>& params, double mass);

/// Forward Euler: (1 - dt (8/eps) mass) f + dt Q+(f, f). dt = 0 returns f.
Distribution step(const Distribution& f, const SimulationConfig& cfg);

struct MomentTarget {
  double mass = 0.0;
  Vec3 momentum = Vec3::Zero();
  double energy = 0.0;
};

/// f exp(l0 + l.v + l4 |v|^2) with the five multipliers chosen by Newton so
/// that mass, momentum and energy equal the target.
Distribution correct_moments(const Distribution& f, const MomentTarget& target);

/// max{16 exp(8 ||f0||_{L log L}), ||f0||_p}.
double lp_ceiling(const Distribution& f0, double p);

struct TimeSeriesRecord {
  int step = 0;
  double t = 0.0;
  MomentReport moments;
  std::map<double, double> ceilings;
  double boundary_mass = 0.0;
  /// ||f - M[f]||_1 against the Maxwellian with the same moments.
  double l1_maxwellian = 0.0;
  bool corrected = false;
};

struct RunResult {
  std::vector<TimeSeriesRecord> records;
  std::optional<std::string> breach;
  Distribution final_state;
  /// Smallest nodal value seen over all iterates.
  double min_value = 0.0;
  /// Largest per-step entropy rise seen, relative to |H(0)|.
  double max_entropy_rise = 0.0;
};

using ReportHook = std::function<void(const TimeSeriesRecord&, const Distribution&)>;

/// Iterates `step` to t_end. Records every report_every steps plus the initial
/// and final states; stops at the first monitor breach.
RunResult run(const Distribution& f0, const SimulationConfig& cfg, const ReportHook& on_report = {});

}  // namespace geps
