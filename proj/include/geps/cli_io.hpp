#pragma once

// Configuration, report formats and the command implementations behind the
// `geps` executable. Everything here that touches the filesystem lives in
// the cmd_* functions; the format helpers return strings.
//
// Config files are INI text. Recognized sections and keys:
//
//   [kernel]      eps, gamma
//   [grid]        n, v_max
//   [quadrature]  m_phi
//   [initial]     kind = maxwellian | two_bump | mixture | snapshot
//                 mass, temperature, bulk = x,y,z, separation, seed, path
//   [time]        dt, t_end | steps, report_every, correction = true|false
//   [output]      dir, prefix, snapshot_every, snapshot_format = text|binary,
//                 lp_list = 1,2,inf
//   [monitors]    entropy_rel, conservation_rel, mass_drift_rel, check_ceiling
//   [grazing]     eps_list = 0.4,0.2,..., phi = constant|v1|v2|v3|energy|bump|gaussian,
//                 phi_center = x,y,z, phi_radius, mode = fixed|evolved, evolve_steps
//
// Any other section or key is rejected.

#include "geps/bounds_verifier.hpp"
#include "geps/landau_operator.hpp"
#include "geps/time_integrator.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace geps::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitBreach = 2;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitialCondition {
  std::string kind = "maxwellian";
  double mass = 1.0;
  double temperature = 1.0;
  Vec3 bulk = Vec3::Zero();
  /// two_bump: centers at +-separation e1, mass/2 each.
  double separation = 1.0;
  std::uint64_t seed = 1;
  std::filesystem::path path;
};

struct OutputSettings {
  std::filesystem::path dir = "out";
  std::string prefix = "run";
  int snapshot_every = 0;
  bool snapshot_binary = false;
};

struct GrazingSettings {
  std::vector<double> eps_list{0.4, 0.2, 0.1, 0.05};
  std::string phi = "bump";
  Vec3 phi_center{0.3, 0.2, -0.1};
  double phi_radius = 2.5;
  std::string mode = "fixed";
  int evolve_steps = 8;
};

struct Config {
  SimulationConfig sim;
  InitialCondition initial;
  OutputSettings output;
  GrazingSettings grazing;
  /// Raw bytes of the parsed text, for the manifest digest.
  std::string text;
};

/// Relative paths in [initial] and [output] resolve against `base_dir`.
Config parse_config_text(const std::string& text, const std::filesystem::path& base_dir = ".");
Config parse_config(const std::filesystem::path& path);

Distribution build_initial(const InitialCondition& ic, const GridSpec& grid);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Files emitted by one command, with digests. Adding a path twice throws.
class RunManifest {
 public:
  RunManifest(std::string config_digest, std::string version);
  void add(const std::filesystem::path& file);
  void finish();
  std::string to_json() const;
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  std::string config_digest_;
  std::string version_;
  std::string started_;
  std::string finished_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string version();

std::string time_series_header(const std::vector<double>& lp_list);
std::string time_series_row(const TimeSeriesRecord& rec, const std::vector<double>& lp_list);

/// CSV of records followed by "# summary" lines per suite and overall.
std::string verification_report(const std::vector<VerificationRecord>& records);

/// CSV of records followed by "# slope=<s>" (or "# slope=none").
std::string grazing_report(const std::vector<GrazingGapRecord>& records, std::optional<double> slope);

int cmd_simulate(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  std::string suite = "all";
  std::uint64_t seed = 1;
  int trials = 100;
  std::optional<std::filesystem::path> out_path;
  SuiteOptions suite_options;
};
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

int cmd_grazing(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

/// Prints the moments of a snapshot file as a one-row CSV.
int cmd_moments(const std::filesystem::path& snapshot_path, std::ostream& out, std::ostream& err);

}  // namespace geps::cli
