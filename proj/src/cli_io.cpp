#include "geps/cli_io.hpp"

#include "geps/snapshot.hpp"
#include "geps/test_function.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#ifndef GEPS_VERSION
#define GEPS_VERSION "unknown"
#endif

namespace geps::cli {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

std::string version() { return GEPS_VERSION; }

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"kernel", {"eps", "gamma"}},
      {"grid", {"n", "v_max"}},
      {"quadrature", {"m_phi"}},
      {"initial", {"kind", "mass", "temperature", "bulk", "separation", "seed", "path"}},
      {"time", {"dt", "t_end", "steps", "report_every", "correction"}},
      {"output", {"dir", "prefix", "snapshot_every", "snapshot_format", "lp_list"}},
      {"monitors", {"entropy_rel", "conservation_rel", "mass_drift_rel", "check_ceiling"}},
      {"grazing", {"eps_list", "phi", "phi_center", "phi_radius", "mode", "evolve_steps"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double to_double(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  if (s == "inf") return kInf;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("config: " + key + " = '" + raw + "' is not a number");
  return v;
}

long long to_int(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("config: " + key + " = '" + raw + "' is not an integer");
  return v;
}

bool to_bool(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  if (s == "true" || s == "on" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "off" || s == "0" || s == "no") return false;
  throw ConfigError("config: " + key + " = '" + raw + "' is not a boolean");
}

std::vector<double> to_list(const std::string& raw, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(item, key));
  if (out.empty()) throw ConfigError("config: " + key + " is empty");
  return out;
}

Vec3 to_vec3(const std::string& raw, const std::string& key) {
  const auto v = to_list(raw, key);
  if (v.size() != 3) throw ConfigError("config: " + key + " needs three components");
  return {v[0], v[1], v[2]};
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string one_line(const std::string& s) {
  std::string r = s;
  std::replace(r.begin(), r.end(), '\n', ' ');
  return r;
}

}  // namespace

Config parse_config_text(const std::string& text, const fs::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: " + std::string(e.message()) + " at line " + std::to_string(e.line()));
  }
  std::map<std::string, std::string> kv;
  for (const auto& [section, body] : tree) {
    const auto it = allowed_keys().find(section);
    if (it == allowed_keys().end() || body.data().size() > 0)
      throw ConfigError("config: unknown section or top-level key '" + section + "'");
    for (const auto& [key, node] : body) {
      if (!it->second.count(key)) throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
      kv[section + "." + key] = node.data();
    }
  }
  auto get = [&](const std::string& k) -> std::optional<std::string> {
    const auto f = kv.find(k);
    if (f == kv.end()) return std::nullopt;
    return f->second;
  };

  Config c;
  c.text = text;
  SimulationConfig& s = c.sim;
  if (auto v = get("kernel.eps")) s.kernel.eps = to_double(*v, "kernel.eps");
  if (auto v = get("kernel.gamma")) s.kernel.gamma = to_double(*v, "kernel.gamma");
  int n = 16;
  double v_max = 4.5;
  if (auto v = get("grid.n")) n = int(to_int(*v, "grid.n"));
  if (auto v = get("grid.v_max")) v_max = to_double(*v, "grid.v_max");
  int m_phi = 16;
  if (auto v = get("quadrature.m_phi")) m_phi = int(to_int(*v, "quadrature.m_phi"));
  try {
    s.kernel.validate();
    s.grid = GridSpec::make(n, v_max);
    s.quad = QuadratureSpec::make(m_phi);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  InitialCondition& ic = c.initial;
  if (auto v = get("initial.kind")) ic.kind = trim(*v);
  if (ic.kind != "maxwellian" && ic.kind != "two_bump" && ic.kind != "mixture" && ic.kind != "snapshot")
    throw ConfigError("config: initial.kind must be maxwellian, two_bump, mixture or snapshot");
  if (auto v = get("initial.mass")) ic.mass = to_double(*v, "initial.mass");
  if (auto v = get("initial.temperature")) ic.temperature = to_double(*v, "initial.temperature");
  if (auto v = get("initial.bulk")) ic.bulk = to_vec3(*v, "initial.bulk");
  if (auto v = get("initial.separation")) ic.separation = to_double(*v, "initial.separation");
  if (auto v = get("initial.seed")) ic.seed = std::uint64_t(to_int(*v, "initial.seed"));
  if (auto v = get("initial.path")) ic.path = base_dir / trim(*v);
  if (ic.kind == "snapshot" && ic.path.empty()) throw ConfigError("config: initial.kind = snapshot needs initial.path");
  if (!(ic.mass > 0.0) || !(ic.temperature > 0.0))
    throw ConfigError("config: initial.mass and initial.temperature must be positive");

  if (auto v = get("time.dt")) s.dt = to_double(*v, "time.dt");
  const auto t_end = get("time.t_end"), steps = get("time.steps");
  if (t_end && steps) throw ConfigError("config: give either time.t_end or time.steps, not both");
  if (t_end) s.t_end = to_double(*t_end, "time.t_end");
  if (steps) s.t_end = double(to_int(*steps, "time.steps")) * s.dt;
  if (auto v = get("time.report_every")) s.report_every = int(to_int(*v, "time.report_every"));
  if (auto v = get("time.correction")) s.conservation_correction = to_bool(*v, "time.correction");
  if (s.report_every < 1) throw ConfigError("config: time.report_every must be >= 1");

  OutputSettings& o = c.output;
  o.dir = base_dir / "out";
  if (auto v = get("output.dir")) o.dir = base_dir / trim(*v);
  if (auto v = get("output.prefix")) o.prefix = trim(*v);
  if (auto v = get("output.snapshot_every")) o.snapshot_every = int(to_int(*v, "output.snapshot_every"));
  if (auto v = get("output.snapshot_format")) {
    const std::string f = trim(*v);
    if (f != "text" && f != "binary") throw ConfigError("config: output.snapshot_format must be text or binary");
    o.snapshot_binary = f == "binary";
  }
  if (auto v = get("output.lp_list")) s.lp_list = to_list(*v, "output.lp_list");
  for (double p : s.lp_list)
    if (!(p >= 1.0)) throw ConfigError("config: output.lp_list exponents must be >= 1");
  if (o.snapshot_every < 0) throw ConfigError("config: output.snapshot_every must be >= 0");

  MonitorTolerances& m = s.monitors;
  if (auto v = get("monitors.entropy_rel")) m.entropy_rel = to_double(*v, "monitors.entropy_rel");
  if (auto v = get("monitors.conservation_rel")) m.conservation_rel = to_double(*v, "monitors.conservation_rel");
  if (auto v = get("monitors.mass_drift_rel")) m.mass_drift_rel = to_double(*v, "monitors.mass_drift_rel");
  if (auto v = get("monitors.check_ceiling")) m.check_ceiling = to_bool(*v, "monitors.check_ceiling");

  GrazingSettings& gz = c.grazing;
  if (auto v = get("grazing.eps_list")) gz.eps_list = to_list(*v, "grazing.eps_list");
  if (auto v = get("grazing.phi")) gz.phi = trim(*v);
  if (auto v = get("grazing.phi_center")) gz.phi_center = to_vec3(*v, "grazing.phi_center");
  if (auto v = get("grazing.phi_radius")) gz.phi_radius = to_double(*v, "grazing.phi_radius");
  if (auto v = get("grazing.mode")) gz.mode = trim(*v);
  if (auto v = get("grazing.evolve_steps")) gz.evolve_steps = int(to_int(*v, "grazing.evolve_steps"));
  if (gz.mode != "fixed" && gz.mode != "evolved") throw ConfigError("config: grazing.mode must be fixed or evolved");
  if (gz.evolve_steps < 0) throw ConfigError("config: grazing.evolve_steps must be >= 0");
  for (double e : gz.eps_list)
    if (!(e > 0.0)) throw ConfigError("config: grazing.eps_list entries must be positive");
  return c;
}

Config parse_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

Distribution build_initial(const InitialCondition& ic, const GridSpec& grid) {
  if (ic.kind == "maxwellian") return maxwellian(grid, ic.mass, ic.bulk, ic.temperature);
  if (ic.kind == "two_bump") {
    const Vec3 off = ic.separation * Vec3::UnitX();
    const Distribution a = maxwellian(grid, ic.mass / 2.0, ic.bulk + off, ic.temperature);
    const Distribution b = maxwellian(grid, ic.mass / 2.0, ic.bulk - off, ic.temperature);
    return Distribution(grid, a.values() + b.values());
  }
  if (ic.kind == "mixture") {
    std::mt19937_64 rng(ic.seed);
    const Distribution f = random_gaussian_mixture(grid, rng);
    return Distribution(grid, f.values() * (ic.mass / lp_norm(f, 1.0)));
  }
  if (ic.kind == "snapshot") {
    Snapshot snap = read_snapshot(ic.path);
    if (!(snap.f.grid() == grid)) throw ConfigError("config: snapshot grid differs from [grid]");
    return snap.f;
  }
  throw ConfigError("config: unknown initial.kind '" + ic.kind + "'");
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return s.str();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

RunManifest::RunManifest(std::string config_digest, std::string version)
    : config_digest_(std::move(config_digest)), version_(std::move(version)), started_(utc_now()) {}

void RunManifest::add(const fs::path& file) {
  const std::string name = file.filename().string();
  for (const auto& f : files_)
    if (f.first == name) throw std::logic_error("manifest: " + name + " listed twice");
  files_.emplace_back(name, sha256_file(file));
}

void RunManifest::finish() { finished_ = utc_now(); }

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["config_digest"] = config_digest_;
  j["version"] = version_;
  j["started"] = started_;
  j["finished"] = finished_;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& [name, digest] : files_) j["files"].push_back({{"path", name}, {"sha256", digest}});
  return j.dump(2) + "\n";
}

std::string time_series_header(const std::vector<double>& lp_list) {
  std::string h = "step,t,mass,px,py,pz,energy,entropy";
  for (double p : lp_list) h += ",lp_" + format_double(p);
  for (double p : lp_list) h += ",ceiling_" + format_double(p);
  h += ",boundary_mass,l1_maxwellian,corrected\n";
  return h;
}

std::string time_series_row(const TimeSeriesRecord& r, const std::vector<double>& lp_list) {
  const auto& m = r.moments;
  std::string s = std::to_string(r.step) + "," + format_double(r.t) + "," + format_double(m.mass);
  for (int a = 0; a < 3; ++a) s += "," + format_double(m.momentum[a]);
  s += "," + format_double(m.energy) + "," + format_double(m.entropy);
  for (double p : lp_list) s += "," + format_double(m.lp_norms.at(p));
  for (double p : lp_list) s += "," + format_double(r.ceilings.at(p));
  s += "," + format_double(r.boundary_mass) + "," + format_double(r.l1_maxwellian) + "," +
       (r.corrected ? "1" : "0") + "\n";
  return s;
}

std::string verification_report(const std::vector<VerificationRecord>& records) {
  std::string s = "suite,inequality_id,trial_seed,lhs,rhs,margin,pass,aux\n";
  struct Tally {
    std::size_t count = 0, failures = 0;
    double min_margin = kInf;
  };
  std::vector<std::pair<std::string, Tally>> per_suite;
  Tally total;
  for (const auto& r : records) {
    s += r.suite + "," + r.inequality_id + "," + std::to_string(r.trial_seed) + "," + format_double(r.lhs) + "," +
         format_double(r.rhs) + "," + format_double(r.margin) + "," + (r.pass ? "1" : "0") + "," +
         format_double(r.aux) + "\n";
    auto it = std::find_if(per_suite.begin(), per_suite.end(), [&](const auto& p) { return p.first == r.suite; });
    if (it == per_suite.end()) it = per_suite.insert(per_suite.end(), {r.suite, Tally{}});
    for (Tally* t : {&it->second, &total}) {
      ++t->count;
      if (!r.pass) ++t->failures;
      t->min_margin = std::min(t->min_margin, r.margin);
    }
  }
  auto line = [](const std::string& name, const Tally& t) {
    return "# summary suite=" + name + " records=" + std::to_string(t.count) +
           " failures=" + std::to_string(t.failures) +
           " min_margin=" + (t.count ? format_double(t.min_margin) : std::string("none")) + "\n";
  };
  for (const auto& [name, t] : per_suite) s += line(name, t);
  s += line("total", total);
  return s;
}

std::string grazing_report(const std::vector<GrazingGapRecord>& records, std::optional<double> slope) {
  std::string s = "gamma,eps,weak_boltzmann,weak_landau,gap,phi_id,f_id,near_diagonal\n";
  for (const auto& r : records)
    s += format_double(r.gamma) + "," + format_double(r.eps) + "," + format_double(r.weak_boltzmann) + "," +
         format_double(r.weak_landau) + "," + format_double(r.gap) + "," + r.phi_id + "," + r.f_id + "," +
         format_double(r.near_diagonal) + "\n";
  s += "# slope=" + (slope ? format_double(*slope) : std::string("none")) + "\n";
  return s;
}

int cmd_simulate(const fs::path& config_path, std::ostream& out, std::ostream& err) {
  Config cfg;
  Distribution f0 = Distribution::zeros(GridSpec::make(8, 1.0));
  try {
    cfg = parse_config(config_path);
    f0 = build_initial(cfg.initial, cfg.sim.grid);
    if (!(cfg.sim.dt > 0.0) || !(cfg.sim.t_end > 0.0))
      throw ConfigError("config: time.dt and time.t_end (or time.steps) must be positive");
    const double limit = max_stable_dt(cfg.sim.kernel, lp_norm(f0, 1.0));
    if (cfg.sim.dt > limit)
      throw ConfigError("config: time.dt = " + format_double(cfg.sim.dt) + " violates dt <= eps/(8 mass) = " +
                        format_double(limit) + "; the explicit step would lose positivity");
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitConfig;
  }

  try {
    const auto& o = cfg.output;
    fs::create_directories(o.dir);
    RunManifest manifest(sha256_hex(cfg.text), version());
    const fs::path series = o.dir / (o.prefix + "_timeseries.csv");
    std::ofstream ts(series, std::ios::binary);
    if (!ts) throw std::runtime_error("cannot open " + series.string());
    ts << time_series_header(cfg.sim.lp_list);
    std::vector<fs::path> snaps;
    auto hook = [&](const TimeSeriesRecord& r, const Distribution& f) {
      ts << time_series_row(r, cfg.sim.lp_list);
      if (o.snapshot_every > 0 && r.step % o.snapshot_every == 0) {
        std::ostringstream name;
        name << o.prefix << "_snap_" << std::setw(6) << std::setfill('0') << r.step
             << (o.snapshot_binary ? ".bin" : ".txt");
        const fs::path p = o.dir / name.str();
        write_snapshot(p, Snapshot{f, r.t, cfg.sim.kernel.eps, cfg.sim.kernel.gamma});
        snaps.push_back(p);
      }
    };
    const RunResult res = run(f0, cfg.sim, hook);
    ts.close();
    manifest.add(series);
    for (const auto& p : snaps) manifest.add(p);
    manifest.finish();
    write_text(o.dir / (o.prefix + "_manifest.json"), manifest.to_json());
    const auto& last = res.records.back();
    out << "steps=" << last.step << " t=" << format_double(last.t) << " mass=" << format_double(last.moments.mass)
        << " entropy=" << format_double(last.moments.entropy) << '\n';
    if (res.breach) {
      err << "monitor breach: " << one_line(*res.breach) << '\n';
      return kExitBreach;
    }
    return kExitOk;
  } catch (const StepRejected& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitConfig;
  }
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<VerificationRecord> records;
  try {
    records = run_suite(opts.suite, opts.seed, opts.trials, opts.suite_options);
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitConfig;
  }
  const std::string report = verification_report(records);
  if (opts.out_path) {
    try {
      if (opts.out_path->has_parent_path()) fs::create_directories(opts.out_path->parent_path());
      write_text(*opts.out_path, report);
    } catch (const std::exception& e) {
      err << "error: " << one_line(e.what()) << '\n';
      return kExitConfig;
    }
  } else {
    out << report;
  }
  const auto failures = std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.pass; });
  if (failures > 0) {
    err << failures << " of " << records.size() << " checks failed\n";
    return kExitBreach;
  }
  return kExitOk;
}

int cmd_grazing(const fs::path& config_path, std::ostream& out, std::ostream& err) {
  Config cfg;
  Distribution f0 = Distribution::zeros(GridSpec::make(8, 1.0));
  std::optional<TestFunction> phi;
  try {
    cfg = parse_config(config_path);
    f0 = build_initial(cfg.initial, cfg.sim.grid);
    phi = make_test_function(cfg.grazing.phi, cfg.grazing.phi_center, cfg.grazing.phi_radius);
    if (!(cfg.sim.kernel.gamma >= -3.0 && cfg.sim.kernel.gamma < 0.0))
      throw ConfigError("config: grazing needs kernel.gamma in [-3, 0)");
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitConfig;
  }
  try {
    const auto& gz = cfg.grazing;
    std::vector<KernelParams<double>> params;
    for (double e : gz.eps_list) params.push_back({e, cfg.sim.kernel.gamma});
    const std::string f_id = cfg.initial.kind;
    std::vector<GrazingGapRecord> recs;
    if (gz.mode == "fixed") {
      recs = grazing_gap(f0, f_id, *phi, params, cfg.sim.quad);
    } else {
      // Each eps evolves its own copy of f0 under its own kernel.
      std::vector<Distribution> fs;
      for (const auto& k : params) {
        SimulationConfig sc = cfg.sim;
        sc.kernel = k;
        sc.dt = std::min(k.eps / 16.0, 0.5 * max_stable_dt(k, lp_norm(f0, 1.0)));
        Distribution f = f0;
        for (int s = 0; s < gz.evolve_steps; ++s) f = step(f, sc);
        fs.push_back(std::move(f));
      }
      recs = grazing_gap(fs, f_id + "_evolved", *phi, params, cfg.sim.quad);
    }
    std::optional<double> slope;
    if (params.size() >= 2) {
      try {
        slope = loglog_slope(recs);
      } catch (const std::invalid_argument&) {
        slope.reset();
      }
    }
    const auto& o = cfg.output;
    fs::create_directories(o.dir);
    RunManifest manifest(sha256_hex(cfg.text), version());
    const fs::path report = o.dir / (o.prefix + "_grazing.csv");
    write_text(report, grazing_report(recs, slope));
    manifest.add(report);
    manifest.finish();
    write_text(o.dir / (o.prefix + "_manifest.json"), manifest.to_json());
    out << "slope=" << (slope ? format_double(*slope) : std::string("none")) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitConfig;
  }
}

int cmd_moments(const fs::path& snapshot_path, std::ostream& out, std::ostream& err) {
  try {
    const Snapshot snap = read_snapshot(snapshot_path);
    const MomentReport m = moments(snap.f, {1.0, 2.0, kInf});
    out << "t,mass,px,py,pz,energy,entropy,lp_1,lp_2,lp_inf,llogl,boundary_mass\n";
    out << format_double(snap.time) << "," << format_double(m.mass);
    for (int a = 0; a < 3; ++a) out << "," << format_double(m.momentum[a]);
    out << "," << format_double(m.energy) << "," << format_double(m.entropy);
    for (double p : {1.0, 2.0, kInf}) out << "," << format_double(m.lp_norms.at(p));
    out << "," << format_double(m.llogl) << "," << format_double(boundary_mass(snap.f)) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitConfig;
  }
}

}  // namespace geps::cli
