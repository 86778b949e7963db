#include "geps/snapshot.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace geps {

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), end);
}

namespace {

bool is_binary(const std::filesystem::path& path) { return path.extension() == ".bin"; }

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("snapshot: bad " + what + " value '" + s + "'");
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  const GridSpec& g = snap.f.grid();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("snapshot: cannot open " + path.string() + " for writing");
  out << "# geps-snapshot n=" << g.n << " v_max=" << format_double(g.v_max)
      << " time=" << format_double(snap.time) << " eps=" << format_double(snap.eps)
      << " gamma=" << format_double(snap.gamma) << '\n';
  const auto& vals = snap.f.values();
  if (is_binary(path)) {
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      const auto bits = std::bit_cast<std::uint64_t>(vals[i]);
      std::array<char, 8> bytes{};
      for (int b = 0; b < 8; ++b) bytes[b] = char((bits >> (8 * b)) & 0xffu);
      out.write(bytes.data(), 8);
    }
  } else {
    for (Eigen::Index i = 0; i < vals.size(); ++i) out << format_double(vals[i]) << '\n';
  }
  if (!out) throw std::runtime_error("snapshot: write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string hash, tag;
  hs >> hash >> tag;
  if (hash != "#" || tag != "geps-snapshot") throw std::runtime_error("snapshot: missing header line");
  int n = -1;
  double v_max = 0.0, time = 0.0, eps = 0.0, gamma = 0.0;
  std::string field;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw std::runtime_error("snapshot: bad header field '" + field + "'");
    const std::string key = field.substr(0, eq), val = field.substr(eq + 1);
    if (key == "n") n = int(parse_double(val, key));
    else if (key == "v_max") v_max = parse_double(val, key);
    else if (key == "time") time = parse_double(val, key);
    else if (key == "eps") eps = parse_double(val, key);
    else if (key == "gamma") gamma = parse_double(val, key);
    else throw std::runtime_error("snapshot: unknown header field '" + key + "'");
  }
  const GridSpec g = GridSpec::make(n, v_max);
  Eigen::ArrayXd vals(Eigen::Index(g.size()));
  if (is_binary(path)) {
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      std::array<unsigned char, 8> bytes{};
      if (!in.read(reinterpret_cast<char*>(bytes.data()), 8))
        throw std::runtime_error("snapshot: truncated binary payload");
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= std::uint64_t(bytes[b]) << (8 * b);
      vals[i] = std::bit_cast<double>(bits);
    }
  } else {
    std::string line;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      if (!std::getline(in, line)) throw std::runtime_error("snapshot: truncated text payload");
      vals[i] = parse_double(line, "node");
    }
  }
  return Snapshot{Distribution(g, std::move(vals)), time, eps, gamma};
}

}  // namespace geps
