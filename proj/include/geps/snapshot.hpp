#pragma once

// Grid snapshot files.
//
// Line 1 (always text):
//   # geps-snapshot n=<n> v_max=<v_max> time=<t> eps=<eps> gamma=<gamma>
// followed by the n^3 nodal values in linear-index order (i fastest):
//   *.bin      raw little-endian IEEE-754 binary64, no separators
//   otherwise  one value per line in shortest round-trip decimal

#include "geps/grid_state.hpp"

#include <filesystem>
#include <string>

namespace geps {

struct Snapshot {
  Distribution f;
  double time = 0.0;
  double eps = 0.0;
  double gamma = 0.0;
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);

/// Throws std::runtime_error on unreadable or malformed files.
Snapshot read_snapshot(const std::filesystem::path& path);

/// Shortest decimal that parses back to exactly x.
std::string format_double(double x);

}  // namespace geps
