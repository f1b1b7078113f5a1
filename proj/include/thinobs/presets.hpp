#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "thinobs/signorini.hpp"
#include "thinobs/trace.hpp"

namespace thinobs {

struct PresetInfo {
  std::string name;
  std::string description;
};

/// Registered presets in a fixed order.
const std::vector<PresetInfo>& presets();

struct PresetArgs {
  std::uint64_t seed = 0;
  std::filesystem::path file;  // trace file for "file"
};

/// Boundary data for the grid solver. Throws std::invalid_argument for unknown names.
BoundaryFn boundary_preset(const std::string& name, const PresetArgs& args = {});

/// Trace on the unit sphere for the epiperimetric checks.
Trace trace_preset(const std::string& name, const BasisPtr& basis, const PresetArgs& args = {});

/// Random solver data: A h_e(x1 - s, x2) in direction +-x1 plus small harmonic
/// polynomials Re (x1 - s + i|x2|)^k, k = 0..3; nonnegative at (+-1, 0).
BoundaryFn random_boundary(std::uint64_t seed);

}  // namespace thinobs
