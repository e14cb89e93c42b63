#pragma once

#include <string>

#include "srl/policy.hpp"

namespace srl {

// Versioned binary checkpoint: magic, version, layout dimensions and grids,
// then the value array as row-major 64-bit floats (native endianness).
void save_checkpoint(const PolicyTable& table, const std::string& path);
PolicyTable load_checkpoint(const std::string& path);

// CSV export: one row per grid node with all index coordinates, grid values,
// and the action values, serialized with 17 significant digits so re-reading
// reproduces the array exactly.
void export_policy_csv(const PolicyTable& table, const std::string& path);

}  // namespace srl
