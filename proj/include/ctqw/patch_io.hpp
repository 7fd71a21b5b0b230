#pragma once

#include <string>

#include "ctqw/lattice.hpp"

namespace ctqw::lattice {

// JSON round-trip for patches.  Positions are serialized in shortest
// round-trip decimal form, so save followed by load reproduces every double
// bit for bit.  Schema:
//   { "family": ..., "generation_params": {...},
//     "vertices": [[x, y], ...], "edges": [[i, j], ...], "classes": [...] }
std::string patch_to_json(const LatticePatch& patch);
LatticePatch patch_from_json(const std::string& text);

void save_patch(const LatticePatch& patch, const std::string& path);
LatticePatch load_patch(const std::string& path);

}  // namespace ctqw::lattice
