#pragma once

#include "gridfc/lp.hpp"

#include <string>
#include <utility>
#include <vector>

namespace gridfc::lp {

struct MpsDocument {
    std::string text;
    /// (original, emitted) pairs; empty when the original names were MPS-safe.
    std::vector<std::pair<std::string, std::string>> name_map;

    bool renamed() const { return !name_map.empty(); }
    /// Mapping table as CSV (original,emitted), emitted alongside the model file.
    std::string name_map_csv() const;
};

/// Fixed-format MPS with ROWS/COLUMNS/RHS/BOUNDS and INTORG/INTEND markers.
/// Names longer than 8 characters (or containing characters MPS readers reject)
/// trigger a deterministic whole-problem renaming; the mapping is returned.
MpsDocument export_mps(const Problem& p, const std::string& model_name = "GRIDFC");

/// Parses an MPS document (the subset export_mps emits, plus common fixed MPS).
/// Throws std::runtime_error with a line number on malformed input.
Problem import_mps(const std::string& text);

} // namespace gridfc::lp
