#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gwi/model/model.hpp"

namespace gwi::cli {

/// Parses a model spec:
///
///   { "offspring":   { "family": "binary" },
///     "immigration": { "family": "bernoulli01", "params": { "q1": 0.5 } } }
///
/// Families: explicit (with "probs": [...] or "pmf_file": "<csv>"),
/// geometric-critical, binary, poisson {mean}, bernoulli01 {q1},
/// log-heavy-offspring {beta}, log-heavy-immigration {beta}. Unknown keys are
/// rejected. Throws ParseError naming the origin, the line and column, and the
/// offending key. Relative pmf_file paths resolve against base_dir.
Model parse_model_spec(std::string_view text, const std::string& origin,
                       const std::filesystem::path& base_dir = {});

Model load_model_spec(const std::filesystem::path& path);

/// The "probability" column of a CSV with a header row, as written by the
/// exact command; the "k" column, when present, must count up from 0 without
/// gaps (missing leading rows are zeros).
std::vector<double> read_pmf_csv(const std::filesystem::path& path);

}  // namespace gwi::cli
