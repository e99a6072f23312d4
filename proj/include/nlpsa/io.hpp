#pragma once

// On-disk formats. Grids are CSV, one image row per line, "%.17g" numbers.
// Designs and manifests are JSON.

#include <filesystem>
#include <string>
#include <string_view>

#include "nlpsa/demod.hpp"
#include "nlpsa/design.hpp"
#include "nlpsa/fringe.hpp"
#include "nlpsa/grid.hpp"
#include "nlpsa/spectrum.hpp"

#include <json.hpp>

namespace nlpsa::io {

namespace fs = std::filesystem;
using nlohmann::json;

/// "%.17g".
std::string format_double(double value);

std::string grid_to_csv(const Grid& grid);
Grid grid_from_csv(std::string_view text);

void write_grid_csv(const fs::path& path, const Grid& grid);
Grid read_grid_csv(const fs::path& path);

/// Header "omega,re,im,mag", one row per sample.
std::string spectrum_to_csv(const SpectrumSamples& samples);
void write_spectrum_csv(const fs::path& path, const SpectrumSamples& samples);

/// {"steps", "constraints": [{"omega","re","im"}], "coefficients": [{"re","im"}], "condition"}
json design_to_json(const CoefficientSet& coeffs);
/// Re-checks the constraint residual; a file whose coefficients do not meet
/// their own constraints is rejected with FormatError.
CoefficientSet design_from_json(const json& doc);

void write_design(const fs::path& path, const CoefficientSet& coeffs);
CoefficientSet read_design(const fs::path& path);

json profile_to_json(const FringeProfile& profile);
FringeProfile profile_from_json(const json& doc);

/// Directory with manifest.json, frame_NNN.csv and optional truth.csv.
void write_stack(const fs::path& dir, const FringeStack& stack);
FringeStack read_stack(const fs::path& dir);

json stats_to_json(const PhaseErrorStats& stats);

/// Pretty-printed JSON with a trailing newline.
void write_json(const fs::path& path, const json& doc);
json read_json(const fs::path& path);

void write_text(const fs::path& path, std::string_view text);
std::string read_text(const fs::path& path);

}  // namespace nlpsa::io
