#pragma once

// CSV and JSON forms of the library's result types. CSV files are
// comma-separated with a header row; numbers use "%.17g".

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmtomo/grid.hpp"
#include "pmtomo/husimi.hpp"
#include "pmtomo/inference.hpp"
#include "pmtomo/pomalg.hpp"
#include "pmtomo/sampling.hpp"

namespace pmtomo::io {

using nlohmann::json;

std::string format_number(double x);

/// {"K", "m", "se"}; se is null when no errors are attached.
json to_json(const MomentSequence& moments);
/// Header "k,m,se"; se is empty when absent.
void write_moments_csv(std::ostream& os, const MomentSequence& moments);
/// Several moment columns side by side: "k,<name1>,<name2>,...".
void write_moment_table_csv(std::ostream& os, const std::vector<std::string>& names,
                            const std::vector<std::vector<double>>& columns);

/// Header "x,density".
void write_density_csv(std::ostream& os, const GridDensity& density);
/// Header "x,<name1>,<name2>,..."; all columns must live on `grid`.
void write_densities_csv(std::ostream& os, const Grid& grid, const std::vector<std::string>& names,
                         const std::vector<std::vector<double>>& columns);

/// {"dim", "real", "imag"} with row-major nested arrays.
json to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(const json& j);

json to_json(const DeterminacyVerdict& verdict);
json to_json(const HankelCheck& check);
json to_json(const LemmaReport& report);
/// Counts always; the per-attempt log when `with_log`.
json to_json(const AdversarialReport& report, bool with_log);

/// Header "r,theta,q".
void write_polar_csv(std::ostream& os, const PolarGrid& q);

/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace pmtomo::io
