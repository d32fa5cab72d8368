#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fidelity/discrete_data.hpp"
#include "fidelity/multidim.hpp"

namespace fidelity::io {

// Dataset input: plain text with one number per line, or CSV with a header
// and a named column. Lines starting with '#' are comments.
std::vector<double> read_data(const std::filesystem::path& path,
                              const std::optional<std::string>& column = std::nullopt);

// Binned input CSV: edge_lo, edge_hi, count rows (header optional); adjacent
// rows must share edges.
BinnedSample read_binned(const std::filesystem::path& path);

// 2D points CSV with columns x,y (header optional).
PointSet2D read_points_2d(const std::filesystem::path& path);

// "gauss2d:x0=7,y0=3,a=3,b=2,phi=1.0472" or "exp2d:..."; returns a model.
std::unique_ptr<Model2D> parse_model_2d(const std::string& spec);

// Round to 12 significant digits (makes serialized output stable for golden
// tests without bit-level float text issues).
double round12(double v);
std::string format_double(double v, int significant = 12);

// key=value config file, '#' comments; returned as flag defaults.
std::vector<std::pair<std::string, std::string>> read_config(
    const std::filesystem::path& path);

} // namespace fidelity::io
