#include "fidelity/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fidelity::io {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',' || ch == ';' || ch == '\t') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool is_number(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open data file: " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(split_csv(line));
    }
    return rows;
}

} // namespace

std::vector<double> read_data(const std::filesystem::path& path,
                              const std::optional<std::string>& column) {
    auto rows = read_rows(path);
    if (rows.empty()) throw data_error("data file is empty: " + path.string());

    std::size_t col = 0;
    std::size_t start = 0;
    const bool has_header = !rows[0].empty() && !is_number(rows[0][0]);
    if (has_header) {
        start = 1;
        if (column) {
            auto it = std::find(rows[0].begin(), rows[0].end(), *column);
            if (it == rows[0].end()) {
                throw data_error("column '" + *column + "' not found in " + path.string());
            }
            col = static_cast<std::size_t>(it - rows[0].begin());
        }
    } else if (column) {
        throw data_error("--column given but the file has no header row");
    }

    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = start; r < rows.size(); ++r) {
        if (col >= rows[r].size() || !is_number(rows[r][col])) {
            throw data_error("bad numeric value at data row " + std::to_string(r + 1));
        }
        out.push_back(std::stod(rows[r][col]));
    }
    if (out.empty()) throw data_error("no data rows in " + path.string());
    return out;
}

BinnedSample read_binned(const std::filesystem::path& path) {
    auto rows = read_rows(path);
    if (rows.empty()) throw data_error("binned file is empty: " + path.string());
    std::size_t start = (!rows[0].empty() && !is_number(rows[0][0])) ? 1 : 0;

    std::vector<double> edges;
    std::vector<std::int64_t> counts;
    for (std::size_t r = start; r < rows.size(); ++r) {
        if (rows[r].size() < 3 || !is_number(rows[r][0]) || !is_number(rows[r][1]) ||
            !is_number(rows[r][2])) {
            throw data_error("binned file: expected 'edge_lo,edge_hi,count' at row " +
                             std::to_string(r + 1));
        }
        const double lo = std::stod(rows[r][0]);
        const double hi = std::stod(rows[r][1]);
        const auto count = static_cast<std::int64_t>(std::llround(std::stod(rows[r][2])));
        if (edges.empty()) {
            edges.push_back(lo);
        } else if (std::abs(edges.back() - lo) > 1e-9 * std::max(1.0, std::abs(lo))) {
            throw data_error("binned file: bins are not contiguous at row " +
                             std::to_string(r + 1));
        }
        edges.push_back(hi);
        counts.push_back(count);
    }
    return BinnedSample(std::move(edges), std::move(counts));
}

PointSet2D read_points_2d(const std::filesystem::path& path) {
    auto rows = read_rows(path);
    if (rows.empty()) throw data_error("points file is empty: " + path.string());
    std::size_t start = (!rows[0].empty() && !is_number(rows[0][0])) ? 1 : 0;
    PointSet2D out;
    for (std::size_t r = start; r < rows.size(); ++r) {
        if (rows[r].size() < 2 || !is_number(rows[r][0]) || !is_number(rows[r][1])) {
            throw data_error("points file: expected 'x,y' at row " + std::to_string(r + 1));
        }
        out.push_back({std::stod(rows[r][0]), std::stod(rows[r][1])});
    }
    return out;
}

std::unique_ptr<Model2D> parse_model_2d(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw data_error("2D model spec: expected family:key=value,... got '" + spec + "'");
    }
    std::string fam = spec.substr(0, colon);
    std::transform(fam.begin(), fam.end(), fam.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    std::map<std::string, double> p{{"x0", 0.0}, {"y0", 0.0}, {"a", 1.0},
                                    {"b", 1.0},  {"phi", 0.0}};
    std::string rest = spec.substr(colon + 1);
    std::replace(rest.begin(), rest.end(), ',', ' ');
    std::istringstream in(rest);
    std::string tok;
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos || !p.count(tok.substr(0, eq))) {
            throw data_error("2D model spec: bad token '" + tok + "'");
        }
        p[tok.substr(0, eq)] = std::stod(tok.substr(eq + 1));
    }
    if (fam == "gauss2d") {
        return std::make_unique<Gauss2D>(p["x0"], p["y0"], p["a"], p["b"], p["phi"]);
    }
    if (fam == "exp2d" || fam == "exponential2d") {
        return std::make_unique<Exponential2D>(p["x0"], p["y0"], p["a"], p["b"], p["phi"]);
    }
    throw data_error("unknown 2D family: " + fam);
}

std::string format_double(double v, int significant) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", significant, v);
    return buf;
}

double round12(double v) {
    if (!std::isfinite(v)) return v;
    return std::stod(format_double(v, 12));
}

std::vector<std::pair<std::string, std::string>> read_config(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open config file: " + path.string());
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw data_error("config file: expected key=value, got '" + line + "'");
        }
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

} // namespace fidelity::io
