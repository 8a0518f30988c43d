/*
 * Copyright 2026 The photonwalk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli/emit.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "cli/config.hpp"
#include "photonwalk/error.hpp"
#include "photonwalk/version.hpp"

namespace photonwalk::cli {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class F>
void for_each_data_line(std::string_view text, F&& f) {
    std::size_t line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        f(line, line_no);
    }
}

double parse_number(std::string_view field, const std::string& where) {
    field = trim(field);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(x))
        throw ConfigError(where + ": '" + std::string(field) + "' is not a finite number");
    return x;
}

std::string where(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line);
}

} // namespace

std::string format_double(double x) {
    if (x == 0.0) x = 0.0;  // fold -0 so mirror-equal values print identically
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t h) {
    std::array<char, 17> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + 16, h, 16);
    std::string s(buf.data(), ptr);
    return std::string(16 - s.size(), '0') + s;
}

std::string Provenance::csv_header() const {
    return "# photonwalk " PHOTONWALK_VERSION " input-fnv1a64=" + input_hash + "\n";
}

nlohmann::json Provenance::json() const {
    return {{"tool", "photonwalk"}, {"version", PHOTONWALK_VERSION}, {"input_fnv1a64", input_hash}};
}

// nlohmann::json keeps object keys sorted, so dump() is a canonical form.
Provenance provenance_of(const nlohmann::json& effective_config) {
    return {hex64(fnv1a64(effective_config.dump()))};
}

Provenance provenance_of_bytes(std::string_view bytes) { return {hex64(fnv1a64(bytes))}; }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("write to '" + path.string() + "' failed");
}

std::string matrix_csv(const Provenance& p, const Eigen::MatrixXd& m) {
    std::string s = p.csv_header();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) s += ',';
            s += format_double(m(r, c));
        }
        s += '\n';
    }
    return s;
}

Eigen::MatrixXd parse_matrix_csv(std::string_view text, const std::string& source) {
    std::vector<std::vector<double>> rows;
    for_each_data_line(text, [&](std::string_view line, std::size_t no) {
        std::vector<double> row;
        for (auto field : split(line, ',')) row.push_back(parse_number(field, where(source, no)));
        if (!rows.empty() && row.size() != rows.front().size())
            throw ConfigError(where(source, no) + ": ragged row");
        rows.push_back(std::move(row));
    });
    if (rows.empty()) throw ConfigError(source + ": no matrix rows");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
}

nlohmann::json real_matrix_json(const Eigen::MatrixXd& m) {
    auto out = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

nlohmann::json complex_matrix_json(const Eigen::MatrixXcd& m) {
    auto out = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        out.push_back(std::move(row));
    }
    return out;
}

std::string record_csv(const Provenance& p, const TomographyRecord& record) {
    std::string s = p.csv_header();
    s += "input_port,input_state,output_port,analyzer,intensity\n";
    for (std::size_t in = 0; in < record.ports(); ++in)
        for (auto state : kTomographyStates)
            for (std::size_t out = 0; out < record.ports(); ++out)
                for (auto analyzer : kTomographyStates) {
                    s += std::to_string(in + 1);
                    s += ',';
                    s += to_string(state);
                    s += ',';
                    s += std::to_string(out + 1);
                    s += ',';
                    s += to_string(analyzer);
                    s += ',';
                    s += format_double(record.at(in, state, out, analyzer));
                    s += '\n';
                }
    return s;
}

TomographyRecord parse_record_csv(std::string_view text, const std::string& source) {
    using Key = std::tuple<std::size_t, PolarizationState, std::size_t, PolarizationState>;
    std::map<Key, double> rows;
    std::size_t ports = 0;
    bool header_seen = false;
    for_each_data_line(text, [&](std::string_view line, std::size_t no) {
        const auto fields = split(line, ',');
        if (!header_seen) {
            header_seen = true;
            if (trim(fields.front()) == "input_port") return;
        }
        if (fields.size() != 5) throw ConfigError(where(source, no) + ": expected 5 columns");
        auto port = [&](std::string_view f) {
            const double v = parse_number(f, where(source, no));
            if (v < 1.0 || v != std::floor(v)) throw ConfigError(where(source, no) + ": bad port");
            return static_cast<std::size_t>(v) - 1;
        };
        auto state = [&](std::string_view f) {
            const auto s = parse_polarization_state(trim(f));
            if (!s) throw ConfigError(where(source, no) + ": unknown state '" + std::string(trim(f)) + "'");
            return *s;
        };
        const Key key{port(fields[0]), state(fields[1]), port(fields[2]), state(fields[3])};
        const double value = parse_number(fields[4], where(source, no));
        if (value < 0.0) throw ConfigError(where(source, no) + ": negative intensity");
        if (!rows.emplace(key, value).second) throw ConfigError(where(source, no) + ": duplicate row");
        ports = std::max({ports, std::get<0>(key) + 1, std::get<2>(key) + 1});
    });
    if (ports == 0) throw ReconstructionFailed(source + ": record has no rows");
    const std::size_t expected = 36 * ports * ports;
    if (rows.size() != expected)
        throw ReconstructionFailed(source + ": record has " + std::to_string(rows.size()) + " of " +
                                   std::to_string(expected) + " rows for " + std::to_string(ports) +
                                   " ports");
    TomographyRecord record(ports);
    for (const auto& [k, v] : rows) record.at(std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k)) = v;
    return record;
}

nlohmann::json mueller_json(const MuellerArray& array) {
    auto matrices = nlohmann::json::array();
    auto residuals = nlohmann::json::array();
    for (std::size_t o = 0; o < array.ports; ++o) {
        auto row = nlohmann::json::array();
        auto res = nlohmann::json::array();
        for (std::size_t i = 0; i < array.ports; ++i) {
            row.push_back(real_matrix_json(array.at(o, i)));
            res.push_back(array.residuals.empty() ? 0.0 : array.residuals[o * array.ports + i]);
        }
        matrices.push_back(std::move(row));
        residuals.push_back(std::move(res));
    }
    return {{"ports", array.ports},
            {"index_order", "[output_port][input_port][row][col], ports 1-based in order"},
            {"mueller", std::move(matrices)},
            {"residuals", std::move(residuals)}};
}

nlohmann::json ellipsoid_json(const PoincareEllipsoid& e) {
    auto vec = [](const Eigen::Vector3d& v) { return nlohmann::json{v(0), v(1), v(2)}; };
    return {{"center", vec(e.center)},
            {"semi_axes", vec(e.semi_axes)},
            {"rotation", real_matrix_json(e.orientation)},
            {"markers", {{"H", vec(e.marker_h)}, {"D", vec(e.marker_d)}, {"R", vec(e.marker_r)}}},
            {"average_power", e.average_power},
            {"degenerate", e.degenerate},
            {"point", e.point}};
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

} // namespace photonwalk::cli
