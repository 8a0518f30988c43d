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

#ifndef PHOTONWALK_CLI_EMIT_HPP
#define PHOTONWALK_CLI_EMIT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "photonwalk/polarization.hpp"

namespace photonwalk::cli {

/// Shortest decimal that round-trips, so output is byte-stable.
std::string format_double(double x);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t h);

/// Identifies the tool build and the exact inputs of a run.
struct Provenance {
    std::string input_hash;  // hex FNV-1a of the canonical config or input bytes

    std::string csv_header() const;
    nlohmann::json json() const;
};

Provenance provenance_of(const nlohmann::json& effective_config);
Provenance provenance_of_bytes(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

std::string matrix_csv(const Provenance& p, const Eigen::MatrixXd& m);
/// Plain numeric rows; lines starting with '#' and blank lines are skipped.
Eigen::MatrixXd parse_matrix_csv(std::string_view text, const std::string& source);

nlohmann::json real_matrix_json(const Eigen::MatrixXd& m);
/// Row-major nested arrays of [re, im] pairs.
nlohmann::json complex_matrix_json(const Eigen::MatrixXcd& m);

std::string record_csv(const Provenance& p, const TomographyRecord& record);
/// Every (input_port, input_state, output_port, analyzer) row must appear
/// exactly once; a missing row raises ReconstructionFailed.
TomographyRecord parse_record_csv(std::string_view text, const std::string& source);

nlohmann::json mueller_json(const MuellerArray& array);
nlohmann::json ellipsoid_json(const PoincareEllipsoid& e);

/// JSON text with a trailing newline.
std::string dump(const nlohmann::json& j);

} // namespace photonwalk::cli

#endif
