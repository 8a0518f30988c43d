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

#ifndef PHOTONWALK_CLI_CONFIG_HPP
#define PHOTONWALK_CLI_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "photonwalk/photonwalk.hpp"

namespace photonwalk::cli {

/// Anything wrong with the user's configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PropagateConfig {
    std::size_t input = 0;          // zero-based
    std::size_t trace_points = 200;
    std::size_t steps = 200;        // z-ordered product slices over the fan-in
};

struct HomConfig {
    std::vector<double> delays_fs;
    double coherence_sigma_fs = 100.0;
    VisibilityMode mode = VisibilityMode::raw;
};

struct TomographyConfig {
    double noise = 0.0;
};

struct RunConfig {
    nlohmann::json source;          // parsed file with command-line overrides applied
    WaveguideLayout layout;
    CouplingModel coupling;
    std::optional<double> neighbor_cutoff_um;
    std::optional<Eigen::VectorXd> beta_per_mm;
    double z_mm = 0.0;
    std::vector<std::size_t> inputs;  // zero-based photon inputs
    std::uint64_t seed = 0;
    std::optional<PropagateConfig> propagate;
    std::optional<HomConfig> hom;
    std::optional<PolarizedChipParams> polarization;
    TomographyConfig tomography;

    std::size_t guides() const { return layout.size(); }
    CouplingOptions coupling_options() const;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> steps;
    std::optional<double> noise;
};

/// Parses and validates; every failure names the offending key.
RunConfig parse_config(const nlohmann::json& doc, const Overrides& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});

/// Parses a layout block on its own ("layout" is the key path used in messages).
WaveguideLayout parse_layout(const nlohmann::json& node, const std::string& path);

} // namespace photonwalk::cli

#endif
