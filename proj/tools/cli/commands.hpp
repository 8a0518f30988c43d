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

#ifndef PHOTONWALK_CLI_COMMANDS_HPP
#define PHOTONWALK_CLI_COMMANDS_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace photonwalk::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInternalError = 1,
    kConfigError = 2,
    kNumericalError = 3,
};

/// Full propagator from z = 0 to cfg.z_mm: the z-ordered product over the
/// fan-in (when the layout has one) followed by the constant interaction
/// region. `steps` slices cover the whole fan-in.
Propagator chip_propagator(const RunConfig& cfg, std::size_t steps);

/// Runs the tool; `args` excludes the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace photonwalk::cli

#endif
