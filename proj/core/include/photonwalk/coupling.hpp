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

#ifndef PHOTONWALK_COUPLING_HPP
#define PHOTONWALK_COUPLING_HPP

#include <cstddef>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "photonwalk/geometry.hpp"

namespace photonwalk {

/**
 * Exponential evanescent-coupling law C(r) = c0 * exp(-kappa * (r - r0))
 * together with the propagation constant placed on the diagonal.
 *
 * The defaults are illustrative only; no chip values are known for them.
 */
struct CouplingModel {
    double c0_per_mm = 1.0;
    double kappa_per_um = 0.5;
    double r0_um = 10.0;
    double beta_per_mm = 0.0;

    void validate() const;
};

/// Real symmetric coupling matrix C (per millimeter), beta on the diagonal.
struct CouplingMatrix {
    Eigen::MatrixXd values;

    std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
};

double coupling_constant(double r_um, const CouplingModel& model);

struct CouplingOptions {
    /// Cross-section to use; empty means the layout's interaction region.
    std::optional<double> z_mm;
    /// Pairs farther apart than this are left uncoupled.
    std::optional<double> neighbor_cutoff_um;
    /// Per-guide propagation constants overriding model.beta_per_mm.
    std::optional<Eigen::VectorXd> beta_per_mm;
};

CouplingMatrix build_coupling_matrix(const DistanceMatrix& distances, const CouplingModel& model,
                                     const CouplingOptions& options = {});

CouplingMatrix build_coupling_matrix(const WaveguideLayout& layout, const CouplingModel& model,
                                     const CouplingOptions& options = {});

} // namespace photonwalk

#endif
