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

#include "photonwalk/coupling.hpp"

#include <cmath>
#include <string>

#include "photonwalk/error.hpp"

namespace photonwalk {

void CouplingModel::validate() const {
    if (!(c0_per_mm >= 0.0) || !std::isfinite(c0_per_mm))
        throw InvalidArgument("coupling model: c0 must be finite and non-negative");
    if (!(kappa_per_um > 0.0) || !std::isfinite(kappa_per_um))
        throw InvalidArgument("coupling model: kappa must be positive");
    if (!(r0_um > 0.0) || !std::isfinite(r0_um))
        throw InvalidArgument("coupling model: r0 must be positive");
    if (!std::isfinite(beta_per_mm))
        throw InvalidArgument("coupling model: beta must be finite");
}

double coupling_constant(double r_um, const CouplingModel& model) {
    if (!(r_um > 0.0) || !std::isfinite(r_um))
        throw InvalidArgument("coupling_constant: separation must be positive, got " +
                              std::to_string(r_um));
    return model.c0_per_mm * std::exp(-model.kappa_per_um * (r_um - model.r0_um));
}

CouplingMatrix build_coupling_matrix(const DistanceMatrix& distances, const CouplingModel& model,
                                     const CouplingOptions& options) {
    model.validate();
    const Eigen::Index n = distances.values.rows();
    if (n == 0 || distances.values.cols() != n)
        throw InvalidArgument("build_coupling_matrix: distance matrix must be square and non-empty");
    if (options.beta_per_mm && options.beta_per_mm->size() != n)
        throw InvalidArgument("build_coupling_matrix: beta vector length " +
                              std::to_string(options.beta_per_mm->size()) +
                              " differs from core count " + std::to_string(n));

    CouplingMatrix c{Eigen::MatrixXd::Zero(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        c.values(i, i) = options.beta_per_mm ? (*options.beta_per_mm)(i) : model.beta_per_mm;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double r = distances.values(i, j);
            if (options.neighbor_cutoff_um && r > *options.neighbor_cutoff_um) continue;
            const double cij = coupling_constant(r, model);
            c.values(i, j) = cij;
            c.values(j, i) = cij;
        }
    }
    return c;
}

CouplingMatrix build_coupling_matrix(const WaveguideLayout& layout, const CouplingModel& model,
                                     const CouplingOptions& options) {
    return build_coupling_matrix(pairwise_distances(layout, options.z_mm), model, options);
}

} // namespace photonwalk
