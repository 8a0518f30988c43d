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

#ifndef PHOTONWALK_PROPAGATION_HPP
#define PHOTONWALK_PROPAGATION_HPP

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "photonwalk/coupling.hpp"
#include "photonwalk/geometry.hpp"

namespace photonwalk {

/// Numerical tolerances shared by the propagation and two-photon code.
struct Tolerances {
    double symmetry = 1e-12;   // max |C - C^T| accepted as symmetric
    double unitarity = 1e-10;  // max |U^dag U - I|
    double oracle = 1e-8;      // spectral vs series exponential agreement
};

inline constexpr Tolerances kDefaultTolerances{};

/**
 * Port-to-port amplitude transfer U = exp(i z C). Column j is the output
 * field for light launched into guide j, so U(k, j) is the amplitude from
 * input j to output k.
 */
struct Propagator {
    Eigen::MatrixXcd u;
    double length_mm = 0.0;

    std::size_t size() const { return static_cast<std::size_t>(u.rows()); }

    /// max |U^dag U - I| over all elements.
    double unitarity_deviation() const;
};

/// exp(i z G) for a real symmetric generator, via its eigendecomposition.
/// Throws InvalidArgument when G is not symmetric to `tol.symmetry` or z < 0.
Propagator unitary(const Eigen::MatrixXd& generator, double z_mm,
                   const Tolerances& tol = kDefaultTolerances);

Propagator unitary(const CouplingMatrix& c, double z_mm,
                   const Tolerances& tol = kDefaultTolerances);

/// p_k = |U(k, input)|^2. Ports are zero-based.
Eigen::VectorXd single_photon_distribution(const Propagator& u, std::size_t input);

/**
 * Ordered product of slice exponentials exp(i dz C(z_k)) sampled at the
 * midpoint of each of `steps` equal slices of [z_start, z_end]. Later slices
 * multiply from the left.
 */
Propagator propagate_z_dependent(const WaveguideLayout& layout, const CouplingModel& model,
                                 double z_start_mm, double z_end_mm, std::size_t steps,
                                 const CouplingOptions& options = {},
                                 const Tolerances& tol = kDefaultTolerances);

/**
 * Single-photon distribution at each z of a nondecreasing grid, one row per
 * z. When `prefix` is given the field first passes through it (e.g. the
 * fan-in), so row z is the distribution of exp(i z C) * prefix.
 */
Eigen::MatrixXd intensity_trace(const CouplingMatrix& c, std::size_t input,
                                std::span<const double> z_grid_mm,
                                const Propagator* prefix = nullptr);

} // namespace photonwalk

#endif
