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

#ifndef PHOTONWALK_TWOPHOTON_HPP
#define PHOTONWALK_TWOPHOTON_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "photonwalk/propagation.hpp"

namespace photonwalk {

enum class CorrelationKind { indistinguishable, distinguishable, difference, imported };

std::string_view to_string(CorrelationKind kind);

/**
 * Two-photon coincidence matrix. Entries are stored for the full N x N
 * square with the 1/(1 + delta_kl) factor already applied, so a probability
 * matrix sums to one over its upper triangle (k <= l).
 */
struct CorrelationMatrix {
    Eigen::MatrixXd values;
    CorrelationKind kind = CorrelationKind::imported;

    std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
    double upper_triangle_sum() const;
};

/// Throws NumericalError unless the matrix is symmetric, non-negative and
/// sums to one over k <= l within `tol`. Difference matrices are rejected.
void check_probability(const CorrelationMatrix& gamma, double tol = 1e-10);

// Both photons enter distinct guides i != j (zero-based). Amplitudes follow
// the propagator convention U(output, input).

/// Simultaneous (temporally indistinguishable) photons.
CorrelationMatrix gamma_indistinguishable(const Propagator& u, std::size_t i, std::size_t j);

/// Fully distinguishable photons: independent single-photon walks.
CorrelationMatrix gamma_distinguishable(const Propagator& u, std::size_t i, std::size_t j);

/// Gamma^d - Gamma^i, the two-photon interference term.
CorrelationMatrix quantum_difference(const Propagator& u, std::size_t i, std::size_t j);

/**
 * Brute-force reference for gamma_indistinguishable: applies the evolved
 * creation operators to the vacuum in the occupation-number basis and squares
 * the resulting amplitudes. Independent of the closed-form expression.
 */
CorrelationMatrix fock_oracle(const Propagator& u, std::size_t i, std::size_t j);

/// Mode overlap of two photons with Gaussian temporal envelopes delayed by
/// `delay` (same units as sigma).
double mode_overlap(double delay, double coherence_sigma);

/**
 * Coincidences versus relative delay. At each delay the pair is a mixture of
 * indistinguishable and distinguishable behaviour weighted by the overlap:
 * C(d) = Gamma^d + overlap(d) * (Gamma^i - Gamma^d).
 */
struct HomScan {
    std::vector<double> delays;
    double coherence_sigma = 1.0;
    CorrelationMatrix indistinguishable;
    CorrelationMatrix distinguishable;
    std::vector<Eigen::MatrixXd> coincidences;  // one per delay

    std::vector<double> coincidence(std::size_t k, std::size_t l) const;
};

HomScan hom_scan(const Propagator& u, std::size_t i, std::size_t j,
                 std::span<const double> delays, double coherence_sigma);

enum class VisibilityMode { raw, gaussian_fit };

/// Least-squares fit of C(d) = baseline * (1 - depth * exp(-d^2 / (2 width^2))).
struct GaussianDipFit {
    double baseline = 0.0;
    double depth = 0.0;
    double width = 0.0;
    double rms_residual = 0.0;
    int iterations = 0;
    bool converged = false;

    /// (C_max - C_min) / C_max of the fitted curve, taking the baseline as the
    /// reference level; negative for a coincidence peak.
    double visibility() const { return depth; }
};

GaussianDipFit fit_gaussian_dip(std::span<const double> delays, std::span<const double> counts);

/// (C_max - C_min) / C_max over the samples.
double visibility(std::span<const double> counts);

double visibility(std::span<const double> delays, std::span<const double> counts,
                  VisibilityMode mode);

double visibility(const HomScan& scan, std::size_t k, std::size_t l,
                  VisibilityMode mode = VisibilityMode::raw);

/**
 * Overlap fidelity between two non-negative distributions,
 * S = (sum sqrt(a b))^2 / (sum a * sum b), summed over every entry.
 */
double similarity(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

inline double similarity(const CorrelationMatrix& a, const CorrelationMatrix& b) {
    return similarity(a.values, b.values);
}

} // namespace photonwalk

#endif
