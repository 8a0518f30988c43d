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

#include "photonwalk/propagation.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "photonwalk/error.hpp"

namespace photonwalk {

namespace {

using cplx = std::complex<double>;

// Eigendecomposition of a real symmetric matrix, reusable across many z.
class SpectralExponential {
public:
    SpectralExponential(const Eigen::MatrixXd& g, const Tolerances& tol) {
        if (g.rows() == 0 || g.rows() != g.cols())
            throw InvalidArgument("unitary: generator must be square and non-empty");
        if (!g.allFinite()) throw InvalidArgument("unitary: generator has non-finite entries");
        const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
        if (asym > tol.symmetry)
            throw InvalidArgument("unitary: generator is not symmetric (max deviation " +
                                  std::to_string(asym) + ")");
        // Symmetrize so round-off below the tolerance cannot leak into the solver.
        const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
        if (es.info() != Eigen::Success)
            throw NumericalError("unitary: eigendecomposition failed");
        values_ = es.eigenvalues();
        vectors_ = es.eigenvectors().cast<cplx>();
    }

    Eigen::MatrixXcd operator()(double z) const {
        if (z == 0.0) return Eigen::MatrixXcd::Identity(vectors_.rows(), vectors_.cols());
        Eigen::VectorXcd phases(values_.size());
        for (Eigen::Index k = 0; k < values_.size(); ++k)
            phases(k) = std::polar(1.0, z * values_(k));
        return vectors_ * phases.asDiagonal() * vectors_.adjoint();
    }

private:
    Eigen::VectorXd values_;
    Eigen::MatrixXcd vectors_;
};

void check_length(double z_mm, const char* what) {
    if (!(z_mm >= 0.0) || !std::isfinite(z_mm))
        throw InvalidArgument(std::string(what) + ": propagation length must be >= 0, got " +
                              std::to_string(z_mm));
}

} // namespace

double Propagator::unitarity_deviation() const {
    const Eigen::MatrixXcd g = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    return g.cwiseAbs().maxCoeff();
}

Propagator unitary(const Eigen::MatrixXd& generator, double z_mm, const Tolerances& tol) {
    check_length(z_mm, "unitary");
    return {SpectralExponential(generator, tol)(z_mm), z_mm};
}

Propagator unitary(const CouplingMatrix& c, double z_mm, const Tolerances& tol) {
    return unitary(c.values, z_mm, tol);
}

Eigen::VectorXd single_photon_distribution(const Propagator& u, std::size_t input) {
    if (input >= u.size())
        throw OutOfRange("single_photon_distribution: port " + std::to_string(input) +
                         " out of range for " + std::to_string(u.size()) + " guides");
    return u.u.col(static_cast<Eigen::Index>(input)).cwiseAbs2();
}

Propagator propagate_z_dependent(const WaveguideLayout& layout, const CouplingModel& model,
                                 double z_start_mm, double z_end_mm, std::size_t steps,
                                 const CouplingOptions& options, const Tolerances& tol) {
    if (steps == 0) throw InvalidArgument("propagate_z_dependent: steps must be >= 1");
    if (!(z_end_mm >= z_start_mm))
        throw InvalidArgument("propagate_z_dependent: z_end must not precede z_start");
    if (!layout.z_profile)
        throw OutOfRange("propagate_z_dependent: layout has no z profile");
    if (!layout.z_profile->covers(z_start_mm) || !layout.z_profile->covers(z_end_mm))
        throw OutOfRange("propagate_z_dependent: [" + std::to_string(z_start_mm) + ", " +
                         std::to_string(z_end_mm) + "] mm not covered by the layout profile");

    const auto n = static_cast<Eigen::Index>(layout.size());
    const double dz = (z_end_mm - z_start_mm) / static_cast<double>(steps);
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Identity(n, n);
    CouplingOptions slice = options;
    for (std::size_t k = 0; k < steps; ++k) {
        slice.z_mm = z_start_mm + (static_cast<double>(k) + 0.5) * dz;
        const CouplingMatrix c = build_coupling_matrix(layout, model, slice);
        total = SpectralExponential(c.values, tol)(dz) * total;
    }
    return {std::move(total), z_end_mm - z_start_mm};
}

Eigen::MatrixXd intensity_trace(const CouplingMatrix& c, std::size_t input,
                                std::span<const double> z_grid_mm, const Propagator* prefix) {
    const auto n = static_cast<Eigen::Index>(c.size());
    if (input >= c.size())
        throw OutOfRange("intensity_trace: port " + std::to_string(input) + " out of range");
    if (prefix && prefix->u.rows() != n)
        throw InvalidArgument("intensity_trace: prefix propagator has wrong dimension");
    for (std::size_t k = 0; k < z_grid_mm.size(); ++k) {
        check_length(z_grid_mm[k], "intensity_trace");
        if (k > 0 && z_grid_mm[k] < z_grid_mm[k - 1])
            throw InvalidArgument("intensity_trace: z grid must be nondecreasing");
    }

    const SpectralExponential expm(c.values, kDefaultTolerances);
    const auto col = static_cast<Eigen::Index>(input);
    const Eigen::VectorXcd launch =
        prefix ? Eigen::VectorXcd(prefix->u.col(col)) : Eigen::VectorXcd::Unit(n, col);
    Eigen::MatrixXd trace(static_cast<Eigen::Index>(z_grid_mm.size()), n);
    for (std::size_t k = 0; k < z_grid_mm.size(); ++k)
        trace.row(static_cast<Eigen::Index>(k)) =
            (expm(z_grid_mm[k]) * launch).cwiseAbs2().transpose();
    return trace;
}

} // namespace photonwalk
