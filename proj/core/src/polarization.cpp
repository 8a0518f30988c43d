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

#include "photonwalk/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include "photonwalk/error.hpp"
#include "photonwalk/propagation.hpp"

namespace photonwalk {

namespace {

using cplx = std::complex<double>;

std::size_t state_index(PolarizationState s) { return static_cast<std::size_t>(s); }

// Maps (Eh Eh*, Eh Ev*, Ev Eh*, Ev Ev*) to (S0, S1, S2, S3).
const Eigen::Matrix4cd& stokes_basis() {
    static const Eigen::Matrix4cd a = [] {
        const cplx i{0.0, 1.0};
        Eigen::Matrix4cd m;
        m << 1, 0, 0, 1,
             1, 0, 0, -1,
             0, 1, 1, 0,
             0, -i, i, 0;
        return m;
    }();
    return a;
}

const Eigen::Matrix4cd& stokes_basis_inverse() {
    static const Eigen::Matrix4cd inv = stokes_basis().inverse();
    return inv;
}

Eigen::Vector4cd coherency(const Eigen::Vector2cd& e) {
    return {e(0) * std::conj(e(0)), e(0) * std::conj(e(1)), e(1) * std::conj(e(0)),
            e(1) * std::conj(e(1))};
}

void check_vector(const Eigen::VectorXd& v, std::size_t n, const char* name) {
    if (static_cast<std::size_t>(v.size()) != n)
        throw InvalidArgument(std::string("build_polarized_chip: ") + name + " has length " +
                              std::to_string(v.size()) + ", expected " + std::to_string(n));
    if (!v.allFinite())
        throw InvalidArgument(std::string("build_polarized_chip: ") + name + " is not finite");
}

} // namespace

std::string_view to_string(PolarizationState s) {
    static constexpr std::array<std::string_view, 6> names{"H", "V", "D", "A", "L", "R"};
    return names[state_index(s)];
}

std::optional<PolarizationState> parse_polarization_state(std::string_view name) {
    for (auto s : kTomographyStates)
        if (to_string(s) == name) return s;
    return std::nullopt;
}

Eigen::Vector2cd jones_vector(PolarizationState s) {
    const double h = std::numbers::sqrt2 / 2.0;
    const cplx i{0.0, 1.0};
    switch (s) {
    case PolarizationState::H: return {1.0, 0.0};
    case PolarizationState::V: return {0.0, 1.0};
    case PolarizationState::D: return {h, h};
    case PolarizationState::A: return {h, -h};
    case PolarizationState::L: return {h, h * i};
    case PolarizationState::R: return {h, -h * i};
    }
    return {0.0, 0.0};
}

double StokesVector::degree_of_polarization() const {
    if (!(s0 > 0.0)) return 0.0;
    return std::sqrt(s1 * s1 + s2 * s2 + s3 * s3) / s0;
}

bool StokesVector::physical(double tol) const {
    return s0 >= -tol && std::sqrt(s1 * s1 + s2 * s2 + s3 * s3) <= std::max(s0, 0.0) + tol;
}

StokesVector canonical_stokes(PolarizationState s) {
    switch (s) {
    case PolarizationState::H: return {1, 1, 0, 0};
    case PolarizationState::V: return {1, -1, 0, 0};
    case PolarizationState::D: return {1, 0, 1, 0};
    case PolarizationState::A: return {1, 0, -1, 0};
    case PolarizationState::L: return {1, 0, 0, -1};
    case PolarizationState::R: return {1, 0, 0, 1};
    }
    return {};
}

StokesVector stokes_from_intensities(double i_h, double i_v, double i_d, double i_a, double i_r,
                                     double i_l) {
    for (double v : {i_h, i_v, i_d, i_a, i_r, i_l})
        if (!(v >= 0.0))
            throw InvalidArgument("stokes_from_intensities: intensities must be non-negative");
    return {i_h + i_v, i_h - i_v, i_d - i_a, i_r - i_l};
}

StokesVector stokes_from_jones(const Eigen::Vector2cd& field) {
    return StokesVector::from((stokes_basis() * coherency(field)).real());
}

Eigen::Matrix4d jones_to_mueller(const Eigen::Matrix2cd& jones) {
    Eigen::Matrix4cd kron;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d)
                    kron(2 * a + b, 2 * c + d) = jones(a, c) * std::conj(jones(b, d));
    return (stokes_basis() * kron * stokes_basis_inverse()).real();
}

Eigen::Matrix2cd JonesTransfer::block(std::size_t out, std::size_t in) const {
    if (out >= ports() || in >= ports()) throw OutOfRange("JonesTransfer::block: port out of range");
    return t.block<2, 2>(2 * static_cast<Eigen::Index>(out), 2 * static_cast<Eigen::Index>(in));
}

double JonesTransfer::max_singular_value() const {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t);
    return svd.singularValues()(0);
}

PolarizedChipParams PolarizedChipParams::scalar(std::size_t n, const CouplingModel& model,
                                                double z_mm) {
    PolarizedChipParams p;
    p.model_h = model;
    p.model_v = model;
    const auto nn = static_cast<Eigen::Index>(n);
    p.birefringence_per_mm = Eigen::VectorXd::Zero(nn);
    p.rotation_rad = Eigen::VectorXd::Zero(nn);
    p.loss_h = Eigen::VectorXd::Ones(nn);
    p.loss_v = Eigen::VectorXd::Ones(nn);
    p.z_mm = z_mm;
    return p;
}

JonesTransfer build_polarized_chip(const WaveguideLayout& layout, const PolarizedChipParams& p) {
    const std::size_t n = layout.size();
    check_vector(p.birefringence_per_mm, n, "birefringence");
    check_vector(p.rotation_rad, n, "rotation");
    check_vector(p.loss_h, n, "loss_h");
    check_vector(p.loss_v, n, "loss_v");
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(n); ++k)
        if (!(p.loss_h(k) > 0.0 && p.loss_h(k) <= 1.0 && p.loss_v(k) > 0.0 && p.loss_v(k) <= 1.0))
            throw InvalidArgument("build_polarized_chip: attenuations must lie in (0, 1]");
    if (!(p.z_mm >= 0.0)) throw InvalidArgument("build_polarized_chip: z must be >= 0");

    CouplingOptions opts;
    opts.neighbor_cutoff_um = p.neighbor_cutoff_um;
    const DistanceMatrix distances = pairwise_distances(layout);
    const CouplingMatrix ch = build_coupling_matrix(distances, p.model_h, opts);
    const CouplingMatrix cv = build_coupling_matrix(distances, p.model_v, opts);

    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * nn, 2 * nn);
    for (Eigen::Index i = 0; i < nn; ++i) {
        for (Eigen::Index j = 0; j < nn; ++j) {
            g(2 * i, 2 * j) = ch.values(i, j);
            g(2 * i + 1, 2 * j + 1) = cv.values(i, j);
        }
        g(2 * i, 2 * i) += 0.5 * p.birefringence_per_mm(i);
        g(2 * i + 1, 2 * i + 1) -= 0.5 * p.birefringence_per_mm(i);
        const double mixing = p.z_mm > 0.0 ? p.rotation_rad(i) / p.z_mm : 0.0;
        g(2 * i, 2 * i + 1) = mixing;
        g(2 * i + 1, 2 * i) = mixing;
    }

    Eigen::VectorXd atten(2 * nn);
    for (Eigen::Index i = 0; i < nn; ++i) {
        atten(2 * i) = p.loss_h(i);
        atten(2 * i + 1) = p.loss_v(i);
    }
    const Eigen::MatrixXcd u = unitary(g, p.z_mm).u;
    const Eigen::VectorXcd a = atten.cast<cplx>();
    if (p.loss_placement == LossPlacement::input) return {u * a.asDiagonal()};
    return {a.asDiagonal() * u};
}

JonesTransfer scalar_chip(const Eigen::MatrixXcd& u) {
    if (u.rows() != u.cols()) throw InvalidArgument("scalar_chip: matrix must be square");
    JonesTransfer chip{Eigen::MatrixXcd::Zero(2 * u.rows(), 2 * u.cols())};
    for (Eigen::Index o = 0; o < u.rows(); ++o)
        for (Eigen::Index i = 0; i < u.cols(); ++i) {
            chip.t(2 * o, 2 * i) = u(o, i);
            chip.t(2 * o + 1, 2 * i + 1) = u(o, i);
        }
    return chip;
}

TomographyRecord::TomographyRecord(std::size_t ports)
    : ports_(ports), values_(ports * ports * kTomographyStates.size() * kTomographyStates.size(),
                             0.0) {
    if (ports == 0) throw InvalidArgument("TomographyRecord: at least one port required");
}

std::size_t TomographyRecord::index(std::size_t in_port, PolarizationState in_state,
                                    std::size_t out_port, PolarizationState analyzer) const {
    if (in_port >= ports_ || out_port >= ports_)
        throw OutOfRange("TomographyRecord: port out of range");
    constexpr std::size_t s = kTomographyStates.size();
    return ((in_port * s + state_index(in_state)) * ports_ + out_port) * s + state_index(analyzer);
}

double& TomographyRecord::at(std::size_t in_port, PolarizationState in_state,
                             std::size_t out_port, PolarizationState analyzer) {
    return values_[index(in_port, in_state, out_port, analyzer)];
}

double TomographyRecord::at(std::size_t in_port, PolarizationState in_state,
                            std::size_t out_port, PolarizationState analyzer) const {
    return values_[index(in_port, in_state, out_port, analyzer)];
}

TomographyRecord simulate_tomography(const JonesTransfer& chip, double noise,
                                     std::uint64_t seed) {
    if (!(noise >= 0.0)) throw InvalidArgument("simulate_tomography: noise must be >= 0");
    const std::size_t n = chip.ports();
    if (chip.t.rows() != chip.t.cols() || chip.t.rows() % 2 != 0)
        throw InvalidArgument("simulate_tomography: Jones transfer must be 2N x 2N");
    TomographyRecord record(n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (std::size_t in = 0; in < n; ++in)
        for (auto state : kTomographyStates) {
            const Eigen::Vector2cd launch = jones_vector(state);
            const auto col = 2 * static_cast<Eigen::Index>(in);
            const Eigen::VectorXcd out = chip.t.col(col) * launch(0) + chip.t.col(col + 1) * launch(1);
            for (std::size_t o = 0; o < n; ++o) {
                const Eigen::Vector2cd field = out.segment<2>(2 * static_cast<Eigen::Index>(o));
                for (auto analyzer : kTomographyStates) {
                    double intensity = std::norm(jones_vector(analyzer).dot(field));
                    if (noise > 0.0)
                        intensity = std::max(0.0, intensity * (1.0 + noise * gauss(rng)));
                    record.at(in, state, o, analyzer) = intensity;
                }
            }
        }
    return record;
}

MuellerArray mueller_from_jones(const JonesTransfer& chip) {
    const std::size_t n = chip.ports();
    MuellerArray array{n, std::vector<Eigen::Matrix4d>(n * n), std::vector<double>(n * n, 0.0)};
    for (std::size_t o = 0; o < n; ++o)
        for (std::size_t i = 0; i < n; ++i) array.at(o, i) = jones_to_mueller(chip.block(o, i));
    return array;
}

MuellerArray reconstruct_mueller(const TomographyRecord& record) {
    std::array<StokesVector, 6> inputs;
    for (std::size_t k = 0; k < inputs.size(); ++k) inputs[k] = canonical_stokes(kTomographyStates[k]);
    return reconstruct_mueller(record, inputs);
}

MuellerArray reconstruct_mueller(const TomographyRecord& record,
                                 const std::array<StokesVector, 6>& input_states) {
    using PS = PolarizationState;
    Eigen::Matrix<double, 6, 4> design;
    for (std::size_t k = 0; k < input_states.size(); ++k)
        design.row(static_cast<Eigen::Index>(k)) = input_states[k].vec().transpose();
    if (!design.allFinite())
        throw ReconstructionFailed("reconstruct_mueller: input Stokes vectors are not finite");

    const Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 6, 4>> qr(design);
    if (qr.rank() < 4) {
        const Eigen::JacobiSVD<Eigen::Matrix<double, 6, 4>> svd(design);
        throw ReconstructionFailed(
            "reconstruct_mueller: input states span only " + std::to_string(qr.rank()) +
            " of 4 Stokes dimensions (smallest singular value " +
            std::to_string(svd.singularValues()(3)) + ")");
    }

    const std::size_t n = record.ports();
    MuellerArray array{n, std::vector<Eigen::Matrix4d>(n * n), std::vector<double>(n * n, 0.0)};
    for (std::size_t o = 0; o < n; ++o)
        for (std::size_t in = 0; in < n; ++in) {
            Eigen::Matrix<double, 6, 4> measured;
            for (std::size_t k = 0; k < kTomographyStates.size(); ++k) {
                const auto s = kTomographyStates[k];
                auto I = [&](PS a) { return record.at(in, s, o, a); };
                const StokesVector out = stokes_from_intensities(I(PS::H), I(PS::V), I(PS::D),
                                                                 I(PS::A), I(PS::R), I(PS::L));
                measured.row(static_cast<Eigen::Index>(k)) = out.vec().transpose();
            }
            const Eigen::Matrix4d mt = qr.solve(measured);
            array.at(o, in) = mt.transpose();
            array.residuals[o * n + in] = (design * mt - measured).norm();
        }
    return array;
}

PoincareEllipsoid poincare_ellipsoid(const Eigen::Matrix4d& m) {
    if (!m.allFinite()) throw InvalidArgument("poincare_ellipsoid: Mueller matrix is not finite");
    PoincareEllipsoid e;
    e.center = m.block<3, 1>(1, 0);
    const Eigen::Matrix3d shape = m.block<3, 3>(1, 1);
    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(shape, Eigen::ComputeFullU);
    e.semi_axes = svd.singularValues();
    e.orientation = svd.matrixU();
    if (e.orientation.determinant() < 0.0) e.orientation.col(2) *= -1.0;

    auto image = [&](PolarizationState s) -> Eigen::Vector4d { return m * canonical_stokes(s).vec(); };
    e.marker_h = image(PolarizationState::H).tail<3>();
    e.marker_d = image(PolarizationState::D).tail<3>();
    e.marker_r = image(PolarizationState::R).tail<3>();
    double power = 0.0;
    for (auto s : kTomographyStates) power += image(s)(0);
    e.average_power = power / static_cast<double>(kTomographyStates.size());

    const double scale = std::max({1.0, std::abs(m(0, 0)), e.semi_axes(0)});
    const double eps = 1e-12 * scale;
    e.degenerate = e.semi_axes(2) <= eps;
    e.point = e.semi_axes(0) <= eps && e.center.norm() <= eps && std::abs(e.average_power) <= eps;
    return e;
}

Eigen::MatrixXd extract_subspace(const MuellerArray& array, PolarizationState state) {
    const auto n = static_cast<Eigen::Index>(array.ports);
    const Eigen::Vector4d in = canonical_stokes(state).vec();
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index o = 0; o < n; ++o)
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::Vector4d s =
                array.at(static_cast<std::size_t>(o), static_cast<std::size_t>(i)) * in;
            // Projection onto the launched state: (S0 + s_state . s_out) / 2.
            out(o, i) = 0.5 * (s(0) + in.tail<3>().dot(s.tail<3>()));
        }
    return out;
}

Eigen::MatrixXd extract_h_subspace(const MuellerArray& array) {
    return extract_subspace(array, PolarizationState::H);
}

Eigen::VectorXd output_fractions(const MuellerArray& array, std::size_t input,
                                 PolarizationState state) {
    if (input >= array.ports) throw OutOfRange("output_fractions: input port out of range");
    const auto n = static_cast<Eigen::Index>(array.ports);
    const Eigen::Vector4d in = canonical_stokes(state).vec();
    Eigen::VectorXd power(n);
    for (Eigen::Index o = 0; o < n; ++o)
        power(o) = (array.at(static_cast<std::size_t>(o), input) * in)(0);
    const double total = power.sum();
    if (!(total > 0.0)) throw UndefinedRatio("output_fractions: no transmitted power");
    return power / total;
}

std::vector<double> pdl_report(const TomographyRecord& record) {
    using PS = PolarizationState;
    const std::size_t n = record.ports();
    std::vector<double> report(n);
    for (std::size_t in = 0; in < n; ++in) {
        double p_h = 0.0;
        double p_v = 0.0;
        for (std::size_t o = 0; o < n; ++o) {
            p_h += record.at(in, PS::H, o, PS::H) + record.at(in, PS::H, o, PS::V);
            p_v += record.at(in, PS::V, o, PS::H) + record.at(in, PS::V, o, PS::V);
        }
        if (!(p_h > 0.0))
            throw UndefinedRatio("pdl_report: no transmitted |H> power for input guide " +
                                 std::to_string(in + 1));
        report[in] = 1.0 - p_v / p_h;
    }
    return report;
}

} // namespace photonwalk
