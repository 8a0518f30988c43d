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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "photonwalk/error.hpp"
#include "photonwalk/polarization.hpp"
#include "photonwalk/propagation.hpp"
#include "photonwalk/twophoton.hpp"

using namespace photonwalk;
using cplx = std::complex<double>;
using PS = PolarizationState;

namespace {

WaveguideLayout paper_ellipse() { return elliptical_layout(6, 10.2, 7.0); }

PolarizedChipParams random_params(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PolarizedChipParams p;
    p.model_h = {0.5 + u(rng), 0.3 + 0.4 * u(rng), 9.0 + 2.0 * u(rng), u(rng)};
    p.model_v = {0.5 + u(rng), 0.3 + 0.4 * u(rng), 9.0 + 2.0 * u(rng), u(rng)};
    const auto nn = static_cast<Eigen::Index>(n);
    p.birefringence_per_mm = Eigen::VectorXd(nn);
    p.rotation_rad = Eigen::VectorXd(nn);
    p.loss_h = Eigen::VectorXd(nn);
    p.loss_v = Eigen::VectorXd(nn);
    for (Eigen::Index k = 0; k < nn; ++k) {
        p.birefringence_per_mm(k) = 2.0 * u(rng) - 1.0;
        p.rotation_rad(k) = 0.6 * (u(rng) - 0.5);
        p.loss_h(k) = 0.6 + 0.4 * u(rng);
        p.loss_v(k) = 0.5 + 0.5 * u(rng);
    }
    p.z_mm = 1.0 + 4.0 * u(rng);
    p.loss_placement = u(rng) < 0.5 ? LossPlacement::input : LossPlacement::output;
    return p;
}

WaveguideLayout random_ellipse(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return elliptical_layout(6, 8.0 + 4.0 * u(rng), 6.0 + 3.0 * u(rng), u(rng));
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

double max_array_error(const MuellerArray& a, const MuellerArray& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.matrices.size(); ++k)
        worst = std::max(worst, max_abs(a.matrices[k] - b.matrices[k]));
    return worst;
}

} // namespace

TEST(Stokes, FromIntensities) {
    const auto h = stokes_from_intensities(1, 0, 0.5, 0.5, 0.5, 0.5);
    EXPECT_EQ(h.vec(), Eigen::Vector4d(1, 1, 0, 0));
    const auto u = stokes_from_intensities(0.5, 0.5, 0.5, 0.5, 0.5, 0.5);
    EXPECT_EQ(u.vec(), Eigen::Vector4d(1, 0, 0, 0));
    EXPECT_EQ(u.degree_of_polarization(), 0.0);
    const auto d = stokes_from_intensities(0.5, 0.5, 1, 0, 0.5, 0.5);
    EXPECT_EQ(d.vec(), Eigen::Vector4d(1, 0, 1, 0));
    EXPECT_THROW(stokes_from_intensities(-0.1, 0, 0, 0, 0, 0), InvalidArgument);
}

TEST(Stokes, CanonicalStatesFromJones) {
    for (auto s : kTomographyStates) {
        const auto st = stokes_from_jones(jones_vector(s));
        EXPECT_LT((st.vec() - canonical_stokes(s).vec()).cwiseAbs().maxCoeff(), 1e-15) << to_string(s);
        EXPECT_EQ(parse_polarization_state(to_string(s)), s);
    }
    EXPECT_FALSE(parse_polarization_state("X").has_value());
}

TEST(JonesToMueller, Identity) {
    EXPECT_LT(max_abs(jones_to_mueller(Eigen::Matrix2cd::Identity()) - Eigen::Matrix4d::Identity()), 1e-15);
}

TEST(JonesToMueller, HalfWavePlate) {
    Eigen::Matrix2cd j;
    j << 1, 0, 0, -1;
    const Eigen::Matrix4d expected = Eigen::Vector4d(1, 1, -1, -1).asDiagonal();
    EXPECT_LT(max_abs(jones_to_mueller(j) - expected), 1e-15);
}

TEST(JonesToMueller, HorizontalPolarizer) {
    Eigen::Matrix2cd j;
    j << 1, 0, 0, 0;
    Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
    expected.topLeftCorner<2, 2>().setConstant(0.5);
    EXPECT_LT(max_abs(jones_to_mueller(j) - expected), 1e-15);
}

TEST(JonesToMueller, AgreesWithProjectionDefinitionAndIsHomomorphism) {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g(0.0, 1.0);
    auto random_jones = [&] {
        Eigen::Matrix2cd j;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) j(r, c) = cplx(g(rng), g(rng));
        return j;
    };
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Matrix2cd a = random_jones();
        const Eigen::Matrix2cd b = random_jones();
        const Eigen::Matrix4d ma = jones_to_mueller(a);
        EXPECT_LT(max_abs(ma - oracle::mueller_by_projection(a)), 1e-12);
        EXPECT_LT(max_abs(jones_to_mueller(a * b) - ma * jones_to_mueller(b)), 1e-10);
    }
}

TEST(PolarizedChip, ScalarReduction) {
    const auto layout = paper_ellipse();
    const CouplingModel model{};
    const auto chip = build_polarized_chip(layout, PolarizedChipParams::scalar(6, model, 3.0));
    const auto u = unitary(build_coupling_matrix(layout, model), 3.0);
    EXPECT_LT((chip.t - scalar_chip(u.u).t).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(PolarizedChip, DecoupledVerticalBlock) {
    auto p = PolarizedChipParams::scalar(6, CouplingModel{}, 2.0);
    p.model_v.c0_per_mm = 0.0;
    const auto chip = build_polarized_chip(paper_ellipse(), p);
    const auto record = simulate_tomography(chip);
    for (std::size_t in = 0; in < 6; ++in) {
        EXPECT_NEAR(record.at(in, PS::V, in, PS::V), 1.0, 1e-12);
        EXPECT_LT(record.at(in, PS::H, in, PS::H), 0.99);  // H walks away
    }
}

TEST(PolarizedChip, PassiveAndValidated) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto chip = build_polarized_chip(random_ellipse(rng), random_params(6, rng));
        EXPECT_LE(chip.max_singular_value(), 1.0 + 1e-9);
    }
    auto p = PolarizedChipParams::scalar(6, CouplingModel{}, 1.0);
    p.loss_v(2) = 0.0;
    EXPECT_THROW(build_polarized_chip(paper_ellipse(), p), InvalidArgument);
    p = PolarizedChipParams::scalar(5, CouplingModel{}, 1.0);
    EXPECT_THROW(build_polarized_chip(paper_ellipse(), p), InvalidArgument);
}

TEST(Tomography, IdentityChip) {
    const auto record = simulate_tomography(scalar_chip(Eigen::MatrixXcd::Identity(6, 6)));
    EXPECT_EQ(record.entries(), 1296u);
    for (std::size_t in = 0; in < 6; ++in)
        for (std::size_t out = 0; out < 6; ++out) {
            EXPECT_NEAR(record.at(in, PS::H, out, PS::H), in == out ? 1.0 : 0.0, 1e-15);
            EXPECT_NEAR(record.at(in, PS::H, out, PS::V), 0.0, 1e-15);
        }
    const auto array = reconstruct_mueller(record);
    for (std::size_t o = 0; o < 6; ++o)
        for (std::size_t i = 0; i < 6; ++i) {
            const Eigen::Matrix4d expected = o == i ? Eigen::Matrix4d(Eigen::Matrix4d::Identity()) : Eigen::Matrix4d(Eigen::Matrix4d::Zero());
            EXPECT_LT(max_abs(array.at(o, i) - expected), 1e-8);
        }
    EXPECT_LT(max_abs(extract_h_subspace(array) - Eigen::MatrixXd::Identity(6, 6)), 1e-8);
}

TEST(Tomography, LosslessEnergyConservation) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        auto p = random_params(6, rng);
        p.loss_h.setOnes();
        p.loss_v.setOnes();
        const auto record = simulate_tomography(build_polarized_chip(random_ellipse(rng), p));
        for (std::size_t in = 0; in < 6; ++in)
            for (auto s : kTomographyStates) {
                double total = 0.0;
                for (std::size_t out = 0; out < 6; ++out)
                    total += record.at(in, s, out, PS::H) + record.at(in, s, out, PS::V);
                EXPECT_NEAR(total, 1.0, 1e-10);
            }
    }
}

TEST(Tomography, NoiseIsSeededAndNonNegative) {
    const auto chip = scalar_chip(Eigen::MatrixXcd::Identity(3, 3));
    const auto a = simulate_tomography(chip, 0.3, 11);
    const auto b = simulate_tomography(chip, 0.3, 11);
    const auto c = simulate_tomography(chip, 0.3, 12);
    EXPECT_EQ(a.values(), b.values());
    EXPECT_NE(a.values(), c.values());
    EXPECT_GE(*std::min_element(a.values().begin(), a.values().end()), 0.0);
    EXPECT_THROW(simulate_tomography(chip, -0.1), InvalidArgument);
}

TEST(Reconstruction, RoundTripRandomChips) {
    std::mt19937_64 rng(2011);
    for (int trial = 0; trial < 50; ++trial) {
        const auto chip = build_polarized_chip(random_ellipse(rng), random_params(6, rng));
        const auto reconstructed = reconstruct_mueller(simulate_tomography(chip));
        EXPECT_LT(max_array_error(reconstructed, mueller_from_jones(chip)), 1e-8);
        for (double r : reconstructed.residuals) EXPECT_LT(r, 1e-12);
        // Physicality of the noiseless reconstruction on the six inputs.
        for (const auto& m : reconstructed.matrices)
            for (auto s : kTomographyStates) {
                const auto out = StokesVector::from(m * canonical_stokes(s).vec());
                EXPECT_GE(out.s0, -1e-9);
                EXPECT_LE(out.degree_of_polarization(), 1.0 + 1e-9);
            }
    }
}

TEST(Reconstruction, OnePercentNoiseStatistics) {
    std::mt19937_64 rng(3);
    const auto chip = build_polarized_chip(random_ellipse(rng), random_params(6, rng));
    const auto truth = mueller_from_jones(chip);
    std::vector<double> medians;
    double worst = 0.0;
    for (std::uint64_t draw = 0; draw < 100; ++draw) {
        const auto rec = reconstruct_mueller(simulate_tomography(chip, 0.01, draw));
        std::vector<double> errors;
        for (std::size_t k = 0; k < rec.matrices.size(); ++k) {
            const Eigen::Matrix4d e = (rec.matrices[k] - truth.matrices[k]).cwiseAbs();
            errors.insert(errors.end(), e.data(), e.data() + 16);
            worst = std::max(worst, e.maxCoeff());
        }
        std::nth_element(errors.begin(), errors.begin() + static_cast<long>(errors.size() / 2), errors.end());
        medians.push_back(errors[errors.size() / 2]);
        EXPECT_GT(*std::max_element(rec.residuals.begin(), rec.residuals.end()), 0.0);
    }
    std::sort(medians.begin(), medians.end());
    EXPECT_LT(medians.back(), 0.02);
    // 1% relative noise on intensities of order one cannot move an element by 0.1.
    EXPECT_LT(worst, 0.1);
}

TEST(Reconstruction, DegenerateInputSetFails) {
    const auto record = simulate_tomography(scalar_chip(Eigen::MatrixXcd::Identity(2, 2)));
    std::array<StokesVector, 6> inputs;
    for (auto& s : inputs) s = canonical_stokes(PS::H);
    inputs[1] = canonical_stokes(PS::V);
    EXPECT_THROW(reconstruct_mueller(record, inputs), ReconstructionFailed);
}

TEST(Ellipsoid, IdentityIsUnitSphere) {
    const auto e = poincare_ellipsoid(Eigen::Matrix4d::Identity());
    EXPECT_LT(e.center.norm(), 1e-15);
    EXPECT_LT((e.semi_axes - Eigen::Vector3d::Ones()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(e.marker_h, Eigen::Vector3d(1, 0, 0));
    EXPECT_EQ(e.marker_d, Eigen::Vector3d(0, 1, 0));
    EXPECT_EQ(e.marker_r, Eigen::Vector3d(0, 0, 1));
    EXPECT_DOUBLE_EQ(e.average_power, 1.0);
    EXPECT_FALSE(e.degenerate);
    EXPECT_NEAR(e.orientation.determinant(), 1.0, 1e-12);
}

TEST(Ellipsoid, DepolarizerShrinksIsotropically) {
    const auto e = poincare_ellipsoid(Eigen::Vector4d(1, 0.5, 0.5, 0.5).asDiagonal());
    EXPECT_LT(e.center.norm(), 1e-15);
    EXPECT_LT((e.semi_axes - Eigen::Vector3d::Constant(0.5)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Ellipsoid, PolarizerCollapsesOntoS1Axis) {
    Eigen::Matrix2cd j;
    j << 1, 0, 0, 0;
    const auto e = poincare_ellipsoid(jones_to_mueller(j));
    // Every input maps onto the segment from the origin to (1, 0, 0):
    // centre (1/2, 0, 0), one semi-axis 1/2 along S1, the others zero.
    EXPECT_TRUE(e.degenerate);
    EXPECT_FALSE(e.point);
    EXPECT_LT((e.center - Eigen::Vector3d(0.5, 0, 0)).norm(), 1e-15);
    EXPECT_LT((e.semi_axes - Eigen::Vector3d(0.5, 0, 0)).norm(), 1e-15);
    EXPECT_NEAR(std::abs(e.orientation(0, 0)), 1.0, 1e-15);
    EXPECT_LT((e.marker_h - Eigen::Vector3d(1, 0, 0)).norm(), 1e-15);
    EXPECT_DOUBLE_EQ(e.average_power, 0.5);
}

TEST(Ellipsoid, ZeroTransmissionIsAPoint) {
    const auto e = poincare_ellipsoid(Eigen::Matrix4d::Zero());
    EXPECT_TRUE(e.point);
    EXPECT_TRUE(e.degenerate);
}

TEST(Ellipsoid, LosslessPortPairsArePassive) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        auto p = random_params(6, rng);
        p.loss_h.setOnes();
        p.loss_v.setOnes();
        const auto array = mueller_from_jones(build_polarized_chip(random_ellipse(rng), p));
        for (const auto& m : array.matrices) {
            const auto e = poincare_ellipsoid(m);
            const double max_transmission = m(0, 0) + m.block<1, 3>(0, 1).norm();
            EXPECT_LE(e.semi_axes(0), max_transmission + 1e-12);
            EXPECT_LE(max_transmission, 1.0 + 1e-12);
        }
    }
}

TEST(Subspace, ScalarChipMatchesPropagator) {
    const auto layout = paper_ellipse();
    const CouplingModel model{0.8, 0.5, 10.0, 0.3};
    const auto chip = build_polarized_chip(layout, PolarizedChipParams::scalar(6, model, 4.0));
    const auto u = unitary(build_coupling_matrix(layout, model), 4.0);
    const auto array = reconstruct_mueller(simulate_tomography(chip));
    EXPECT_LT(max_abs(extract_h_subspace(array) - Eigen::MatrixXd(u.u.cwiseAbs2())), 1e-8);
    for (std::size_t in = 0; in < 6; ++in) {
        const Eigen::VectorXd col = extract_h_subspace(array).col(static_cast<Eigen::Index>(in));
        EXPECT_LT((col - single_photon_distribution(u, in)).cwiseAbs().maxCoeff(), 1e-8);
    }

    // Two-photon statistics from the H block of the vectorial chip.
    Eigen::MatrixXcd h_block(6, 6);
    for (Eigen::Index o = 0; o < 6; ++o)
        for (Eigen::Index i = 0; i < 6; ++i) h_block(o, i) = chip.t(2 * o, 2 * i);
    const Propagator from_chip{h_block, 4.0};
    EXPECT_LT(max_abs(gamma_indistinguishable(from_chip, 0, 1).values -
                      gamma_indistinguishable(u, 0, 1).values),
              1e-10);
}

TEST(Subspace, PolarizationDependentCouplingContrast) {
    // Guides 1 and 6 form an isolated directional coupler whose H and V
    // coupling rates send 80% and 11% of the light across.
    WaveguideLayout layout;
    layout.positions = {{0, 0}, {100, 0}, {200, 0}, {300, 0}, {400, 0}, {0, 10}};
    PolarizedChipParams p = PolarizedChipParams::scalar(6, CouplingModel{}, 1.0);
    p.model_h.c0_per_mm = std::asin(std::sqrt(0.80));
    p.model_v.c0_per_mm = std::asin(std::sqrt(0.11));
    p.neighbor_cutoff_um = 50.0;
    const auto array = reconstruct_mueller(simulate_tomography(build_polarized_chip(layout, p)));
    EXPECT_NEAR(output_fractions(array, 0, PS::H)(5), 0.80, 1e-8);
    EXPECT_NEAR(output_fractions(array, 0, PS::V)(5), 0.11, 1e-8);
    const Eigen::MatrixXd h = extract_subspace(array, PS::H);
    const Eigen::MatrixXd v = extract_subspace(array, PS::V);
    EXPECT_GT(max_abs(h - v), 0.6);
}

TEST(Pdl, LosslessChipHasNone) {
    const auto chip = build_polarized_chip(paper_ellipse(), PolarizedChipParams::scalar(6, CouplingModel{}, 2.5));
    for (double v : pdl_report(simulate_tomography(chip))) EXPECT_NEAR(v, 0.0, 1e-10);
}

TEST(Pdl, ConstructedExcessVerticalLoss) {
    std::mt19937_64 rng(38);
    auto p = random_params(6, rng);
    p.loss_placement = LossPlacement::input;
    p.loss_h(5) = 0.9;
    p.loss_v(5) = std::sqrt(1.0 - 0.38) * 0.9;
    const auto chip = build_polarized_chip(paper_ellipse(), p);
    const auto report = pdl_report(simulate_tomography(chip));
    EXPECT_NEAR(report[5], 0.38, 1e-6);

    // Monte-Carlo: the mean over noisy records stays within 4 standard errors.
    const int draws = 200;
    double sum = 0.0, sum2 = 0.0;
    for (int d = 0; d < draws; ++d) {
        const double v = pdl_report(simulate_tomography(chip, 0.01, static_cast<std::uint64_t>(d)))[5];
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt(std::max(0.0, sum2 / draws - mean * mean));
    EXPECT_GT(sd, 0.0);
    EXPECT_NEAR(mean, report[5], 4.0 * sd / std::sqrt(static_cast<double>(draws)));
}

TEST(Pdl, DarkInputIsUndefined) {
    TomographyRecord record(2);
    EXPECT_THROW(pdl_report(record), UndefinedRatio);
}
