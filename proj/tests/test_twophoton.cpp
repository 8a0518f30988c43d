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

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "photonwalk/error.hpp"
#include "photonwalk/twophoton.hpp"

using namespace photonwalk;
using cplx = std::complex<double>;

namespace {

Propagator splitter() {
    // exp(i z C) with C = [[0, 1], [1, 0]] at z = pi/4.
    return {oracle::two_mode_exponential(0.0, 1.0, std::numbers::pi / 4), std::numbers::pi / 4};
}

Propagator identity(Eigen::Index n) { return {Eigen::MatrixXcd::Identity(n, n), 0.0}; }

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST(GammaIndistinguishable, IdentityPropagator) {
    const auto g = gamma_indistinguishable(identity(6), 0, 1);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(6, 6);
    expected(0, 1) = expected(1, 0) = 1.0;
    EXPECT_EQ(g.values, expected);
    EXPECT_EQ(g.kind, CorrelationKind::indistinguishable);
    EXPECT_EQ(fock_oracle(identity(6), 0, 1).values, expected);
}

TEST(GammaIndistinguishable, HongOuMandelBunching) {
    const auto g = gamma_indistinguishable(splitter(), 0, 1);
    EXPECT_NEAR(g.values(0, 1), 0.0, 1e-15);
    EXPECT_NEAR(g.values(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(g.values(1, 1), 0.5, 1e-15);
    const auto f = fock_oracle(splitter(), 0, 1);
    EXPECT_LT(max_abs(f.values - g.values), 1e-15);
}

TEST(GammaIndistinguishable, MatchesFockOracleOnRandomUnitaries) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const Propagator u{oracle::haar_unitary(6, rng), 1.0};
        const auto g = gamma_indistinguishable(u, 0, 1);
        const auto f = fock_oracle(u, 0, 1);
        EXPECT_LT(max_abs(g.values - f.values), 1e-10);
        EXPECT_NEAR(f.upper_triangle_sum(), 1.0, 1e-10);
    }
}

TEST(GammaIndistinguishable, Errors) {
    EXPECT_THROW(gamma_indistinguishable(identity(4), 2, 2), UnsupportedInput);
    EXPECT_THROW(gamma_indistinguishable(identity(4), 0, 4), OutOfRange);
    EXPECT_THROW(gamma_distinguishable(identity(4), 1, 1), UnsupportedInput);
    EXPECT_THROW(fock_oracle(identity(4), 3, 3), UnsupportedInput);
    EXPECT_THROW(quantum_difference(identity(4), 0, 0), UnsupportedInput);
}

TEST(GammaDistinguishable, IdentityAndSplitter) {
    const auto id = gamma_distinguishable(identity(3), 0, 1);
    EXPECT_EQ(id.values(0, 1), 1.0);
    EXPECT_EQ(id.upper_triangle_sum(), 1.0);
    const auto g = gamma_distinguishable(splitter(), 0, 1);
    EXPECT_NEAR(g.values(0, 1), 0.5, 1e-15);
    EXPECT_NEAR(g.values(0, 0), 0.25, 1e-15);
    EXPECT_NEAR(g.values(1, 1), 0.25, 1e-15);
}

TEST(GammaDistinguishable, IndependentWalkers) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 2 + trial % 5;
        const Propagator u{oracle::haar_unitary(n, rng), 1.0};
        const auto i = static_cast<std::size_t>(trial % n);
        const auto j = static_cast<std::size_t>((trial + 1) % n);
        const auto g = gamma_distinguishable(u, i, j);
        EXPECT_LT(max_abs(g.values - oracle::independent_walkers(u.u, static_cast<Eigen::Index>(i),
                                                                 static_cast<Eigen::Index>(j))),
                  1e-10);
        // Marginal: sum_l (1 + delta_kl) Gamma_kl = |U_ki|^2 + |U_kj|^2.
        Eigen::MatrixXd weighted = g.values;
        weighted.diagonal() *= 2.0;
        const Eigen::VectorXd marginal = weighted.rowwise().sum();
        const Eigen::VectorXd expected =
            u.u.col(static_cast<Eigen::Index>(i)).cwiseAbs2() + u.u.col(static_cast<Eigen::Index>(j)).cwiseAbs2();
        EXPECT_LT((marginal - expected).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(QuantumDifference, IdentityAndSplitter) {
    EXPECT_EQ(max_abs(quantum_difference(identity(4), 1, 3).values), 0.0);
    const auto d = quantum_difference(splitter(), 0, 1);
    EXPECT_EQ(d.kind, CorrelationKind::difference);
    EXPECT_NEAR(d.values(0, 1), 0.5, 1e-15);
    EXPECT_NEAR(d.values(0, 0), -0.25, 1e-15);
}

TEST(QuantumDifference, InterferenceFactorIdentity) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 2 + trial % 5;
        const Propagator u{oracle::haar_unitary(n, rng), 1.0};
        const Eigen::Index i = 0;
        const Eigen::Index j = n - 1;
        const auto d = quantum_difference(u, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index l = 0; l < n; ++l) {
                const cplx direct = u.u(k, i) * u.u(l, j);
                const cplx exchange = u.u(l, i) * u.u(k, j);
                const double factor = -2.0 * std::real(std::conj(direct) * exchange) / (k == l ? 2.0 : 1.0);
                EXPECT_NEAR(d.values(k, l), factor, 1e-12);
            }
    }
}

TEST(Correlations, NormalizationAndExchangeSymmetry) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 120; ++trial) {
        const Eigen::Index n = 2 + trial % 5;
        const Propagator u{oracle::haar_unitary(n, rng), 1.0};
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
            for (std::size_t j = i + 1; j < static_cast<std::size_t>(n); ++j) {
                const auto gi = gamma_indistinguishable(u, i, j);
                const auto gd = gamma_distinguishable(u, i, j);
                EXPECT_NO_THROW(check_probability(gi));
                EXPECT_NO_THROW(check_probability(gd));
                EXPECT_EQ(gi.values, gamma_indistinguishable(u, j, i).values);
                EXPECT_EQ(gd.values, gamma_distinguishable(u, j, i).values);
            }
    }
}

TEST(Correlations, CheckProbabilityRejects) {
    CorrelationMatrix bad{Eigen::MatrixXd::Constant(2, 2, 0.5), CorrelationKind::imported};
    EXPECT_THROW(check_probability(bad), NumericalError);
    EXPECT_THROW(check_probability(quantum_difference(splitter(), 0, 1)), NumericalError);
}

TEST(HomScan, LimitsOfTheOverlap) {
    const std::vector<double> delays{-10.0, 0.0, 10.0};
    const auto scan = hom_scan(splitter(), 0, 1, delays, 1.0);
    EXPECT_EQ(scan.coincidences[1], scan.indistinguishable.values);
    EXPECT_LT(max_abs(scan.coincidences[0] - scan.distinguishable.values), 1e-10);
    EXPECT_LT(max_abs(scan.coincidences[2] - scan.distinguishable.values), 1e-10);
    EXPECT_THROW(hom_scan(splitter(), 0, 1, delays, 0.0), InvalidArgument);
}

TEST(HomScan, ConvexCombinationProperty) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> delay(-4.0, 4.0);
    for (int trial = 0; trial < 30; ++trial) {
        const Propagator u{oracle::haar_unitary(5, rng), 1.0};
        std::vector<double> delays;
        for (int k = 0; k < 20; ++k) delays.push_back(delay(rng));
        const auto scan = hom_scan(u, 1, 3, delays, 0.7);
        const Eigen::MatrixXd lo = scan.indistinguishable.values.cwiseMin(scan.distinguishable.values);
        const Eigen::MatrixXd hi = scan.indistinguishable.values.cwiseMax(scan.distinguishable.values);
        for (const auto& c : scan.coincidences) {
            EXPECT_GE((c - lo).minCoeff(), -1e-15);
            EXPECT_GE((hi - c).minCoeff(), -1e-15);
        }
    }
}

TEST(HomScan, SplitterDipRecoversProgrammedWidth) {
    const double sigma = 1.7;
    std::vector<double> delays;
    for (int k = -40; k <= 40; ++k) delays.push_back(0.25 * k);
    const auto scan = hom_scan(splitter(), 0, 1, delays, sigma);
    const auto counts = scan.coincidence(0, 1);
    EXPECT_NEAR(counts[40], 0.0, 1e-15);
    const auto fit = fit_gaussian_dip(delays, counts);
    EXPECT_TRUE(fit.converged);
    EXPECT_NEAR(fit.width / sigma, 1.0, 0.01);
    EXPECT_NEAR(fit.baseline, 0.5, 1e-6);
    EXPECT_NEAR(fit.depth, 1.0, 1e-6);
    EXPECT_NEAR(visibility(scan, 0, 1), 1.0, 1e-12);
    EXPECT_NEAR(visibility(scan, 0, 1, VisibilityMode::gaussian_fit), 1.0, 1e-6);
}

TEST(Visibility, EqualCorrelationsGiveZero) {
    // With one photon never reaching output 2 the pair (0, 2) cannot interfere.
    Eigen::Matrix3cd u = Eigen::Matrix3cd::Zero();
    u.topLeftCorner<2, 2>() = oracle::two_mode_exponential(0.0, 1.0, 0.3);
    u(2, 2) = 1.0;
    std::vector<double> delays{-3, -1, 0, 1, 3};
    const auto scan = hom_scan({u, 0.3}, 0, 2, delays, 1.0);
    EXPECT_EQ(visibility(scan, 0, 2), 0.0);
}

TEST(Visibility, Errors) {
    const std::vector<double> zeros(5, 0.0);
    EXPECT_THROW(visibility(zeros), UndefinedVisibility);
    EXPECT_THROW(visibility(std::vector<double>{}), InvalidArgument);
    const std::vector<double> delays{-2, -1, 0, 1, 2};
    EXPECT_THROW(visibility(delays, zeros, VisibilityMode::gaussian_fit), UndefinedVisibility);
}

TEST(Visibility, ConstructedDipDataFile) {
    std::ifstream in(std::string(PHOTONWALK_DATA_DIR) + "/hom_dip_v038.csv");
    ASSERT_TRUE(in.good());
    std::vector<double> delays, counts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("delay", 0) == 0) continue;
        std::istringstream row(line);
        double d = 0, c = 0;
        char comma = 0;
        row >> d >> comma >> c;
        delays.push_back(d);
        counts.push_back(c);
    }
    ASSERT_EQ(delays.size(), 41u);
    const auto fit = fit_gaussian_dip(delays, counts);
    // scipy.optimize.curve_fit on the same file: depth 0.386249269, width 90.2396133.
    EXPECT_NEAR(fit.depth, 0.386249269, 1e-6);
    EXPECT_NEAR(fit.width, 90.2396133, 1e-4);
    EXPECT_NEAR(visibility(delays, counts, VisibilityMode::gaussian_fit), 0.38, 0.02);
}

TEST(Similarity, IdentityAndDisjoint) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 3);
    a(0, 1) = a(1, 0) = 0.5;
    b(2, 2) = 1.0;
    EXPECT_DOUBLE_EQ(similarity(a, a), 1.0);
    EXPECT_EQ(similarity(a, b), 0.0);
}

TEST(Similarity, MatchesReferenceAndIsSymmetricAndScaleInvariant) {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Propagator u{oracle::haar_unitary(6, rng), 1.0};
        const auto gi = gamma_indistinguishable(u, 0, 1);
        const auto gd = gamma_distinguishable(u, 0, 1);
        const double s = similarity(gi, gd);
        EXPECT_NEAR(s, oracle::similarity_reference(gi.values, gd.values), 1e-12);
        EXPECT_NEAR(s, similarity(gd, gi), 1e-12);
        EXPECT_NEAR(s, similarity(scale(rng) * gi.values, gd.values), 1e-12);
        EXPECT_NEAR(s, similarity(gi.values, scale(rng) * gd.values), 1e-12);
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 1.0 + 1e-15);
    }
}

TEST(Similarity, Errors) {
    EXPECT_THROW(similarity(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Ones(2, 2)), InvalidArgument);
    EXPECT_THROW(similarity(Eigen::MatrixXd::Ones(2, 2), Eigen::MatrixXd::Ones(3, 3)), InvalidArgument);
    EXPECT_THROW(similarity(-Eigen::MatrixXd::Ones(2, 2), Eigen::MatrixXd::Ones(2, 2)), InvalidArgument);
}
