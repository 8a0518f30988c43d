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

#ifndef PHOTONWALK_POLARIZATION_HPP
#define PHOTONWALK_POLARIZATION_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "photonwalk/coupling.hpp"
#include "photonwalk/geometry.hpp"

namespace photonwalk {

/// The six tomography states, in record order. L and R are
/// (|H> + i|V>)/sqrt2 and (|H> - i|V>)/sqrt2 respectively.
enum class PolarizationState { H, V, D, A, L, R };

inline constexpr std::array<PolarizationState, 6> kTomographyStates{
    PolarizationState::H, PolarizationState::V, PolarizationState::D,
    PolarizationState::A, PolarizationState::L, PolarizationState::R};

std::string_view to_string(PolarizationState s);
std::optional<PolarizationState> parse_polarization_state(std::string_view name);

Eigen::Vector2cd jones_vector(PolarizationState s);

struct StokesVector {
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;

    Eigen::Vector4d vec() const { return {s0, s1, s2, s3}; }
    static StokesVector from(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }

    /// |(s1, s2, s3)| / s0; zero for a dark beam.
    double degree_of_polarization() const;
    /// s0 >= -tol and polarized part no longer than s0 (+ tol).
    bool physical(double tol = 1e-9) const;
};

/// H = (1,1,0,0), V = (1,-1,0,0), D = (1,0,1,0), A = (1,0,-1,0),
/// R = (1,0,0,1), L = (1,0,0,-1).
StokesVector canonical_stokes(PolarizationState s);

/// S0 = H + V, S1 = H - V, S2 = D - A, S3 = R - L. Note the R-before-L order.
StokesVector stokes_from_intensities(double i_h, double i_v, double i_d, double i_a, double i_r,
                                     double i_l);

StokesVector stokes_from_jones(const Eigen::Vector2cd& field);

/// 4x4 Mueller matrix of a 2x2 Jones matrix, M = A (J kron J*) A^-1.
Eigen::Matrix4d jones_to_mueller(const Eigen::Matrix2cd& jones);

/**
 * Amplitude transfer of the whole chip on the 2N modes (port, {H, V}); mode
 * 2k is H in guide k and 2k+1 is V. Column index is the input mode.
 */
struct JonesTransfer {
    Eigen::MatrixXcd t;

    std::size_t ports() const { return static_cast<std::size_t>(t.rows() / 2); }
    /// 2x2 Jones block from input guide `in` to output guide `out`.
    Eigen::Matrix2cd block(std::size_t out, std::size_t in) const;
    double max_singular_value() const;
};

enum class LossPlacement { input, output };

/**
 * Vectorial chip parameters. The H and V fields walk under separate coupling
 * models; birefringence splits the per-guide propagation constant by +-dbeta/2;
 * `rotation_rad` is the H<->V mixing angle each guide accumulates over z in
 * the absence of birefringence; losses are amplitude attenuations in (0, 1].
 */
struct PolarizedChipParams {
    CouplingModel model_h;
    CouplingModel model_v;
    Eigen::VectorXd birefringence_per_mm;
    Eigen::VectorXd rotation_rad;
    Eigen::VectorXd loss_h;
    Eigen::VectorXd loss_v;
    double z_mm = 0.0;
    std::optional<double> neighbor_cutoff_um;
    /// Input attenuation models polarization-dependent launch efficiency.
    LossPlacement loss_placement = LossPlacement::input;

    /// Lossless, rotation-free, birefringence-free parameters for N guides.
    static PolarizedChipParams scalar(std::size_t n, const CouplingModel& model, double z_mm);
};

JonesTransfer build_polarized_chip(const WaveguideLayout& layout, const PolarizedChipParams& p);

/// Jones transfer of a polarization-independent chip, U kron identity_2.
JonesTransfer scalar_chip(const Eigen::MatrixXcd& u);

/**
 * Intensities indexed by (input port, input state, output port, analyzer),
 * states and analyzers in kTomographyStates order.
 */
class TomographyRecord {
public:
    explicit TomographyRecord(std::size_t ports);

    std::size_t ports() const { return ports_; }
    std::size_t entries() const { return values_.size(); }

    double& at(std::size_t in_port, PolarizationState in_state, std::size_t out_port,
               PolarizationState analyzer);
    double at(std::size_t in_port, PolarizationState in_state, std::size_t out_port,
              PolarizationState analyzer) const;

    const std::vector<double>& values() const { return values_; }

private:
    std::size_t index(std::size_t in_port, PolarizationState in_state, std::size_t out_port,
                      PolarizationState analyzer) const;

    std::size_t ports_;
    std::vector<double> values_;
};

/**
 * Coherent-light tomography of the chip: every input guide is driven with
 * each of the six states and every output guide is projected onto each of
 * the six analyzer states. A positive `noise` multiplies each intensity by
 * (1 + noise * N(0, 1)), clamped at zero.
 */
TomographyRecord simulate_tomography(const JonesTransfer& chip, double noise = 0.0,
                                     std::uint64_t seed = 0);

struct MuellerArray {
    std::size_t ports = 0;
    std::vector<Eigen::Matrix4d> matrices;  // row-major over (out, in)
    std::vector<double> residuals;          // least-squares residual norm per matrix

    Eigen::Matrix4d& at(std::size_t out, std::size_t in) { return matrices[out * ports + in]; }
    const Eigen::Matrix4d& at(std::size_t out, std::size_t in) const {
        return matrices[out * ports + in];
    }
};

/// Mueller array of a known Jones transfer (the forward model).
MuellerArray mueller_from_jones(const JonesTransfer& chip);

/**
 * Least-squares Mueller reconstruction for every port pair from the output
 * Stokes vectors measured for a set of input states (the canonical six by
 * default). Throws ReconstructionFailed when the inputs do not span the
 * four-dimensional Stokes space.
 */
MuellerArray reconstruct_mueller(const TomographyRecord& record);
MuellerArray reconstruct_mueller(const TomographyRecord& record,
                                 const std::array<StokesVector, 6>& input_states);

/**
 * Image of the unit Poincare sphere under a Mueller matrix, in unnormalized
 * output Stokes coordinates (so lengths scale with transmitted power).
 */
struct PoincareEllipsoid {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    Eigen::Vector3d semi_axes = Eigen::Vector3d::Zero();  // descending
    Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();  // columns are the axes
    Eigen::Vector3d marker_h = Eigen::Vector3d::Zero();
    Eigen::Vector3d marker_d = Eigen::Vector3d::Zero();
    Eigen::Vector3d marker_r = Eigen::Vector3d::Zero();
    double average_power = 0.0;  // mean output S0 over the six canonical inputs
    bool degenerate = false;     // at least one semi-axis vanishes
    bool point = false;          // no transmission at all
};

PoincareEllipsoid poincare_ellipsoid(const Eigen::Matrix4d& m);

/// Transmitted power projected onto `state` at output i for `state` launched
/// into input j, for every (i, j).
Eigen::MatrixXd extract_subspace(const MuellerArray& array, PolarizationState state);

/// |U(i, j)|^2 in the |H> subspace: (S0 + S1) / 2 of M(i, j) applied to |H>.
Eigen::MatrixXd extract_h_subspace(const MuellerArray& array);

/// Share of the total output power found in each output guide for `state`
/// launched into `input`.
Eigen::VectorXd output_fractions(const MuellerArray& array, std::size_t input,
                                 PolarizationState state);

/// Per input guide: 1 - P_V / P_H, with P the total output power.
std::vector<double> pdl_report(const TomographyRecord& record);

} // namespace photonwalk

#endif
