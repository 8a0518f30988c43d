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

#ifndef PHOTONWALK_GEOMETRY_HPP
#define PHOTONWALK_GEOMETRY_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace photonwalk {

/// Units: transverse coordinates in micrometers, propagation distance in
/// millimeters. Nothing in the library converts between the two.
inline constexpr double kMicrometersPerMillimeter = 1000.0;

/// Transverse position of a waveguide core, in micrometers.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

double distance(const Point2& a, const Point2& b);

/**
 * S-bend trajectory between two transverse points over a propagation length L.
 *
 * Each coordinate follows x(z) = x0 + dx * (z/L - sin(2 pi z / L) / (2 pi)),
 * so the path starts and ends with zero slope.
 */
class RaisedSinePath {
public:
    RaisedSinePath(Point2 start, Point2 end, double length_mm);

    /// Position at distance z (mm) from the start of the bend; z in [0, L].
    Point2 operator()(double z_mm) const;

    const Point2& start() const { return start_; }
    const Point2& end() const { return end_; }
    double length() const { return length_; }

private:
    Point2 start_;
    Point2 end_;
    double length_;
};

RaisedSinePath raised_sine_path(Point2 start, Point2 end, double length_mm);

/// One stage of a fan-in: every core bends from `from[k]` to `to[k]`.
struct FanInStage {
    std::vector<Point2> from;
    std::vector<Point2> to;
    double length_mm = 0.0;
};

/**
 * Cross-section as a function of propagation distance, built from consecutive
 * raised-sine stages. The domain is [0, total_length()].
 */
class ZProfile {
public:
    explicit ZProfile(std::vector<FanInStage> stages);

    std::size_t size() const { return stages_.front().from.size(); }
    double total_length() const { return total_length_; }
    const std::vector<FanInStage>& stages() const { return stages_; }

    bool covers(double z_mm) const;

    /// Positions at z; throws OutOfRange outside [0, total_length()].
    std::vector<Point2> at(double z_mm) const;

    /// Largest displacement of any core between consecutive samples spaced
    /// by dz over the whole domain.
    double max_step_displacement(double dz_mm) const;

private:
    std::vector<FanInStage> stages_;
    double total_length_ = 0.0;
};

/**
 * Positions of N waveguide cores. `positions` is the cross-section of the
 * interaction region; a fan-in layout additionally carries the z-dependent
 * approach to it.
 */
struct WaveguideLayout {
    std::vector<Point2> positions;
    std::optional<ZProfile> z_profile;

    std::size_t size() const { return positions.size(); }

    /// Checks N >= 1, finite coordinates, and profile size consistency.
    /// When `max_step_um` is given the profile must also move by less than
    /// that bound between samples spaced `sample_dz_mm` apart.
    void validate(std::optional<double> max_step_um = std::nullopt,
                  double sample_dz_mm = 1e-3) const;

    /// Cross-section at z, or `positions` when z is empty.
    std::vector<Point2> cross_section(std::optional<double> z_mm) const;
};

/// N x N symmetric matrix of core separations (micrometers).
struct DistanceMatrix {
    Eigen::MatrixXd values;

    std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
    double operator()(std::size_t i, std::size_t j) const {
        return values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
};

WaveguideLayout linear_layout(std::size_t n, double pitch_um);

/// Cores at equal angular spacing on an ellipse, core k at angle
/// angle_offset + 2 pi k / n measured counterclockwise from +x.
WaveguideLayout elliptical_layout(std::size_t n, double a_um, double b_um,
                                  double angle_offset_rad = 0.0);

/// Reorders cores so that core k of the result is core `order[k]` of the
/// input. `order` must be a permutation of 0..N-1.
WaveguideLayout permute(const WaveguideLayout& layout, std::span<const std::size_t> order);

/**
 * Two-stage fan-in: raised-sine bends from `input` to `intermediate` over
 * stage1, then to `final_layout` over stage2. The result's positions are the
 * final cross-section and its profile covers [0, stage1 + stage2].
 */
WaveguideLayout fan_in_layout(const WaveguideLayout& input,
                              const WaveguideLayout& intermediate,
                              const WaveguideLayout& final_layout,
                              double stage1_length_mm, double stage2_length_mm);

DistanceMatrix pairwise_distances(std::span<const Point2> points);
DistanceMatrix pairwise_distances(const WaveguideLayout& layout,
                                  std::optional<double> z_mm = std::nullopt);

} // namespace photonwalk

#endif
