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

#include "photonwalk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "photonwalk/error.hpp"

namespace photonwalk {

namespace {

bool finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Fraction of the chord covered at normalized position t in [0, 1].
double raised_sine_fraction(double t) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return t - std::sin(two_pi * t) / two_pi;
}

// Components this close to zero are round-off from sin/cos at the axis
// crossings; zeroing them keeps mirror-symmetric layouts exactly symmetric.
double snap(double v, double scale) {
    return std::abs(v) <= 8.0 * std::numeric_limits<double>::epsilon() * scale ? 0.0 : v;
}

} // namespace

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

RaisedSinePath::RaisedSinePath(Point2 start, Point2 end, double length_mm)
    : start_(start), end_(end), length_(length_mm) {
    if (!(length_mm > 0.0) || !std::isfinite(length_mm))
        throw InvalidArgument("raised_sine_path: length must be positive, got " +
                              std::to_string(length_mm));
    if (!finite(start) || !finite(end))
        throw InvalidArgument("raised_sine_path: endpoints must be finite");
}

Point2 RaisedSinePath::operator()(double z_mm) const {
    if (!(z_mm >= 0.0 && z_mm <= length_))
        throw OutOfRange("raised_sine_path: z = " + std::to_string(z_mm) +
                         " outside [0, " + std::to_string(length_) + "]");
    // Endpoints are returned verbatim; sin(2 pi) is not exactly zero.
    if (z_mm == 0.0) return start_;
    if (z_mm == length_) return end_;
    const double f = raised_sine_fraction(z_mm / length_);
    return {start_.x + (end_.x - start_.x) * f, start_.y + (end_.y - start_.y) * f};
}

RaisedSinePath raised_sine_path(Point2 start, Point2 end, double length_mm) {
    return RaisedSinePath(start, end, length_mm);
}

ZProfile::ZProfile(std::vector<FanInStage> stages) : stages_(std::move(stages)) {
    if (stages_.empty()) throw InvalidArgument("ZProfile: at least one stage required");
    const std::size_t n = stages_.front().from.size();
    if (n == 0) throw InvalidArgument("ZProfile: stages must contain at least one core");
    for (std::size_t s = 0; s < stages_.size(); ++s) {
        const auto& st = stages_[s];
        if (st.from.size() != n || st.to.size() != n)
            throw InvalidArgument("ZProfile: stage " + std::to_string(s) +
                                  " has mismatched core count");
        if (!(st.length_mm > 0.0))
            throw InvalidArgument("ZProfile: stage lengths must be positive");
        if (s > 0 && stages_[s - 1].to != st.from)
            throw InvalidArgument("ZProfile: stage " + std::to_string(s) +
                                  " does not start where the previous one ends");
        total_length_ += st.length_mm;
    }
}

bool ZProfile::covers(double z_mm) const { return z_mm >= 0.0 && z_mm <= total_length_; }

std::vector<Point2> ZProfile::at(double z_mm) const {
    if (!covers(z_mm))
        throw OutOfRange("z = " + std::to_string(z_mm) + " mm outside profile domain [0, " +
                         std::to_string(total_length_) + "]");
    double stage_start = 0.0;
    for (std::size_t s = 0; s < stages_.size(); ++s) {
        const auto& st = stages_[s];
        const bool last = s + 1 == stages_.size();
        if (z_mm <= stage_start + st.length_mm || last) {
            const double local = std::clamp(z_mm - stage_start, 0.0, st.length_mm);
            std::vector<Point2> out;
            out.reserve(st.from.size());
            for (std::size_t k = 0; k < st.from.size(); ++k)
                out.push_back(RaisedSinePath(st.from[k], st.to[k], st.length_mm)(local));
            return out;
        }
        stage_start += st.length_mm;
    }
    return stages_.back().to;
}

double ZProfile::max_step_displacement(double dz_mm) const {
    if (!(dz_mm > 0.0)) throw InvalidArgument("max_step_displacement: dz must be positive");
    const auto steps = static_cast<std::size_t>(std::ceil(total_length_ / dz_mm));
    double worst = 0.0;
    auto prev = at(0.0);
    for (std::size_t s = 1; s <= steps; ++s) {
        const double z = std::min(total_length_, static_cast<double>(s) * dz_mm);
        auto cur = at(z);
        for (std::size_t k = 0; k < cur.size(); ++k)
            worst = std::max(worst, distance(prev[k], cur[k]));
        prev = std::move(cur);
    }
    return worst;
}

void WaveguideLayout::validate(std::optional<double> max_step_um, double sample_dz_mm) const {
    if (positions.empty()) throw InvalidArgument("layout: at least one waveguide required");
    for (std::size_t k = 0; k < positions.size(); ++k)
        if (!finite(positions[k]))
            throw InvalidArgument("layout: position " + std::to_string(k) + " is not finite");
    if (!z_profile) return;
    if (z_profile->size() != positions.size())
        throw InvalidArgument("layout: z profile core count differs from positions");
    if (max_step_um && z_profile->max_step_displacement(sample_dz_mm) >= *max_step_um)
        throw InvalidArgument("layout: z profile is discontinuous at the requested step bound");
}

std::vector<Point2> WaveguideLayout::cross_section(std::optional<double> z_mm) const {
    if (!z_mm) return positions;
    if (!z_profile) throw OutOfRange("layout has no z profile; cannot evaluate at z");
    return z_profile->at(*z_mm);
}

WaveguideLayout linear_layout(std::size_t n, double pitch_um) {
    if (n == 0) throw InvalidArgument("linear_layout: count must be at least 1");
    if (!(pitch_um > 0.0) || !std::isfinite(pitch_um))
        throw InvalidArgument("linear_layout: pitch must be positive");
    WaveguideLayout layout;
    layout.positions.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        layout.positions.push_back({static_cast<double>(k) * pitch_um, 0.0});
    return layout;
}

WaveguideLayout elliptical_layout(std::size_t n, double a_um, double b_um,
                                  double angle_offset_rad) {
    if (n == 0) throw InvalidArgument("elliptical_layout: count must be at least 1");
    if (!(a_um > 0.0) || !(b_um > 0.0) || !std::isfinite(a_um) || !std::isfinite(b_um))
        throw InvalidArgument("elliptical_layout: radii must be positive");
    if (!std::isfinite(angle_offset_rad))
        throw InvalidArgument("elliptical_layout: angle offset must be finite");
    WaveguideLayout layout;
    layout.positions.reserve(n);
    const auto nn = static_cast<long long>(n);
    for (long long k = 0; k < nn; ++k) {
        // Use the signed index in (-n/2, n/2] so that mirror partners k and
        // n - k see exactly negated angles.
        const long long signed_k = 2 * k > nn ? k - nn : k;
        const double theta = angle_offset_rad + 2.0 * std::numbers::pi *
                                                    static_cast<double>(signed_k) /
                                                    static_cast<double>(n);
        layout.positions.push_back(
            {snap(a_um * std::cos(theta), a_um), snap(b_um * std::sin(theta), b_um)});
    }
    return layout;
}

WaveguideLayout permute(const WaveguideLayout& layout, std::span<const std::size_t> order) {
    const std::size_t n = layout.size();
    if (order.size() != n) throw InvalidArgument("permute: order length differs from core count");
    std::vector<bool> seen(n, false);
    for (std::size_t k : order) {
        if (k >= n || seen[k]) throw InvalidArgument("permute: order is not a permutation");
        seen[k] = true;
    }
    auto reorder = [&](const std::vector<Point2>& pts) {
        std::vector<Point2> out(n);
        for (std::size_t k = 0; k < n; ++k) out[k] = pts[order[k]];
        return out;
    };
    WaveguideLayout out;
    out.positions = reorder(layout.positions);
    if (layout.z_profile) {
        std::vector<FanInStage> stages;
        for (const auto& st : layout.z_profile->stages())
            stages.push_back({reorder(st.from), reorder(st.to), st.length_mm});
        out.z_profile.emplace(std::move(stages));
    }
    return out;
}

WaveguideLayout fan_in_layout(const WaveguideLayout& input, const WaveguideLayout& intermediate,
                              const WaveguideLayout& final_layout, double stage1_length_mm,
                              double stage2_length_mm) {
    if (input.size() != intermediate.size() || input.size() != final_layout.size())
        throw InvalidArgument("fan_in_layout: layouts have different core counts (" +
                              std::to_string(input.size()) + ", " +
                              std::to_string(intermediate.size()) + ", " +
                              std::to_string(final_layout.size()) + ")");
    if (!(stage1_length_mm > 0.0) || !(stage2_length_mm > 0.0))
        throw InvalidArgument("fan_in_layout: stage lengths must be positive");
    input.validate();
    intermediate.validate();
    final_layout.validate();
    WaveguideLayout out;
    out.positions = final_layout.positions;
    out.z_profile.emplace(std::vector<FanInStage>{
        {input.positions, intermediate.positions, stage1_length_mm},
        {intermediate.positions, final_layout.positions, stage2_length_mm}});
    return out;
}

DistanceMatrix pairwise_distances(std::span<const Point2> points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    DistanceMatrix d{Eigen::MatrixXd::Zero(n, n)};
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double r = distance(points[static_cast<std::size_t>(i)],
                                      points[static_cast<std::size_t>(j)]);
            d.values(i, j) = r;
            d.values(j, i) = r;
        }
    return d;
}

DistanceMatrix pairwise_distances(const WaveguideLayout& layout, std::optional<double> z_mm) {
    layout.validate();
    const auto pts = layout.cross_section(z_mm);
    return pairwise_distances(std::span<const Point2>(pts));
}

} // namespace photonwalk
