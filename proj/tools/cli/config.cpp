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

#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string_view>

namespace photonwalk::cli {

namespace {

using nlohmann::json;

std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config key '" + path + "': " + what);
}

// Rejecting unknown keys catches typos that would otherwise silently fall
// back to defaults.
void allow_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
    if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [k, _] : obj.items())
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(join(path, k), "unknown key");
}

const json& require(const json& obj, std::string_view key, const std::string& path) {
    auto it = obj.find(std::string(key));
    if (it == obj.end()) fail(join(path, key), "missing required key");
    return *it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
}

double number(const json& obj, std::string_view key, const std::string& path) {
    return as_number(require(obj, key, path), join(path, key));
}

double number_or(const json& obj, std::string_view key, const std::string& path, double fallback) {
    return obj.contains(std::string(key)) ? number(obj, key, path) : fallback;
}

std::uint64_t as_count(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) fail(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::size_t count(const json& obj, std::string_view key, const std::string& path) {
    return static_cast<std::size_t>(as_count(require(obj, key, path), join(path, key)));
}

std::string string(const json& obj, std::string_view key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_string()) fail(join(path, key), "expected a string");
    return v.get<std::string>();
}

std::size_t port(const json& v, const std::string& path, std::size_t n) {
    const auto p = as_count(v, path);
    if (p < 1 || p > n)
        fail(path, "port " + std::to_string(p) + " outside [1, " + std::to_string(n) + "]");
    return static_cast<std::size_t>(p - 1);
}

// Scalar broadcast to every guide, or an explicit per-guide array.
Eigen::VectorXd per_guide(const json& obj, std::string_view key, const std::string& path, std::size_t n,
                          double fallback) {
    const auto nn = static_cast<Eigen::Index>(n);
    if (!obj.contains(std::string(key))) return Eigen::VectorXd::Constant(nn, fallback);
    const json& v = obj.at(std::string(key));
    const std::string p = join(path, key);
    if (v.is_number()) return Eigen::VectorXd::Constant(nn, as_number(v, p));
    if (!v.is_array() || v.size() != n)
        fail(p, "expected a number or an array of " + std::to_string(n) + " numbers");
    Eigen::VectorXd out(nn);
    for (std::size_t k = 0; k < n; ++k)
        out(static_cast<Eigen::Index>(k)) = as_number(v[k], p + "[" + std::to_string(k) + "]");
    return out;
}

CouplingModel parse_model(const json& node, const std::string& path) {
    allow_keys(node, path, {"c0_per_mm", "kappa_per_um", "r0_um", "beta_per_mm"});
    CouplingModel m;
    m.c0_per_mm = number_or(node, "c0_per_mm", path, m.c0_per_mm);
    m.kappa_per_um = number_or(node, "kappa_per_um", path, m.kappa_per_um);
    m.r0_um = number_or(node, "r0_um", path, m.r0_um);
    m.beta_per_mm = number_or(node, "beta_per_mm", path, m.beta_per_mm);
    try {
        m.validate();
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    return m;
}

std::optional<double> cutoff(const json& node, const std::string& path) {
    if (!node.contains("neighbor_cutoff_um")) return std::nullopt;
    const double c = number(node, "neighbor_cutoff_um", path);
    if (!(c > 0.0)) fail(join(path, "neighbor_cutoff_um"), "must be positive");
    return c;
}

std::vector<double> parse_delays(const json& node, const std::string& path) {
    const json& d = require(node, "delays_fs", path);
    const std::string p = join(path, "delays_fs");
    std::vector<double> out;
    if (d.is_array()) {
        for (std::size_t k = 0; k < d.size(); ++k) out.push_back(as_number(d[k], p + "[" + std::to_string(k) + "]"));
    } else if (d.is_object()) {
        allow_keys(d, p, {"start", "stop", "count"});
        const double start = number(d, "start", p);
        const double stop = number(d, "stop", p);
        const std::size_t n = count(d, "count", p);
        if (n == 1) {
            out.push_back(start);
        } else {
            for (std::size_t k = 0; k < n; ++k)
                out.push_back(start + (stop - start) * static_cast<double>(k) / static_cast<double>(n - 1));
        }
    } else {
        fail(p, "expected an array of delays or {start, stop, count}");
    }
    if (out.empty()) fail(p, "delay list is empty");
    return out;
}

PolarizedChipParams parse_polarization(const json& node, const std::string& path, std::size_t n,
                                       const CouplingModel& scalar, double z_mm) {
    allow_keys(node, path,
               {"coupling_h", "coupling_v", "birefringence_per_mm", "rotation_rad", "loss_h", "loss_v",
                "loss_placement", "neighbor_cutoff_um"});
    PolarizedChipParams p = PolarizedChipParams::scalar(n, scalar, z_mm);
    if (node.contains("coupling_h")) p.model_h = parse_model(node.at("coupling_h"), join(path, "coupling_h"));
    if (node.contains("coupling_v")) p.model_v = parse_model(node.at("coupling_v"), join(path, "coupling_v"));
    p.birefringence_per_mm = per_guide(node, "birefringence_per_mm", path, n, 0.0);
    p.rotation_rad = per_guide(node, "rotation_rad", path, n, 0.0);
    p.loss_h = per_guide(node, "loss_h", path, n, 1.0);
    p.loss_v = per_guide(node, "loss_v", path, n, 1.0);
    for (const auto& [key, v] : {std::pair{"loss_h", &p.loss_h}, std::pair{"loss_v", &p.loss_v}})
        for (Eigen::Index k = 0; k < v->size(); ++k)
            if (!((*v)(k) > 0.0 && (*v)(k) <= 1.0))
                fail(join(path, key), "amplitude transmission must lie in (0, 1]");
    if (node.contains("loss_placement")) {
        const std::string s = string(node, "loss_placement", path);
        if (s == "input")
            p.loss_placement = LossPlacement::input;
        else if (s == "output")
            p.loss_placement = LossPlacement::output;
        else
            fail(join(path, "loss_placement"), "expected 'input' or 'output'");
    }
    p.neighbor_cutoff_um = cutoff(node, path);
    return p;
}

void apply_overrides(json& doc, const Overrides& o) {
    if (!doc.is_object()) return;
    if (o.seed) doc["seed"] = *o.seed;
    if (o.steps) doc["propagate"]["steps"] = *o.steps;
    if (o.noise) doc["tomography"]["noise"] = *o.noise;
}

} // namespace

CouplingOptions RunConfig::coupling_options() const {
    CouplingOptions o;
    o.neighbor_cutoff_um = neighbor_cutoff_um;
    o.beta_per_mm = beta_per_mm;
    return o;
}

WaveguideLayout parse_layout(const json& node, const std::string& path) {
    if (!node.is_object()) fail(path, "expected an object");
    const std::string kind = string(node, "kind", path);
    WaveguideLayout layout;
    if (kind == "linear") {
        allow_keys(node, path, {"kind", "guides", "pitch_um", "index_permutation"});
        const std::size_t n = count(node, "guides", path);
        if (n == 0) fail(join(path, "guides"), "must be >= 1");
        const double pitch = number(node, "pitch_um", path);
        if (!(pitch > 0.0)) fail(join(path, "pitch_um"), "must be positive");
        layout = linear_layout(n, pitch);
    } else if (kind == "ellipse") {
        allow_keys(node, path, {"kind", "guides", "a_um", "b_um", "angle_offset_rad", "index_permutation"});
        const std::size_t n = count(node, "guides", path);
        if (n == 0) fail(join(path, "guides"), "must be >= 1");
        const double a = number(node, "a_um", path);
        const double b = number(node, "b_um", path);
        if (!(a > 0.0)) fail(join(path, "a_um"), "must be positive");
        if (!(b > 0.0)) fail(join(path, "b_um"), "must be positive");
        layout = elliptical_layout(n, a, b, number_or(node, "angle_offset_rad", path, 0.0));
    } else if (kind == "fanin") {
        allow_keys(node, path, {"kind", "input", "intermediate", "final", "stage1_mm", "stage2_mm"});
        const auto in = parse_layout(require(node, "input", path), join(path, "input"));
        const auto mid = parse_layout(require(node, "intermediate", path), join(path, "intermediate"));
        const auto fin = parse_layout(require(node, "final", path), join(path, "final"));
        if (in.size() != mid.size() || in.size() != fin.size())
            fail(path, "input, intermediate and final must have the same number of guides");
        const double s1 = number(node, "stage1_mm", path);
        const double s2 = number(node, "stage2_mm", path);
        if (!(s1 > 0.0)) fail(join(path, "stage1_mm"), "must be positive");
        if (!(s2 > 0.0)) fail(join(path, "stage2_mm"), "must be positive");
        layout = fan_in_layout(in, mid, fin, s1, s2);
    } else {
        fail(join(path, "kind"), "expected 'linear', 'ellipse' or 'fanin', got '" + kind + "'");
    }

    // Labels used in the config and in every output follow this order:
    // guide k (1-based) sits at geometric slot index_permutation[k-1].
    if (node.contains("index_permutation")) {
        const json& perm = node.at("index_permutation");
        const std::string p = join(path, "index_permutation");
        if (!perm.is_array() || perm.size() != layout.size())
            fail(p, "expected an array of " + std::to_string(layout.size()) + " slots");
        std::vector<std::size_t> order;
        std::set<std::size_t> seen;
        for (std::size_t k = 0; k < perm.size(); ++k) {
            const std::size_t slot = port(perm[k], p + "[" + std::to_string(k) + "]", layout.size());
            if (!seen.insert(slot).second) fail(p, "slot " + std::to_string(slot + 1) + " repeated");
            order.push_back(slot);
        }
        layout = permute(layout, order);
    }

    try {
        layout.validate();
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    return layout;
}

RunConfig parse_config(const json& input, const Overrides& overrides) {
    RunConfig cfg;
    cfg.source = input;
    apply_overrides(cfg.source, overrides);
    const json& doc = cfg.source;
    allow_keys(doc, "",
               {"description", "layout", "coupling", "z_mm", "inputs", "seed", "propagate", "hom",
                "polarization", "tomography"});

    cfg.layout = parse_layout(require(doc, "layout", ""), "layout");
    const std::size_t n = cfg.guides();

    const json empty = json::object();
    const json& coupling = doc.contains("coupling") ? doc.at("coupling") : empty;
    allow_keys(coupling, "coupling",
               {"c0_per_mm", "kappa_per_um", "r0_um", "beta_per_mm", "neighbor_cutoff_um", "guide_beta_per_mm"});
    json model = coupling;
    model.erase("neighbor_cutoff_um");
    model.erase("guide_beta_per_mm");
    cfg.coupling = parse_model(model, "coupling");
    cfg.neighbor_cutoff_um = cutoff(coupling, "coupling");
    if (coupling.contains("guide_beta_per_mm"))
        cfg.beta_per_mm = per_guide(coupling, "guide_beta_per_mm", "coupling", n, 0.0);

    cfg.z_mm = number(doc, "z_mm", "");
    if (!(cfg.z_mm >= 0.0)) fail("z_mm", "must be >= 0");
    if (cfg.layout.z_profile && cfg.z_mm < cfg.layout.z_profile->total_length())
        fail("z_mm", "shorter than the fan-in (" + std::to_string(cfg.layout.z_profile->total_length()) + " mm)");

    if (doc.contains("inputs")) {
        const json& in = doc.at("inputs");
        if (!in.is_array() || in.empty()) fail("inputs", "expected a non-empty array of ports");
        for (std::size_t k = 0; k < in.size(); ++k)
            cfg.inputs.push_back(port(in[k], "inputs[" + std::to_string(k) + "]", n));
    }

    if (doc.contains("seed")) cfg.seed = as_count(doc.at("seed"), "seed");

    if (doc.contains("propagate")) {
        const json& node = doc.at("propagate");
        allow_keys(node, "propagate", {"input", "trace_points", "steps"});
        PropagateConfig p;
        if (node.contains("input")) p.input = port(node.at("input"), "propagate.input", n);
        else if (!cfg.inputs.empty()) p.input = cfg.inputs.front();
        if (node.contains("trace_points")) p.trace_points = count(node, "trace_points", "propagate");
        if (p.trace_points < 2) fail("propagate.trace_points", "must be >= 2");
        if (node.contains("steps")) p.steps = count(node, "steps", "propagate");
        if (p.steps < 1) fail("propagate.steps", "must be >= 1");
        cfg.propagate = p;
    }

    if (doc.contains("hom")) {
        const json& node = doc.at("hom");
        allow_keys(node, "hom", {"delays_fs", "coherence_sigma_fs", "visibility_mode"});
        HomConfig h;
        h.delays_fs = parse_delays(node, "hom");
        h.coherence_sigma_fs = number_or(node, "coherence_sigma_fs", "hom", h.coherence_sigma_fs);
        if (!(h.coherence_sigma_fs > 0.0)) fail("hom.coherence_sigma_fs", "must be positive");
        if (node.contains("visibility_mode")) {
            const std::string m = string(node, "visibility_mode", "hom");
            if (m == "raw")
                h.mode = VisibilityMode::raw;
            else if (m == "gaussian_fit")
                h.mode = VisibilityMode::gaussian_fit;
            else
                fail("hom.visibility_mode", "expected 'raw' or 'gaussian_fit'");
        }
        cfg.hom = h;
    }

    if (doc.contains("polarization"))
        cfg.polarization = parse_polarization(doc.at("polarization"), "polarization", n, cfg.coupling, cfg.z_mm);

    if (doc.contains("tomography")) {
        const json& node = doc.at("tomography");
        allow_keys(node, "tomography", {"noise"});
        cfg.tomography.noise = number_or(node, "noise", "tomography", 0.0);
        if (!(cfg.tomography.noise >= 0.0)) fail("tomography.noise", "must be >= 0");
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc, overrides);
}

} // namespace photonwalk::cli
