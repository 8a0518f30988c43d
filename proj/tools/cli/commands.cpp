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

#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli/emit.hpp"
#include "photonwalk/version.hpp"

namespace photonwalk::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNormTol = 1e-10;

struct Common {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> steps;
    std::optional<double> noise;

    Overrides overrides() const { return {seed, steps, noise}; }
    RunConfig load() const {
        if (config.empty()) throw ConfigError("--config is required for this command");
        return load_config(config, overrides());
    }
};

void add_common(CLI::App* cmd, Common& c, bool physics_flags = true) {
    cmd->add_option("--config", c.config, "JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "output directory")->capture_default_str();
    if (!physics_flags) return;
    cmd->add_option("--seed", c.seed, "random seed (overrides config 'seed')");
    cmd->add_option("--steps", c.steps, "z-ordered product slices (overrides 'propagate.steps')")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--noise", c.noise, "relative photometric noise (overrides 'tomography.noise')")
        ->check(CLI::NonNegativeNumber);
}

std::size_t steps_of(const RunConfig& cfg) { return cfg.propagate ? cfg.propagate->steps : PropagateConfig{}.steps; }

std::pair<std::size_t, std::size_t> photon_pair(const RunConfig& cfg, const char* command) {
    if (cfg.inputs.size() != 2)
        throw ConfigError(std::string("config key 'inputs': '") + command + "' needs exactly two input ports");
    return {cfg.inputs[0], cfg.inputs[1]};
}

void emit(std::ostream& out, const fs::path& dir, const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    out << "wrote " << (dir / name).string() << "\n";
}

void check_rows_normalized(const Eigen::MatrixXd& rows, const char* what) {
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        const double s = rows.row(r).sum();
        if (std::abs(s - 1.0) > kNormTol || rows.row(r).minCoeff() < -kNormTol)
            throw NumericalError(std::string(what) + ": row " + std::to_string(r) +
                                 " is not a probability distribution (sum " + format_double(s) + ")");
    }
}

// Propagator over [a, b] within the chip.
Eigen::MatrixXcd interval(const RunConfig& cfg, const CouplingMatrix& c_final, double a, double b,
                          std::size_t steps) {
    const auto n = static_cast<Eigen::Index>(cfg.guides());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
    double from = a;
    if (cfg.layout.z_profile) {
        const double fan = cfg.layout.z_profile->total_length();
        if (a < fan) {
            const double to = std::min(b, fan);
            const auto slices =
                std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(static_cast<double>(steps) * (to - a) / fan)));
            u = propagate_z_dependent(cfg.layout, cfg.coupling, a, to, slices, cfg.coupling_options()).u;
            from = to;
        }
    }
    if (b > from) u = unitary(c_final, b - from).u * u;
    return u;
}

json pair_json(std::size_t i, std::size_t j) { return json::array({i + 1, j + 1}); }

// ---------------------------------------------------------------------------

void cmd_layout(const Common& c, std::ostream& out) {
    const RunConfig cfg = c.load();
    const Provenance prov = provenance_of(cfg.source);
    const fs::path dir = c.out;

    json positions = json::array();
    for (const auto& p : cfg.layout.positions) positions.push_back({p.x, p.y});
    json doc = {{"provenance", prov.json()}, {"guides", cfg.guides()}, {"positions_um", positions}};
    if (cfg.layout.z_profile) {
        json stages = json::array();
        for (const auto& s : cfg.layout.z_profile->stages()) {
            json to = json::array();
            for (const auto& p : s.to) to.push_back({p.x, p.y});
            stages.push_back({{"length_mm", s.length_mm}, {"end_positions_um", to}});
        }
        doc["fanin"] = {{"total_length_mm", cfg.layout.z_profile->total_length()}, {"stages", stages}};
    }
    emit(out, dir, "layout.json", dump(doc));
    emit(out, dir, "distances.csv", matrix_csv(prov, pairwise_distances(cfg.layout).values));
}

void cmd_propagate(const Common& c, std::ostream& out) {
    const RunConfig cfg = c.load();
    const Provenance prov = provenance_of(cfg.source);
    const PropagateConfig pc = cfg.propagate.value_or(PropagateConfig{cfg.inputs.empty() ? 0 : cfg.inputs.front()});
    const auto n = static_cast<Eigen::Index>(cfg.guides());
    const CouplingMatrix c_final = build_coupling_matrix(cfg.layout, cfg.coupling, cfg.coupling_options());

    std::vector<double> grid(pc.trace_points);
    for (std::size_t k = 0; k < grid.size(); ++k)
        grid[k] = cfg.z_mm * static_cast<double>(k) / static_cast<double>(grid.size() - 1);
    grid.back() = cfg.z_mm;

    Eigen::MatrixXd trace;
    Eigen::MatrixXcd u;
    if (!cfg.layout.z_profile) {
        trace = intensity_trace(c_final, pc.input, grid);
        u = unitary(c_final, cfg.z_mm).u;
    } else {
        trace.resize(static_cast<Eigen::Index>(grid.size()), n);
        u = Eigen::MatrixXcd::Identity(n, n);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (k > 0) u = interval(cfg, c_final, grid[k - 1], grid[k], pc.steps) * u;
            trace.row(static_cast<Eigen::Index>(k)) =
                u.col(static_cast<Eigen::Index>(pc.input)).cwiseAbs2().transpose();
        }
    }
    check_rows_normalized(trace, "propagate trace");
    const Propagator prop{u, cfg.z_mm};
    if (prop.unitarity_deviation() > kDefaultTolerances.unitarity)
        throw NumericalError("propagate: propagator is not unitary (deviation " +
                             format_double(prop.unitarity_deviation()) + ")");

    std::string csv = prov.csv_header();
    csv += "z_mm";
    for (Eigen::Index k = 0; k < n; ++k) csv += ",p_" + std::to_string(k + 1);
    csv += '\n';
    for (std::size_t r = 0; r < grid.size(); ++r) {
        csv += format_double(grid[r]);
        for (Eigen::Index k = 0; k < n; ++k) {
            csv += ',';
            csv += format_double(trace(static_cast<Eigen::Index>(r), k));
        }
        csv += '\n';
    }
    const fs::path dir = c.out;
    emit(out, dir, "trace.csv", csv);
    emit(out, dir, "unitary.json",
         dump({{"provenance", prov.json()},
               {"length_mm", cfg.z_mm},
               {"input_port", pc.input + 1},
               {"layout", "U[output][input], row-major, entries [re, im]"},
               {"u", complex_matrix_json(u)}}));
}

void cmd_correlations(const Common& c, std::ostream& out) {
    const RunConfig cfg = c.load();
    const Provenance prov = provenance_of(cfg.source);
    const auto [i, j] = photon_pair(cfg, "correlations");
    const Propagator u = chip_propagator(cfg, steps_of(cfg));

    const auto gi = gamma_indistinguishable(u, i, j);
    const auto gd = gamma_distinguishable(u, i, j);
    const auto diff = quantum_difference(u, i, j);
    check_probability(gi, kNormTol);
    check_probability(gd, kNormTol);

    const fs::path dir = c.out;
    emit(out, dir, "gamma_indistinguishable.csv", matrix_csv(prov, gi.values));
    emit(out, dir, "gamma_distinguishable.csv", matrix_csv(prov, gd.values));
    emit(out, dir, "gamma_difference.csv", matrix_csv(prov, diff.values));
    emit(out, dir, "correlations.json",
         dump({{"provenance", prov.json()},
               {"inputs", pair_json(i, j)},
               {"length_mm", cfg.z_mm},
               {"indistinguishable", real_matrix_json(gi.values)},
               {"distinguishable", real_matrix_json(gd.values)},
               {"difference", real_matrix_json(diff.values)}}));
}

void cmd_hom(const Common& c, std::ostream& out) {
    const RunConfig cfg = c.load();
    if (!cfg.hom) throw ConfigError("config key 'hom': missing block required by 'hom'");
    const Provenance prov = provenance_of(cfg.source);
    const auto [i, j] = photon_pair(cfg, "hom");
    const Propagator u = chip_propagator(cfg, steps_of(cfg));
    const HomScan scan = hom_scan(u, i, j, cfg.hom->delays_fs, cfg.hom->coherence_sigma_fs);
    for (const auto& m : scan.coincidences) check_probability({m, CorrelationKind::imported}, kNormTol);

    const std::size_t n = cfg.guides();
    std::string csv = prov.csv_header();
    csv += "delay_fs";
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k; l < n; ++l) csv += ",c_" + std::to_string(k + 1) + "_" + std::to_string(l + 1);
    csv += '\n';
    for (std::size_t d = 0; d < scan.delays.size(); ++d) {
        csv += format_double(scan.delays[d]);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = k; l < n; ++l) {
                csv += ',';
                csv += format_double(scan.coincidences[d](static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)));
            }
        csv += '\n';
    }

    json pairs = json::array();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k; l < n; ++l) {
            json entry = {{"pair", pair_json(k, l)}};
            const auto counts = scan.coincidence(k, l);
            try {
                entry["visibility"] = visibility(counts);
            } catch (const UndefinedVisibility&) {
                entry["visibility"] = nullptr;
            }
            if (cfg.hom->mode == VisibilityMode::gaussian_fit) {
                try {
                    const auto fit = fit_gaussian_dip(scan.delays, counts);
                    entry["fit"] = {{"baseline", fit.baseline}, {"depth", fit.depth},
                                    {"width_fs", fit.width}, {"rms_residual", fit.rms_residual},
                                    {"iterations", fit.iterations}, {"converged", fit.converged}};
                } catch (const std::exception& e) {
                    entry["fit"] = {{"error", e.what()}};
                }
            }
            pairs.push_back(std::move(entry));
        }

    const fs::path dir = c.out;
    emit(out, dir, "hom_scan.csv", csv);
    emit(out, dir, "hom_summary.json",
         dump({{"provenance", prov.json()},
               {"inputs", pair_json(i, j)},
               {"coherence_sigma_fs", scan.coherence_sigma},
               {"visibility_mode", cfg.hom->mode == VisibilityMode::raw ? "raw" : "gaussian_fit"},
               {"pairs", pairs}}));
}

void cmd_tomography(const Common& c, const std::string& mode, const std::string& record_path,
                    std::ostream& out) {
    const fs::path dir = c.out;
    if (mode == "simulate") {
        const RunConfig cfg = c.load();
        if (!cfg.polarization) throw ConfigError("config key 'polarization': missing block required by 'tomography simulate'");
        const Provenance prov = provenance_of(cfg.source);
        const JonesTransfer chip = build_polarized_chip(cfg.layout, *cfg.polarization);
        const TomographyRecord record = simulate_tomography(chip, cfg.tomography.noise, cfg.seed);
        if (cfg.tomography.noise == 0.0) {
            // A passive chip never emits more than it receives.
            for (std::size_t in = 0; in < record.ports(); ++in)
                for (auto s : kTomographyStates) {
                    double total = 0.0;
                    for (std::size_t o = 0; o < record.ports(); ++o)
                        total += record.at(in, s, o, PolarizationState::H) + record.at(in, s, o, PolarizationState::V);
                    if (total > 1.0 + kNormTol)
                        throw NumericalError("tomography: input " + std::to_string(in + 1) + " " +
                                             std::string(to_string(s)) + " transmits " + format_double(total));
                }
        }
        emit(out, dir, "record.csv", record_csv(prov, record));
        json forward = mueller_json(mueller_from_jones(chip));
        forward["provenance"] = prov.json();
        emit(out, dir, "mueller_forward.json", dump(forward));
        return;
    }

    const fs::path path = record_path.empty() ? dir / "record.csv" : fs::path(record_path);
    const std::string bytes = read_file(path);
    const Provenance prov = provenance_of_bytes(bytes);
    const TomographyRecord record = parse_record_csv(bytes, path.string());

    if (mode == "reconstruct") {
        const MuellerArray array = reconstruct_mueller(record);
        json mueller = mueller_json(array);
        mueller["provenance"] = prov.json();
        json ellipsoids = json::array();
        for (std::size_t o = 0; o < array.ports; ++o) {
            json row = json::array();
            for (std::size_t i = 0; i < array.ports; ++i) row.push_back(ellipsoid_json(poincare_ellipsoid(array.at(o, i))));
            ellipsoids.push_back(std::move(row));
        }
        emit(out, dir, "mueller.json", dump(mueller));
        emit(out, dir, "ellipsoids.json",
             dump({{"provenance", prov.json()},
                   {"index_order", "[output_port][input_port]"},
                   {"ellipsoids", ellipsoids}}));
        emit(out, dir, "h_subspace.csv", matrix_csv(prov, extract_subspace(array, PolarizationState::H)));
        emit(out, dir, "v_subspace.csv", matrix_csv(prov, extract_subspace(array, PolarizationState::V)));
        return;
    }

    // report
    const auto pdl = pdl_report(record);
    for (std::size_t k = 0; k < pdl.size(); ++k)
        out << "input " << k + 1 << " pdl " << format_double(pdl[k]) << "\n";
    emit(out, dir, "pdl.json",
         dump({{"provenance", prov.json()},
               {"definition", "1 - P_out(V input) / P_out(H input), per input port"},
               {"pdl", pdl}}));
}

void cmd_fidelity(const Common& c, const std::string& a_path, const std::string& b_path, std::ostream& out) {
    const std::string a_bytes = read_file(a_path);
    const std::string b_bytes = read_file(b_path);
    const Eigen::MatrixXd a = parse_matrix_csv(a_bytes, a_path);
    const Eigen::MatrixXd b = parse_matrix_csv(b_bytes, b_path);
    const double s = similarity(a, b);
    out << "S = " << format_double(s) << "\n";
    const Provenance prov = provenance_of_bytes(a_bytes + '\0' + b_bytes);
    emit(out, c.out, "fidelity.json",
         dump({{"provenance", prov.json()}, {"a", fs::path(a_path).filename().string()},
               {"b", fs::path(b_path).filename().string()}, {"similarity", s}}));
}

} // namespace

Propagator chip_propagator(const RunConfig& cfg, std::size_t steps) {
    const CouplingMatrix c_final = build_coupling_matrix(cfg.layout, cfg.coupling, cfg.coupling_options());
    return {interval(cfg, c_final, 0.0, cfg.z_mm, steps), cfg.z_mm};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"photonwalk: quantum walks of one and two photons in coupled waveguide arrays", "photonwalk"};
    app.set_version_flag("--version", PHOTONWALK_VERSION);
    app.require_subcommand(1);

    Common common;
    std::string mode, record, file_a, file_b;

    auto* layout = app.add_subcommand("layout", "materialize the layout and its distance matrix");
    add_common(layout, common);
    auto* propagate = app.add_subcommand("propagate", "single-photon intensity trace and final U");
    add_common(propagate, common);
    auto* correlations = app.add_subcommand("correlations", "two-photon correlation matrices");
    add_common(correlations, common);
    auto* hom = app.add_subcommand("hom", "delay scan of coincidences");
    add_common(hom, common);
    auto* tomography = app.add_subcommand("tomography", "polarization tomography");
    tomography->add_option("mode", mode, "simulate | reconstruct | report")
        ->required()
        ->check(CLI::IsMember({"simulate", "reconstruct", "report"}));
    tomography->add_option("--record", record, "record CSV (default <out>/record.csv)");
    add_common(tomography, common);
    auto* fidelity = app.add_subcommand("fidelity", "similarity of two matrix CSVs");
    fidelity->add_option("a", file_a, "first matrix CSV")->required();
    fidelity->add_option("b", file_b, "second matrix CSV")->required();
    add_common(fidelity, common, false);

    std::vector<const char*> argv{"photonwalk"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::CallForVersion&) {
        out << PHOTONWALK_VERSION << "\n";
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "photonwalk: usage error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (layout->parsed()) cmd_layout(common, out);
        else if (propagate->parsed()) cmd_propagate(common, out);
        else if (correlations->parsed()) cmd_correlations(common, out);
        else if (hom->parsed()) cmd_hom(common, out);
        else if (tomography->parsed()) cmd_tomography(common, mode, record, out);
        else if (fidelity->parsed()) cmd_fidelity(common, file_a, file_b, out);
        return kSuccess;
    } catch (const ConfigError& e) {
        err << "photonwalk: config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const NumericalError& e) {
        err << "photonwalk: numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::invalid_argument& e) {
        err << "photonwalk: config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::out_of_range& e) {
        err << "photonwalk: config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "photonwalk: internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

} // namespace photonwalk::cli
