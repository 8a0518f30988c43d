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

#include <vector>

#include <benchmark/benchmark.h>

#include "photonwalk/photonwalk.hpp"

using namespace photonwalk;

namespace {

CouplingMatrix ellipse_coupling(std::size_t n) {
    return build_coupling_matrix(elliptical_layout(n, 10.2 * static_cast<double>(n) / 6.0, 7.0 * static_cast<double>(n) / 6.0),
                                 CouplingModel{});
}

void BM_Unitary(benchmark::State& state) {
    const auto c = ellipse_coupling(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(unitary(c, 5.0));
}
BENCHMARK(BM_Unitary)->Arg(6)->Arg(12)->Arg(24)->Arg(48);

void BM_IntensityTrace200(benchmark::State& state) {
    const auto c = ellipse_coupling(6);
    std::vector<double> grid(200);
    for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = 0.05 * static_cast<double>(k);
    for (auto _ : state) benchmark::DoNotOptimize(intensity_trace(c, 0, grid));
}
BENCHMARK(BM_IntensityTrace200);

void BM_ZDependentFanIn(benchmark::State& state) {
    const auto layout = fan_in_layout(linear_layout(6, 127.0), elliptical_layout(6, 20.4, 14.0),
                                      elliptical_layout(6, 10.2, 7.0), 8.5, 1.0);
    const auto steps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(propagate_z_dependent(layout, CouplingModel{}, 0.0, 9.5, steps));
}
BENCHMARK(BM_ZDependentFanIn)->Arg(64)->Arg(512);

void BM_GammaIndistinguishable(benchmark::State& state) {
    const auto u = unitary(ellipse_coupling(static_cast<std::size_t>(state.range(0))), 5.0);
    for (auto _ : state) benchmark::DoNotOptimize(gamma_indistinguishable(u, 0, 1));
}
BENCHMARK(BM_GammaIndistinguishable)->Arg(6)->Arg(24);

void BM_FockOracle(benchmark::State& state) {
    const auto u = unitary(ellipse_coupling(static_cast<std::size_t>(state.range(0))), 5.0);
    for (auto _ : state) benchmark::DoNotOptimize(fock_oracle(u, 0, 1));
}
BENCHMARK(BM_FockOracle)->Arg(6)->Arg(24);

void BM_HomScan(benchmark::State& state) {
    const auto u = unitary(ellipse_coupling(6), 5.0);
    std::vector<double> delays(81);
    for (std::size_t k = 0; k < delays.size(); ++k) delays[k] = -400.0 + 10.0 * static_cast<double>(k);
    for (auto _ : state) benchmark::DoNotOptimize(hom_scan(u, 0, 1, delays, 90.0));
}
BENCHMARK(BM_HomScan);

void BM_TomographyRoundTrip(benchmark::State& state) {
    auto p = PolarizedChipParams::scalar(6, CouplingModel{}, 5.0);
    p.model_v.c0_per_mm = 0.6;
    p.birefringence_per_mm.setConstant(0.05);
    p.rotation_rad.setConstant(0.02);
    const auto chip = build_polarized_chip(elliptical_layout(6, 10.2, 7.0), p);
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct_mueller(simulate_tomography(chip, 0.01, 1)));
}
BENCHMARK(BM_TomographyRoundTrip);

} // namespace

BENCHMARK_MAIN();
