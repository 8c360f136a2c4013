// SPDX-License-Identifier: Apache-2.0
//
// scf3d: spatial correlation and mutual information of 3D MIMO channels
// Copyright (C) 2026 The scf3d authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "scf3d/channel.hpp"
#include "scf3d/infotheory.hpp"
#include "scf3d/rng.hpp"
#include "scf3d/scf.hpp"
#include "scf3d/spectra.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace scf3d;

namespace
{
    constexpr double pi = std::numbers::pi;
    double deg(double d) { return d * pi / 180.0; }

    AngularSpectrum azimuth() { return {AngularDensity::von_mises(2 * pi / 3, 5.0), AntennaPattern::unit()}; }

    AngularSpectrum elevation()
    {
        return {AngularDensity::laplacian_elevation(deg(90), deg(7)), AntennaPattern::vertical(deg(95), deg(15))};
    }

    ScfConfig config(int ports, int truncation) { return {0.5, ports, truncation, azimuth(), elevation(), 1.0}; }

    LinkEnd link_end(int ports)
    {
        return {AngularDensity::von_mises(2 * pi / 3, 5.0), AngularDensity::laplacian_elevation(deg(90), deg(7)),
                AntennaPattern::horizontal(deg(70)), AntennaPattern::vertical(deg(95), deg(15)), 0.5, ports};
    }
}

static void BM_FsCoefficientsElevation(benchmark::State &state)
{
    const auto s = elevation();
    for (auto _ : state)
        benchmark::DoNotOptimize(fs_coefficients(s, int(state.range(0))));
}
BENCHMARK(BM_FsCoefficientsElevation)->Arg(31)->Arg(281)->Unit(benchmark::kMillisecond);

static void BM_FsCoefficientsAzimuth(benchmark::State &state)
{
    const auto s = azimuth();
    for (auto _ : state)
        benchmark::DoNotOptimize(fs_coefficients(s, int(state.range(0))));
}
BENCHMARK(BM_FsCoefficientsAzimuth)->Arg(31)->Arg(281)->Unit(benchmark::kMillisecond);

static void BM_SeriesConstruction(benchmark::State &state)
{
    const int n0 = int(state.range(0));
    const auto az = fs_coefficients(azimuth(), 2 * n0 + 1), el = fs_coefficients(elevation(), 2 * n0 + 1);
    benchmark::DoNotOptimize(ScfSeries(az, el, 0.5, n0)); // fills the per-order cache
    for (auto _ : state)
        benchmark::DoNotOptimize(ScfSeries(az, el, 0.5, n0));
}
BENCHMARK(BM_SeriesConstruction)->Arg(15)->Arg(140)->Unit(benchmark::kMicrosecond);

static void BM_SeriesLag(benchmark::State &state)
{
    const ScfSeries s(config(60, int(state.range(0))));
    int lag = 0;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(s(lag));
        lag = (lag + 1) % 60;
    }
}
BENCHMARK(BM_SeriesLag)->Arg(15)->Arg(140);

static void BM_CorrelationMatrix(benchmark::State &state)
{
    const int ports = int(state.range(0));
    const ScfConfig c = config(ports, select_truncation(0.5, ports - 1));
    for (auto _ : state)
        benchmark::DoNotOptimize(correlation_matrix(c));
}
BENCHMARK(BM_CorrelationMatrix)->Arg(10)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_ParametricDraw(benchmark::State &state)
{
    const ParametricConfig c{int(state.range(0)), link_end(20), link_end(20)};
    std::uint64_t draw = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(draw_parametric(c, 1, draw++));
}
BENCHMARK(BM_ParametricDraw)->Arg(10)->Arg(50)->Unit(benchmark::kMicrosecond);

static void BM_DeterministicEquivalent(benchmark::State &state)
{
    const int n = int(state.range(0));
    const CorrelationMatrix r = correlation_matrix(config(n, select_truncation(0.5, n - 1)));
    for (auto _ : state)
        benchmark::DoNotOptimize(deterministic_mi(r, r, 1.0));
}
BENCHMARK(BM_DeterministicEquivalent)->Arg(20)->Arg(60)->Unit(benchmark::kMicrosecond);

static void BM_RzfSinr(benchmark::State &state)
{
    const int n = 60, k = int(state.range(0));
    RandomStream rng(1, 0);
    Eigen::MatrixXcd h(n, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            h(i, j) = rng.complex_normal();
    for (auto _ : state)
    {
        const Eigen::MatrixXcd g = rzf_precoder(h, 0.01);
        benchmark::DoNotOptimize(sinr_all(h, g));
    }
}
BENCHMARK(BM_RzfSinr)->Arg(10)->Arg(40)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
