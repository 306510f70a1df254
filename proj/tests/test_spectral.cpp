// SPDX-License-Identifier: Apache-2.0
//
// crossfield - spherical-wave channel synthesis and cross-field path loss
// modelling for uniform planar arrays
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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "crossfield/common.hpp"
#include "crossfield/fft.hpp"
#include "crossfield/models.hpp"
#include "crossfield/rng.hpp"
#include "crossfield/spectral.hpp"

using namespace crossfield;

namespace
{
    synth_options no_pattern()
    {
        synth_options o;
        o.pattern = {0.0, 0.0};
        return o;
    }

    ctf_grid constant_ctf(std::size_t n_points)
    {
        ctf_grid grid;
        grid.geometry = make_scenario(build_upa(1, 1, 0.0005), 0.86);
        grid.sweep = make_sweep(260e9, 320e9, n_points);
        grid.samples.assign(n_points, {1.0, 0.0});
        return grid;
    }

    // Reference transform for validating the Bluestein path.
    std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>> &x,
                                                int sign)
    {
        const std::size_t n = x.size();
        std::vector<std::complex<double>> out(n);
        for (std::size_t k = 0; k < n; ++k)
        {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t m = 0; m < n; ++m)
            {
                const double angle = static_cast<double>(sign) * two_pi *
                                     static_cast<double>((m * k) % n) / static_cast<double>(n);
                acc += x[m] * std::complex<double>(std::cos(angle), std::sin(angle));
            }
            out[k] = acc;
        }
        return out;
    }
} // namespace

TEST_CASE("dft_plan: matches the quadratic-time transform for assorted lengths")
{
    splitmix64 rng(1234);
    for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{5},
                          std::size_t{16}, std::size_t{100}, std::size_t{257}, std::size_t{1001}})
    {
        std::vector<std::complex<double>> x(n);
        for (auto &v : x)
            v = {rng.next_unit() - 0.5, rng.next_unit() - 0.5};

        for (int sign : {-1, 1})
        {
            const dft_plan plan(n, sign);
            dft_plan::scratch scratch;
            std::vector<std::complex<double>> got(n);
            plan.execute(x.data(), got.data(), scratch);
            const auto expected = naive_dft(x, sign);

            double worst = 0.0, scale = 0.0;
            for (std::size_t k = 0; k < n; ++k)
            {
                worst = std::max(worst, std::abs(got[k] - expected[k]));
                scale = std::max(scale, std::abs(expected[k]));
            }
            CHECK(worst <= 1e-11 * std::max(scale, 1.0));
        }
    }
}

TEST_CASE("window_coefficients: rectangular and hann shapes")
{
    const auto rect = window_coefficients(window_kind::rectangular, 5);
    CHECK(rect == std::vector<double>{1.0, 1.0, 1.0, 1.0, 1.0});

    const auto hann = window_coefficients(window_kind::hann, 5);
    CHECK(hann[0] == doctest::Approx(0.0));
    CHECK(hann[2] == doctest::Approx(1.0));
    CHECK(hann[4] == doctest::Approx(0.0));
    CHECK(hann[1] == doctest::Approx(hann[3]).epsilon(1e-14));
}

TEST_CASE("ctf_to_cir: a constant CTF collapses into the zero-delay tap")
{
    const ctf_grid ctf = constant_ctf(1001);
    const cir_grid cir = ctf_to_cir(ctf);

    CHECK(std::abs(cir.taps[0] - std::complex<double>{1.0, 0.0}) < 1e-12);
    double rest = 0.0;
    for (std::size_t k = 1; k < cir.taps.size(); ++k)
        rest += std::abs(cir.taps[k]);
    CHECK(rest < 1e-9);
    CHECK(cir.tap_spacing() == doctest::Approx(1.0 / (1001.0 * 60e6)).epsilon(1e-12));
}

TEST_CASE("ctf_to_cir: Parseval under the 1/N inverse normalization")
{
    ctf_grid ctf = constant_ctf(1001);
    splitmix64 rng(777);
    for (auto &v : ctf.samples)
        v = {2.0 * rng.next_unit() - 1.0, 2.0 * rng.next_unit() - 1.0};

    const cir_grid cir = ctf_to_cir(ctf);
    double time_energy = 0.0, freq_energy = 0.0;
    for (const auto &v : cir.taps)
        time_energy += std::norm(v);
    for (const auto &v : ctf.samples)
        freq_energy += std::norm(v);

    const double ratio = time_energy / (freq_energy / 1001.0);
    CHECK(std::abs(ratio - 1.0) <= 1e-10);
}

TEST_CASE("ctf_to_cir: rejects inconsistent and non-finite grids")
{
    ctf_grid ctf = constant_ctf(101);
    ctf.samples.pop_back();
    CHECK_THROWS_AS(ctf_to_cir(ctf), std::invalid_argument);

    ctf_grid bad = constant_ctf(101);
    bad.samples[3] = {std::nan(""), 0.0};
    CHECK_THROWS_AS(ctf_to_cir(bad), std::invalid_argument);
}

TEST_CASE("extract: line-of-sight at 0.8586 m lands on tap 172")
{
    const scenario_geometry s = make_scenario(build_upa(1, 1, 0.0005), 0.8586);
    const ctf_grid ctf = synth_ctf(s, default_sweep(), {direct_path()}, no_pattern());
    const cir_grid cir = ctf_to_cir(ctf);

    std::size_t peak = 0;
    double best = 0.0;
    for (std::size_t k = 0; k < cir.sweep.n_points; ++k)
    {
        if (std::abs(cir.taps[k]) > best)
        {
            best = std::abs(cir.taps[k]);
            peak = k;
        }
    }
    CHECK(peak == 172);
}

TEST_CASE("extract: on-bin path recovers delay and gain to machine levels")
{
    const sweep_plan sweep = default_sweep();
    const double tap_dt = 1.0 / (static_cast<double>(sweep.n_points) * sweep.spacing());
    const double tau = 172.0 * tap_dt;
    const scenario_geometry s = make_scenario(build_upa(1, 1, 0.0005), tau * speed_of_light);

    const ctf_grid ctf = synth_ctf(s, sweep, {direct_path()}, no_pattern());
    const observation_grid obs = extract_dominant_path(ctf_to_cir(ctf), ctf);

    const path_observation &o = obs.observations[0];
    CHECK(std::abs(o.delay - tau) < 1e-14);
    CHECK(o.distance == doctest::Approx(o.delay * speed_of_light).epsilon(1e-12));

    const double expected_gain = -friis_fspl(tau * speed_of_light, sweep.center_wavelength());
    CHECK(std::abs(o.gain_db - expected_gain) < 0.01);
}

TEST_CASE("extract: between-bin path stays within half a picosecond after refinement")
{
    const double tau = 2.8721e-9;
    const sweep_plan sweep = default_sweep();
    const scenario_geometry s = make_scenario(build_upa(1, 1, 0.0005), tau * speed_of_light);

    const ctf_grid ctf = synth_ctf(s, sweep, {direct_path()}, no_pattern());
    const cir_grid cir = ctf_to_cir(ctf);
    const observation_grid obs = extract_dominant_path(cir, ctf);

    CHECK(std::abs(obs.observations[0].delay - tau) <= 0.5e-12);

    // The raw tap-grid peak alone can be off by up to half a bin.
    std::size_t peak = 0;
    double best = 0.0;
    for (std::size_t k = 0; k < cir.sweep.n_points; ++k)
    {
        if (std::abs(cir.taps[k]) > best)
        {
            best = std::abs(cir.taps[k]);
            peak = k;
        }
    }
    const double coarse_error = std::abs(static_cast<double>(peak) * cir.tap_spacing() - tau);
    CHECK(coarse_error <= 8.34e-12);
    CHECK(std::abs(obs.observations[0].delay - tau) < coarse_error);
}

TEST_CASE("extract: all-zero grid reports no path")
{
    ctf_grid ctf = constant_ctf(101);
    std::fill(ctf.samples.begin(), ctf.samples.end(), std::complex<double>{0.0, 0.0});
    const cir_grid cir = ctf_to_cir(ctf);
    CHECK_THROWS_AS(extract_dominant_path(cir, ctf), no_path_found);
}

TEST_CASE("extract: elements below the noise floor report no path")
{
    const scenario_geometry s = make_scenario(build_upa(2, 2, 0.0005), 0.86);
    ctf_grid ctf = synth_ctf(s, default_sweep(), {direct_path()}, no_pattern());

    // Bury one element 60 dB below its siblings.
    for (auto &v : ctf.element(3))
        v *= 1e-3;

    const cir_grid cir = ctf_to_cir(ctf);
    CHECK_THROWS_AS(extract_dominant_path(cir, ctf), no_path_found);

    extract_options lenient;
    lenient.noise_floor_db = 80.0;
    CHECK_NOTHROW(extract_dominant_path(cir, ctf, lenient));
}

TEST_CASE("extract: mismatched grids are rejected")
{
    const scenario_geometry s = make_scenario(build_upa(2, 2, 0.0005), 0.86);
    const ctf_grid ctf = synth_ctf(s, default_sweep(), {direct_path()}, no_pattern());
    const cir_grid cir = ctf_to_cir(ctf);

    ctf_grid other = synth_ctf(s, make_sweep(260e9, 320e9, 501), {direct_path()}, no_pattern());
    CHECK_THROWS_AS(extract_dominant_path(cir, other), std::invalid_argument);
}

TEST_CASE("extract: reported gain is window-invariant within 0.05 dB")
{
    const scenario_geometry s = make_scenario(build_upa(4, 4, 0.0005), 0.86);
    const ctf_grid ctf = synth_ctf(s, default_sweep(), {direct_path()}, no_pattern());

    const observation_grid rect = extract_dominant_path(ctf_to_cir(ctf), ctf);
    const observation_grid hann =
        extract_dominant_path(ctf_to_cir(ctf, window_kind::hann), ctf);

    for (std::size_t e = 0; e < rect.size(); ++e)
    {
        CHECK(std::abs(rect.observations[e].gain_db - hann.observations[e].gain_db) <= 0.05);
        CHECK(std::abs(rect.observations[e].delay - hann.observations[e].delay) <= 1e-13);
    }
}

TEST_CASE("extract: output does not depend on the worker count")
{
    const scenario_geometry s = make_scenario(build_upa(4, 4, 0.0005), 0.86);
    const ctf_grid ctf = synth_ctf(s, default_sweep(), {direct_path()}, no_pattern());
    const cir_grid cir = ctf_to_cir(ctf);

    extract_options one;
    one.threads = 1;
    extract_options four;
    four.threads = 4;
    const observation_grid a = extract_dominant_path(cir, ctf, one);
    const observation_grid b = extract_dominant_path(cir, ctf, four);
    for (std::size_t e = 0; e < a.size(); ++e)
    {
        CHECK(a.observations[e].delay == b.observations[e].delay);
        CHECK(a.observations[e].gain_db == b.observations[e].gain_db);
        CHECK(a.observations[e].phase == b.observations[e].phase);
    }
}

TEST_CASE("pipeline: noiseless 32x32 round trip recovers every element to 0.05 mm and 0.02 dB")
{
    const scenario_geometry s = make_scenario(build_upa(32, 32, 0.0005), 0.86);
    const sweep_plan sweep = default_sweep();
    const ctf_grid ctf = synth_ctf(s, sweep, {direct_path()}, no_pattern());
    const observation_grid obs = extract_dominant_path(ctf_to_cir(ctf), ctf);

    const double lambda_c = sweep.center_wavelength();
    double worst_distance = 0.0, worst_gain = 0.0;
    for (std::size_t e = 0; e < obs.size(); ++e)
    {
        const double d_true = element_distance(s, s.upa.offsets[e]);
        worst_distance = std::max(worst_distance, std::abs(obs.observations[e].distance - d_true));
        const double gain_true = -friis_fspl(d_true, lambda_c);
        worst_gain = std::max(worst_gain, std::abs(obs.observations[e].gain_db - gain_true));
    }
    CHECK(worst_distance < 5e-5);
    CHECK(worst_gain < 0.02);
}

TEST_CASE("unwrap_phase_grid: constant grid passes through unchanged")
{
    observation_grid grid;
    grid.geometry = make_scenario(build_upa(3, 3, 0.0005), 0.86);
    grid.ref_frequency = 290e9;
    grid.observations.resize(9);
    for (auto &o : grid.observations)
        o.phase = 1.234;

    const std::vector<double> unwrapped = unwrap_phase_grid(grid);
    for (double v : unwrapped)
        CHECK(v == 1.234);
}

TEST_CASE("unwrap_phase_grid: never changes a value modulo 2 pi")
{
    observation_grid grid;
    grid.geometry = make_scenario(build_upa(8, 8, 0.0005), 0.86);
    grid.ref_frequency = 290e9;
    grid.observations.resize(64);
    splitmix64 rng(2024);
    for (auto &o : grid.observations)
        o.phase = two_pi * rng.next_unit() - pi;

    const std::vector<double> unwrapped = unwrap_phase_grid(grid);
    CHECK(unwrapped[0] == grid.observations[0].phase);
    for (std::size_t e = 0; e < 64; ++e)
    {
        const double k = (unwrapped[e] - grid.observations[e].phase) / two_pi;
        CHECK(std::abs(k - std::round(k)) < 1e-9);
    }
}

TEST_CASE("unwrap_phase_grid: synthetic bowls match the exact-geometry spans")
{
    const sweep_plan sweep = default_sweep();
    const double lambda_c = sweep.center_wavelength();

    // 16x16: span 0.0994 rad, well below pi/8.
    {
        const scenario_geometry s = make_scenario(build_upa(16, 16, 0.0005), 0.86);
        const ctf_grid ctf = synth_ctf(s, sweep, {direct_path()}, no_pattern());
        const observation_grid obs = extract_dominant_path(ctf_to_cir(ctf), ctf);
        const std::vector<double> unwrapped = unwrap_phase_grid(obs);
        const auto [lo, hi] = std::minmax_element(unwrapped.begin(), unwrapped.end());
        CHECK(*hi - *lo == doctest::Approx(0.0994).epsilon(0.04));
        CHECK(*hi - *lo < pi / 8.0);
    }

    // 32x32: span crosses pi/8 and matches 2 pi (corner excess) / lambda.
    {
        const scenario_geometry s = make_scenario(build_upa(32, 32, 0.0005), 0.86);
        const ctf_grid ctf = synth_ctf(s, sweep, {direct_path()}, no_pattern());
        const observation_grid obs = extract_dominant_path(ctf_to_cir(ctf), ctf);
        const std::vector<double> unwrapped = unwrap_phase_grid(obs);
        const auto [lo, hi] = std::minmax_element(unwrapped.begin(), unwrapped.end());

        double excess = 0.0;
        for (const element_offset &o : s.upa.offsets)
            excess = std::max(excess, element_distance(s, o) - s.d0);
        const double predicted = two_pi * excess / lambda_c;
        CHECK(*hi - *lo == doctest::Approx(predicted).epsilon(0.02));
        CHECK(*hi - *lo > pi / 8.0);

        // The bowl is smooth: neighbours along a row stay well under one cycle.
        for (std::size_t c = 1; c < 32; ++c)
            CHECK(std::abs(unwrapped[16 * 32 + c] - unwrapped[16 * 32 + c - 1]) < 0.2);
    }
}

TEST_CASE("unwrap_phase_grid: rejects incomplete grids")
{
    observation_grid grid;
    grid.geometry = make_scenario(build_upa(3, 3, 0.0005), 0.86);
    grid.observations.resize(8);
    CHECK_THROWS_AS(unwrap_phase_grid(grid), std::invalid_argument);
}
