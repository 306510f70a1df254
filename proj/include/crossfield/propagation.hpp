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

#ifndef CROSSFIELD_PROPAGATION_HPP
#define CROSSFIELD_PROPAGATION_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "crossfield/geometry.hpp"

namespace crossfield
{
    // Frequency sweep grid, f_start .. f_stop inclusive with n_points samples.
    struct sweep_plan
    {
        double f_start = 0.0; // Hz
        double f_stop = 0.0;  // Hz
        std::size_t n_points = 0;

        double spacing() const { return (f_stop - f_start) / static_cast<double>(n_points - 1); }
        double bandwidth() const { return f_stop - f_start; }
        double delay_resolution() const { return 1.0 / bandwidth(); }
        double max_excess_delay() const { return 1.0 / spacing(); }
        double center_frequency() const { return 0.5 * (f_start + f_stop); }
        double center_wavelength() const;
        double frequency(std::size_t n) const { return f_start + static_cast<double>(n) * spacing(); }
        double wavelength(std::size_t n) const;

        bool operator==(const sweep_plan &) const = default;
    };

    sweep_plan make_sweep(double f_start, double f_stop, std::size_t n_points);

    // 260-320 GHz, 1001 points: 60 MHz spacing, 16.7 ps delay resolution,
    // 16.7 ns maximum excess delay.
    sweep_plan default_sweep();

    // Per-axis cos^q element directivity. The gain seen by the element at
    // (dx, dz) is cos(atan(dx/d0))^qx * cos(atan(dz/d0))^qz, which is 1 at
    // broadside and falls off faster along x when qx > qz.
    struct aperture_pattern
    {
        double qx = 0.0;
        double qz = 0.0;
    };

    // Defaults sized to give a ~0.6 dB corner-to-center gain swing on a
    // 64x64 / 0.5 mm / 0.86 m layout, with a 2:1 x/z anisotropy.
    inline constexpr double default_pattern_qx = 550.0;
    inline constexpr double default_pattern_qz = 275.0;

    double pattern_gain(const aperture_pattern &pattern, element_offset offset, double d0);

    // A synthetic propagation path: the direct ray, or a single-bounce
    // specular ray via a fixed scatter point.
    struct synth_path
    {
        enum class path_kind
        {
            direct,
            specular
        };

        path_kind kind = path_kind::direct;
        double excess_loss_db = 0.0; // >= 0
        std::optional<std::array<double, 3>> scatter_point;
    };

    synth_path direct_path(double excess_loss_db = 0.0);
    synth_path specular_path(std::array<double, 3> scatter_point, double excess_loss_db = 0.0);

    // Geometric length of one path from the element at `offset` to the
    // receiver.
    double path_length(const scenario_geometry &scenario, element_offset offset,
                       const synth_path &path);

    // Complex channel transfer function samples for every element over the
    // sweep. Storage is element-major: samples[e * n_points + n].
    struct ctf_grid
    {
        scenario_geometry geometry;
        sweep_plan sweep;
        std::vector<std::complex<double>> samples;

        std::size_t n_elements() const { return geometry.upa.size(); }
        std::span<const std::complex<double>> element(std::size_t e) const
        {
            return {samples.data() + e * sweep.n_points, sweep.n_points};
        }
        std::span<std::complex<double>> element(std::size_t e)
        {
            return {samples.data() + e * sweep.n_points, sweep.n_points};
        }
    };

    struct synth_options
    {
        aperture_pattern pattern{default_pattern_qx, default_pattern_qz};
        std::optional<double> noise_snr_db; // relative to strongest element's mean power
        std::uint64_t seed = 0;
        unsigned threads = 0; // 0 = hardware concurrency
    };

    // Exact spherical-wave synthesis:
    //   H_e(f) = sum_paths  lambda(f)/(4 pi d_path)
    //            * sqrt(G_e) * 10^(-excess_loss/20) * exp(-j 2 pi f d_path / c)
    // Noise, when enabled, is i.i.d. circularly-symmetric complex Gaussian per
    // sample at the requested SNR relative to the strongest element's mean
    // power, with a per-element stream derived from (seed, element) so the
    // output does not depend on the worker count.
    ctf_grid synth_ctf(const scenario_geometry &scenario, const sweep_plan &sweep,
                       const std::vector<synth_path> &paths, const synth_options &options = {});

    // Independent Gaussian perturbation of each element offset in x and z.
    // sigma = 0 returns the input unchanged; identical seeds give identical
    // output.
    upa_geometry apply_position_jitter(const upa_geometry &upa, double sigma, std::uint64_t seed);

} // namespace crossfield

#endif
