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

#include "crossfield/propagation.hpp"

#include <cmath>
#include <stdexcept>

#include "crossfield/common.hpp"
#include "crossfield/parallel.hpp"
#include "crossfield/rng.hpp"

namespace crossfield
{

    double sweep_plan::center_wavelength() const
    {
        return speed_of_light / center_frequency();
    }

    double sweep_plan::wavelength(std::size_t n) const
    {
        return speed_of_light / frequency(n);
    }

    sweep_plan make_sweep(double f_start, double f_stop, std::size_t n_points)
    {
        check_positive(f_start, "f_start");
        check_finite(f_stop, "f_stop");
        if (f_stop <= f_start)
            throw std::invalid_argument("f_stop must be greater than f_start");
        if (n_points < 2)
            throw std::invalid_argument("n_points must be at least 2");
        return sweep_plan{f_start, f_stop, n_points};
    }

    sweep_plan default_sweep()
    {
        return make_sweep(260e9, 320e9, 1001);
    }

    double pattern_gain(const aperture_pattern &pattern, element_offset offset, double d0)
    {
        check_non_negative(pattern.qx, "pattern qx");
        check_non_negative(pattern.qz, "pattern qz");
        const double ax = std::atan(offset.dx / d0);
        const double az = std::atan(offset.dz / d0);
        double g = 1.0;
        if (pattern.qx > 0.0)
            g *= std::pow(std::cos(ax), pattern.qx);
        if (pattern.qz > 0.0)
            g *= std::pow(std::cos(az), pattern.qz);
        return g;
    }

    synth_path direct_path(double excess_loss_db)
    {
        synth_path p;
        p.kind = synth_path::path_kind::direct;
        p.excess_loss_db = excess_loss_db;
        return p;
    }

    synth_path specular_path(std::array<double, 3> scatter_point, double excess_loss_db)
    {
        synth_path p;
        p.kind = synth_path::path_kind::specular;
        p.excess_loss_db = excess_loss_db;
        p.scatter_point = scatter_point;
        return p;
    }

    namespace
    {
        void validate_path(const synth_path &path)
        {
            check_non_negative(path.excess_loss_db, "excess_loss_db");
            if (path.kind == synth_path::path_kind::direct && path.scatter_point.has_value())
                throw std::invalid_argument("direct paths carry no scatter point");
            if (path.kind == synth_path::path_kind::specular)
            {
                if (!path.scatter_point.has_value())
                    throw std::invalid_argument("specular paths need a scatter point");
                for (double v : *path.scatter_point)
                    check_finite(v, "scatter point coordinate");
            }
        }

        double norm3(double x, double y, double z)
        {
            return std::sqrt(x * x + y * y + z * z);
        }
    } // namespace

    double path_length(const scenario_geometry &scenario, element_offset offset,
                       const synth_path &path)
    {
        if (path.kind == synth_path::path_kind::direct)
            return element_distance(scenario, offset);

        const auto &s = *path.scatter_point;
        const auto rx = scenario.rx_position();
        const double leg_tx = norm3(s[0] - offset.dx, s[1], s[2] - offset.dz);
        const double leg_rx = norm3(rx[0] - s[0], rx[1] - s[1], rx[2] - s[2]);
        return leg_tx + leg_rx;
    }

    ctf_grid synth_ctf(const scenario_geometry &scenario, const sweep_plan &sweep,
                       const std::vector<synth_path> &paths, const synth_options &options)
    {
        if (paths.empty())
            throw std::invalid_argument("at least one path is required");
        for (const synth_path &p : paths)
            validate_path(p);
        if (sweep.n_points < 2 || sweep.f_start <= 0.0 || sweep.f_stop <= sweep.f_start)
            throw std::invalid_argument("invalid sweep plan");
        if (options.noise_snr_db.has_value())
            check_finite(*options.noise_snr_db, "noise_snr_db");

        ctf_grid grid;
        grid.geometry = scenario;
        grid.sweep = sweep;

        const std::size_t n_el = scenario.upa.size();
        const std::size_t n_pt = sweep.n_points;
        grid.samples.assign(n_el * n_pt, {0.0, 0.0});

        const double f0 = sweep.f_start;
        const double df = sweep.spacing();

        parallel_for(n_el, options.threads,
                     [&](std::size_t e)
                     {
                         const element_offset off = scenario.upa.offsets[e];
                         const double gain = std::sqrt(pattern_gain(options.pattern, off, scenario.d0));
                         std::complex<double> *out = grid.samples.data() + e * n_pt;
                         for (const synth_path &p : paths)
                         {
                             const double d = path_length(scenario, off, p);
                             const double scale =
                                 gain * amplitude_from_db(-p.excess_loss_db) * speed_of_light / (4.0 * pi * d);
                             const double tau = d / speed_of_light;
                             for (std::size_t n = 0; n < n_pt; ++n)
                             {
                                 const double f = f0 + static_cast<double>(n) * df;
                                 out[n] += std::polar(scale / f, -two_pi * f * tau);
                             }
                         }
                     });

        if (options.noise_snr_db.has_value())
        {
            // Reference power: mean |H|^2 of the strongest element.
            double p_ref = 0.0;
            for (std::size_t e = 0; e < n_el; ++e)
            {
                double acc = 0.0;
                const std::complex<double> *row = grid.samples.data() + e * n_pt;
                for (std::size_t n = 0; n < n_pt; ++n)
                    acc += std::norm(row[n]);
                p_ref = std::max(p_ref, acc / static_cast<double>(n_pt));
            }
            const double sigma = std::sqrt(p_ref * power_from_db(-*options.noise_snr_db) / 2.0);

            parallel_for(n_el, options.threads,
                         [&](std::size_t e)
                         {
                             gaussian_stream noise(mix_stream(options.seed, e));
                             std::complex<double> *row = grid.samples.data() + e * n_pt;
                             for (std::size_t n = 0; n < n_pt; ++n)
                                 row[n] += std::complex<double>(sigma * noise.next(), sigma * noise.next());
                         });
        }

        return grid;
    }

    upa_geometry apply_position_jitter(const upa_geometry &upa, double sigma, std::uint64_t seed)
    {
        check_non_negative(sigma, "sigma");
        if (sigma == 0.0)
            return upa;

        upa_geometry out = upa;
        for (std::size_t e = 0; e < out.offsets.size(); ++e)
        {
            gaussian_stream g(mix_stream(seed ^ 0x6a09e667f3bcc909ULL, e));
            out.offsets[e].dx += sigma * g.next();
            out.offsets[e].dz += sigma * g.next();
        }
        return out;
    }

} // namespace crossfield
