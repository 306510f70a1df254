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

#include "crossfield/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crossfield/common.hpp"
#include "crossfield/fft.hpp"
#include "crossfield/parallel.hpp"

namespace crossfield
{

    std::vector<double> window_coefficients(window_kind window, std::size_t n)
    {
        std::vector<double> w(n, 1.0);
        if (window == window_kind::hann && n > 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                w[i] = 0.5 * (1.0 - std::cos(two_pi * static_cast<double>(i) /
                                             static_cast<double>(n - 1)));
        }
        return w;
    }

    cir_grid ctf_to_cir(const ctf_grid &ctf, window_kind window, unsigned threads)
    {
        const std::size_t n_el = ctf.n_elements();
        const std::size_t n_pt = ctf.sweep.n_points;
        if (ctf.samples.size() != n_el * n_pt)
            throw std::invalid_argument("ctf grid dimensions do not match its geometry and sweep");
        for (const auto &s : ctf.samples)
            if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
                throw std::invalid_argument("ctf grid contains non-finite samples");

        cir_grid cir;
        cir.geometry = ctf.geometry;
        cir.sweep = ctf.sweep;
        cir.window = window;
        cir.taps.resize(n_el * n_pt);

        const std::vector<double> w = window_coefficients(window, n_pt);
        const dft_plan plan(n_pt, +1);
        const double inv_n = 1.0 / static_cast<double>(n_pt);

        parallel_for(n_el, threads,
                     [&](std::size_t e)
                     {
                         dft_plan::scratch scratch;
                         std::vector<std::complex<double>> windowed(n_pt);
                         const std::complex<double> *in = ctf.samples.data() + e * n_pt;
                         for (std::size_t n = 0; n < n_pt; ++n)
                             windowed[n] = in[n] * w[n];
                         plan.execute(windowed.data(), cir.taps.data() + e * n_pt, scratch);
                         std::complex<double> *out = cir.taps.data() + e * n_pt;
                         for (std::size_t n = 0; n < n_pt; ++n)
                             out[n] *= inv_n;
                     });

        return cir;
    }

    namespace
    {
        // |sum_n w_n H_n exp(+j 2 pi f_n tau)| via an incremental rotator.
        double correlation_magnitude(std::span<const std::complex<double>> h,
                                     const std::vector<double> &w, double f0, double df,
                                     double tau)
        {
            const std::complex<double> rot0 = std::polar(1.0, two_pi * f0 * tau);
            const std::complex<double> step = std::polar(1.0, two_pi * df * tau);
            std::complex<double> rot = rot0;
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t n = 0; n < h.size(); ++n)
            {
                acc += h[n] * w[n] * rot;
                rot *= step;
            }
            return std::abs(acc);
        }

        struct delay_estimate
        {
            std::size_t peak_bin = 0;
            double refined = 0.0; // s
        };

        delay_estimate refine_delay(std::span<const std::complex<double>> taps,
                                    std::span<const std::complex<double>> h,
                                    const std::vector<double> &w, double f0, double df,
                                    double tap_dt, std::size_t peak)
        {
            const std::size_t n = taps.size();

            // Quadratic vertex through the peak magnitude and its circular
            // neighbours, offset clamped to half a bin.
            const double m_prev = std::abs(taps[(peak + n - 1) % n]);
            const double m_peak = std::abs(taps[peak]);
            const double m_next = std::abs(taps[(peak + 1) % n]);
            const double denom = m_prev - 2.0 * m_peak + m_next;
            double frac = 0.0;
            if (denom != 0.0)
                frac = std::clamp(0.5 * (m_prev - m_next) / denom, -0.5, 0.5);
            const double tau_quad = (static_cast<double>(peak) + frac) * tap_dt;

            // The quadratic vertex can sit up to ~0.25 bin from the true peak,
            // so scan the surrounding half bin and finish with a golden-section
            // climb of the correlation magnitude.
            constexpr int n_scan = 33;
            const double scan_step = tap_dt / static_cast<double>(n_scan - 1);
            double best_tau = tau_quad;
            double best_mag = -1.0;
            for (int i = 0; i < n_scan; ++i)
            {
                const double tau = tau_quad + (static_cast<double>(i) - 0.5 * (n_scan - 1)) * scan_step;
                const double mag = correlation_magnitude(h, w, f0, df, tau);
                if (mag > best_mag)
                {
                    best_mag = mag;
                    best_tau = tau;
                }
            }

            double lo = best_tau - scan_step;
            double hi = best_tau + scan_step;
            constexpr double inv_phi = 0.6180339887498949;
            double x1 = hi - inv_phi * (hi - lo);
            double x2 = lo + inv_phi * (hi - lo);
            double f1 = correlation_magnitude(h, w, f0, df, x1);
            double f2 = correlation_magnitude(h, w, f0, df, x2);
            for (int iter = 0; iter < 200 && (hi - lo) > 1e-16; ++iter)
            {
                if (f1 < f2)
                {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + inv_phi * (hi - lo);
                    f2 = correlation_magnitude(h, w, f0, df, x2);
                }
                else
                {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - inv_phi * (hi - lo);
                    f1 = correlation_magnitude(h, w, f0, df, x1);
                }
            }

            return {peak, 0.5 * (lo + hi)};
        }

        // Straight-line fit of ln|H| against ln(f/fc); the intercept is the
        // amplitude at the center frequency. Exact for a single ray, whose
        // amplitude scales as 1/f across the sweep.
        double center_amplitude_db(std::span<const std::complex<double>> h, double f0, double df,
                                   double fc)
        {
            double max_mag = 0.0;
            for (const auto &v : h)
                max_mag = std::max(max_mag, std::abs(v));
            const double floor = max_mag * 1e-9;

            double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
            std::size_t m = 0;
            for (std::size_t n = 0; n < h.size(); ++n)
            {
                const double mag = std::abs(h[n]);
                if (mag <= floor)
                    continue;
                const double x = std::log((f0 + static_cast<double>(n) * df) / fc);
                const double y = std::log(mag);
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
                ++m;
            }
            if (m < 2)
                return db_from_amplitude(max_mag);
            const double denom = static_cast<double>(m) * sxx - sx * sx;
            const double intercept =
                denom != 0.0 ? (sy * sxx - sx * sxy) / denom : sy / static_cast<double>(m);
            return 20.0 * intercept / std::log(10.0);
        }

        double residual_phase(std::span<const std::complex<double>> h, double f0, double df,
                              double tau_bin)
        {
            const std::complex<double> step = std::polar(1.0, two_pi * df * tau_bin);
            std::complex<double> rot = std::polar(1.0, two_pi * f0 * tau_bin);
            std::complex<double> acc(0.0, 0.0);
            for (const auto &v : h)
            {
                acc += v * rot;
                rot *= step;
            }
            return wrap_phase(std::arg(acc));
        }
    } // namespace

    observation_grid extract_dominant_path(const cir_grid &cir, const ctf_grid &ctf,
                                           const extract_options &options)
    {
        const std::size_t n_el = cir.n_elements();
        const std::size_t n_pt = cir.sweep.n_points;
        if (ctf.n_elements() != n_el || !(ctf.sweep == cir.sweep))
            throw std::invalid_argument("cir and ctf grids come from different sweeps");
        if (cir.taps.size() != n_el * n_pt || ctf.samples.size() != n_el * n_pt)
            throw std::invalid_argument("grid dimensions are inconsistent");
        check_non_negative(options.noise_floor_db, "noise_floor_db");

        // Grid-wide peak establishes the detection floor.
        std::vector<std::size_t> peak_bins(n_el);
        std::vector<double> peak_mags(n_el);
        parallel_for(n_el, options.threads,
                     [&](std::size_t e)
                     {
                         const auto taps = cir.element(e);
                         std::size_t best = 0;
                         double best_mag = 0.0;
                         for (std::size_t k = 0; k < n_pt; ++k)
                         {
                             const double mag = std::abs(taps[k]);
                             if (mag > best_mag)
                             {
                                 best_mag = mag;
                                 best = k;
                             }
                         }
                         peak_bins[e] = best;
                         peak_mags[e] = best_mag;
                     });

        const double grid_max = *std::max_element(peak_mags.begin(), peak_mags.end());
        if (grid_max <= 0.0)
            throw no_path_found("all taps are zero");
        const double min_mag = grid_max * amplitude_from_db(-options.noise_floor_db);
        for (std::size_t e = 0; e < n_el; ++e)
            if (peak_mags[e] < min_mag)
                throw no_path_found("element " + std::to_string(e) + " peaks below the noise floor");

        observation_grid out;
        out.geometry = ctf.geometry;
        out.ref_frequency = ctf.sweep.center_frequency();
        out.observations.resize(n_el);

        const std::vector<double> w = window_coefficients(cir.window, n_pt);
        const double f0 = ctf.sweep.f_start;
        const double df = ctf.sweep.spacing();
        const double fc = ctf.sweep.center_frequency();
        const double tap_dt = cir.tap_spacing();

        parallel_for(n_el, options.threads,
                     [&](std::size_t e)
                     {
                         const auto h = ctf.element(e);
                         const delay_estimate est =
                             refine_delay(cir.element(e), h, w, f0, df, tap_dt, peak_bins[e]);

                         path_observation &obs = out.observations[e];
                         obs.delay = est.refined;
                         obs.distance = est.refined * speed_of_light;
                         obs.gain_db = center_amplitude_db(h, f0, df, fc);
                         obs.phase =
                             residual_phase(h, f0, df, static_cast<double>(est.peak_bin) * tap_dt);
                     });

        return out;
    }

    std::vector<double> unwrap_phase_grid(const observation_grid &grid)
    {
        const std::size_t rows = grid.geometry.upa.rows;
        const std::size_t cols = grid.geometry.upa.cols;
        if (grid.observations.size() != rows * cols)
            throw std::invalid_argument("observation grid is incomplete");

        auto unwrap_step = [](double prev, double x)
        {
            return x + two_pi * std::round((prev - x) / two_pi);
        };

        std::vector<double> out(rows * cols);
        out[0] = grid.observations[0].phase;
        for (std::size_t r = 1; r < rows; ++r)
            out[r * cols] = unwrap_step(out[(r - 1) * cols], grid.observations[r * cols].phase);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 1; c < cols; ++c)
                out[r * cols + c] =
                    unwrap_step(out[r * cols + c - 1], grid.observations[r * cols + c].phase);
        return out;
    }

} // namespace crossfield
