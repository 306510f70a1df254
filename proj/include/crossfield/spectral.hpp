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

#ifndef CROSSFIELD_SPECTRAL_HPP
#define CROSSFIELD_SPECTRAL_HPP

#include <complex>
#include <span>
#include <vector>

#include "crossfield/propagation.hpp"

namespace crossfield
{
    enum class window_kind
    {
        rectangular,
        hann
    };

    // Delay-domain transform of a CTF grid. Tap k corresponds to delay
    // k / (n_points * spacing); the inverse transform carries 1/N so a unit
    // constant CTF becomes a unit impulse at tap 0.
    struct cir_grid
    {
        scenario_geometry geometry;
        sweep_plan sweep;
        window_kind window = window_kind::rectangular;
        std::vector<std::complex<double>> taps; // element-major, n_points per element

        std::size_t n_elements() const { return geometry.upa.size(); }
        double tap_spacing() const
        {
            return 1.0 / (static_cast<double>(sweep.n_points) * sweep.spacing());
        }
        std::span<const std::complex<double>> element(std::size_t e) const
        {
            return {taps.data() + e * sweep.n_points, sweep.n_points};
        }
    };

    std::vector<double> window_coefficients(window_kind window, std::size_t n);

    // Per-element inverse DFT of the CTF, window applied in the frequency
    // domain first.
    cir_grid ctf_to_cir(const ctf_grid &ctf, window_kind window = window_kind::rectangular,
                        unsigned threads = 0);

    // Observables of the dominant ray at one element.
    struct path_observation
    {
        double delay = 0.0;    // s
        double distance = 0.0; // m, delay * c
        double gain_db = 0.0;  // path gain (negative of path loss), at the sweep center
        double phase = 0.0;    // rad in [-pi, pi), residual at the sweep center frequency
    };

    struct observation_grid
    {
        scenario_geometry geometry;
        double ref_frequency = 0.0; // Hz, gain/phase reference (sweep center)
        std::vector<path_observation> observations; // scan order

        std::size_t size() const { return observations.size(); }
    };

    struct extract_options
    {
        // An element whose peak tap is more than this far below the strongest
        // peak in the grid is treated as having no detectable path.
        double noise_floor_db = 30.0;
        unsigned threads = 0;
    };

    // Dominant-path estimator, per element:
    //  1. coarse delay at the strongest tap;
    //  2. three-point quadratic interpolation of the tap magnitudes;
    //  3. the interpolated delay is polished against the windowed frequency
    //     response until the delay-compensated correlation magnitude peaks
    //     (the quadratic step alone is biased toward the bin center by up to
    //     a quarter bin under a rectangular window);
    //  4. gain from a straight-line fit of log |H| against log f, evaluated
    //     at the sweep center, which removes the amplitude slope of the sweep
    //     without assuming a window;
    //  5. phase as arg sum_f H(f) exp(+j 2 pi f tau_bin) with tau_bin the
    //     peak-tap delay, i.e. the residual at the center frequency after
    //     compensating the integer-bin part of the delay. Compensating the
    //     fully refined delay instead would null the very wavefront curvature
    //     the observable is meant to expose.
    // Throws no_path_found if any element peaks below the noise floor.
    observation_grid extract_dominant_path(const cir_grid &cir, const ctf_grid &ctf,
                                           const extract_options &options = {});

    // Unwrap the phase observables in scan order: along each row in x, rows
    // chained through the first column unwrapped in z. Only integer multiples
    // of 2 pi are added; the first element is unchanged.
    std::vector<double> unwrap_phase_grid(const observation_grid &grid);

} // namespace crossfield

#endif
