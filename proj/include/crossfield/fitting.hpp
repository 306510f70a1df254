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

#ifndef CROSSFIELD_FITTING_HPP
#define CROSSFIELD_FITTING_HPP

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "crossfield/models.hpp"
#include "crossfield/spectral.hpp"

namespace crossfield
{
    // The search runs over transformed coordinates
    //   ( ln d_ref, ln(c1 - 1), c2, ln c3, ln c4 )
    // which keeps the positivity constraints implicit.
    inline constexpr std::size_t fit_param_count = 5;

    using fit_bounds = std::array<std::pair<double, double>, fit_param_count>;

    fit_bounds default_fit_bounds();

    struct fit_config
    {
        std::size_t max_iterations = 2000; // simplex iteration budget per restart
        double tolerance = 1e-10;          // dB^2 simplex spread
        std::size_t restarts = 8;
        std::uint64_t seed = 0;
        fit_bounds bounds = default_fit_bounds();

        void validate() const;
    };

    struct fit_report
    {
        cross_field_params params;
        double mse = 0.0; // dB^2
        std::size_t iterations = 0;
        bool converged = false;
        bool saturated = false;          // exponent clamp engaged during the best fit
        std::vector<double> residual_db; // per element: model PL - observed PL
    };

    // Mean squared dB error between the model path loss and the observed
    // -gain_db over all elements. Compensated summation keeps the result
    // independent of evaluation order. *saturated reports whether any element
    // hit the exponent clamp.
    double objective(const cross_field_params &params, const observation_grid &observations,
                     double wavelength, double d0, bool *saturated = nullptr);

    // Derivative-free least squares: multi-start Nelder-Mead over the
    // transformed parameters, restarts seeded from perturbations of a
    // heuristic initializer. The best restart wins; ties break on the lower
    // restart index so results do not depend on scheduling.
    fit_report fit(const observation_grid &observations, double wavelength, double d0,
                   const fit_config &config = {});

    // Rescale along the degeneracy direction so that c2 * d0 = 1. The K
    // surface is unchanged; intended only for human comparison of parameter
    // sets. Requires c2 > 0, otherwise returns the input unchanged.
    cross_field_params canonical_form(const cross_field_params &params, double d0);

} // namespace crossfield

#endif
