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

#ifndef CROSSFIELD_MODELS_HPP
#define CROSSFIELD_MODELS_HPP

#include <string>

#include "crossfield/geometry.hpp"

namespace crossfield
{
    // Parameters of the cross-field path loss model
    //
    //   PL [dB] = 20 log10( 4 pi d_ref K / lambda )
    //   K       = 1 + c1 ^ ( [ (dx/c3)^2 + (dz/c4)^2 ] / lambda - c2 d0 )
    //
    // dx, dz, lambda and d0 are in meters, so c2 carries 1/m and c1, c3, c4
    // are dimensionless. The parameterization has a known one-dimensional
    // degeneracy: (c1 -> c1^s, c2 -> c2/s, c3 -> c3 sqrt(s), c4 -> c4 sqrt(s))
    // leaves K unchanged for every input.
    struct cross_field_params
    {
        double d_ref = 0.0; // m
        double c1 = 0.0;    // exponential base, > 1
        double c2 = 0.0;    // 1/m
        double c3 = 0.0;    // x-axis shaping, > 0
        double c4 = 0.0;    // z-axis shaping, > 0

        void validate() const;
    };

    enum class field_region
    {
        far_field,
        boundary,
        near_field
    };

    std::string to_string(field_region region);
    field_region field_region_from_string(const std::string &name);

    struct rayleigh_assessment
    {
        double rayleigh_distance = 0.0; // m
        field_region region = field_region::far_field;
        double max_phase_error = 0.0; // rad
    };

    // Free-space path loss, 20 log10(4 pi d / lambda), in dB.
    double friis_fspl(double distance, double wavelength);

    // Far/near-field boundary 2 D^2 cos^2(theta) / lambda. theta up to and
    // including pi/2 is accepted (the boundary collapses to zero there).
    double rayleigh_distance(double aperture, double wavelength, double theta = 0.0);

    // Largest absolute deviation, across elements, between the exact
    // per-element phase -2 pi d / lambda and its first-order (plane-wavefront)
    // approximation around the array center. For broadside scenarios this is
    // 2 pi / lambda * max(d - d0).
    double max_phase_error(const scenario_geometry &scenario, double wavelength);

    // Region of the scenario relative to the Rayleigh distance R:
    // near field if d0 < (1-band) R, far field if d0 > (1+band) R,
    // boundary otherwise.
    rayleigh_assessment classify_region(const scenario_geometry &scenario, double wavelength,
                                        double boundary_band = 0.15);

    // Cross-field factor K. The exponent is clamped at max_exponent/ln(c1)
    // (default keeps c1^p below e^700); *saturated reports whether the clamp
    // engaged. K > 1 for any valid input.
    double cross_field_factor(double dx, double dz, double wavelength, double d0,
                              const cross_field_params &params, bool *saturated = nullptr);

    // Cross-field path loss in dB; equals friis_fspl(d_ref * K, lambda).
    double cross_field_pl(double dx, double dz, double wavelength, double d0,
                          const cross_field_params &params, bool *saturated = nullptr);

    inline constexpr double cross_field_max_exponent = 700.0;

} // namespace crossfield

#endif
