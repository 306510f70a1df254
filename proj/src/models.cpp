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

#include "crossfield/models.hpp"

#include <cmath>
#include <stdexcept>

#include "crossfield/common.hpp"

namespace crossfield
{

    void cross_field_params::validate() const
    {
        check_positive(d_ref, "d_ref");
        check_finite(c1, "c1");
        if (c1 <= 1.0)
            throw std::invalid_argument("c1 must be greater than 1");
        check_finite(c2, "c2");
        check_positive(c3, "c3");
        check_positive(c4, "c4");
    }

    std::string to_string(field_region region)
    {
        switch (region)
        {
        case field_region::far_field:
            return "FF";
        case field_region::boundary:
            return "Boundary";
        case field_region::near_field:
            return "NF";
        }
        return "?";
    }

    field_region field_region_from_string(const std::string &name)
    {
        if (name == "FF")
            return field_region::far_field;
        if (name == "Boundary")
            return field_region::boundary;
        if (name == "NF")
            return field_region::near_field;
        throw std::invalid_argument("unknown field region '" + name + "'");
    }

    double friis_fspl(double distance, double wavelength)
    {
        check_positive(distance, "distance");
        check_positive(wavelength, "wavelength");
        return 20.0 * std::log10(4.0 * pi * distance / wavelength);
    }

    double rayleigh_distance(double aperture, double wavelength, double theta)
    {
        check_non_negative(aperture, "aperture");
        check_positive(wavelength, "wavelength");
        check_finite(theta, "theta");
        if (theta < 0.0 || theta > pi / 2.0)
            throw std::invalid_argument("theta must lie in [0, pi/2]");
        const double c = std::cos(theta);
        return 2.0 * aperture * aperture * c * c / wavelength;
    }

    double max_phase_error(const scenario_geometry &scenario, double wavelength)
    {
        check_positive(wavelength, "wavelength");

        // First-order wavefront through the array center: distance gradient at
        // the center is (-sin(theta), 0) in (dx, dz).
        const double gx = -std::sin(scenario.theta);
        double worst = 0.0;
        for (const element_offset &o : scenario.upa.offsets)
        {
            const double exact = element_distance(scenario, o);
            const double linear = scenario.d0 + gx * o.dx;
            const double deviation = std::abs(exact - linear);
            if (deviation > worst)
                worst = deviation;
        }
        return two_pi * worst / wavelength;
    }

    rayleigh_assessment classify_region(const scenario_geometry &scenario, double wavelength,
                                        double boundary_band)
    {
        check_positive(wavelength, "wavelength");
        check_non_negative(boundary_band, "boundary_band");

        rayleigh_assessment a;
        a.rayleigh_distance = rayleigh_distance(scenario.upa.aperture(), wavelength, scenario.theta);
        a.max_phase_error = max_phase_error(scenario, wavelength);
        if (scenario.d0 < (1.0 - boundary_band) * a.rayleigh_distance)
            a.region = field_region::near_field;
        else if (scenario.d0 > (1.0 + boundary_band) * a.rayleigh_distance)
            a.region = field_region::far_field;
        else
            a.region = field_region::boundary;
        return a;
    }

    double cross_field_factor(double dx, double dz, double wavelength, double d0,
                              const cross_field_params &params, bool *saturated)
    {
        check_finite(dx, "dx");
        check_finite(dz, "dz");
        check_positive(wavelength, "wavelength");
        check_positive(d0, "d0");
        params.validate();

        const double ux = dx / params.c3;
        const double uz = dz / params.c4;
        double p = (ux * ux + uz * uz) / wavelength - params.c2 * d0;

        const double p_max = cross_field_max_exponent / std::log(params.c1);
        bool clamped = false;
        if (p > p_max)
        {
            p = p_max;
            clamped = true;
        }
        if (saturated != nullptr)
            *saturated = clamped;

        return 1.0 + std::pow(params.c1, p);
    }

    double cross_field_pl(double dx, double dz, double wavelength, double d0,
                          const cross_field_params &params, bool *saturated)
    {
        const double k = cross_field_factor(dx, dz, wavelength, d0, params, saturated);
        return friis_fspl(params.d_ref * k, wavelength);
    }

} // namespace crossfield
