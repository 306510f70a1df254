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

#include "crossfield/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "crossfield/common.hpp"

namespace crossfield
{

    double upa_geometry::aperture() const
    {
        return std::hypot(side_x(), side_z());
    }

    upa_geometry build_upa(std::size_t rows, std::size_t cols, double spacing)
    {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("upa row and column counts must be at least 1");
        check_positive(spacing, "element spacing");

        upa_geometry upa;
        upa.rows = rows;
        upa.cols = cols;
        upa.spacing = spacing;
        upa.offsets.resize(rows * cols);

        const double col_center = 0.5 * static_cast<double>(cols - 1);
        const double row_center = 0.5 * static_cast<double>(rows - 1);
        for (std::size_t r = 0; r < rows; ++r)
        {
            for (std::size_t c = 0; c < cols; ++c)
            {
                element_offset &o = upa.offsets[r * cols + c];
                o.dx = (static_cast<double>(c) - col_center) * spacing;
                o.dz = (static_cast<double>(r) - row_center) * spacing;
            }
        }
        return upa;
    }

    std::array<double, 3> scenario_geometry::rx_position() const
    {
        return {d0 * std::sin(theta), d0 * std::cos(theta), 0.0};
    }

    scenario_geometry make_scenario(upa_geometry upa, double d0, double theta)
    {
        if (upa.rows < 1 || upa.cols < 1 || upa.offsets.size() != upa.rows * upa.cols)
            throw std::invalid_argument("upa geometry is incomplete");
        check_positive(upa.spacing, "element spacing");
        check_positive(d0, "d0");
        check_finite(theta, "theta");
        if (theta < 0.0 || theta >= pi / 2.0)
            throw std::invalid_argument("theta must lie in [0, pi/2)");

        scenario_geometry s;
        s.upa = std::move(upa);
        s.d0 = d0;
        s.theta = theta;
        return s;
    }

    double element_distance(const scenario_geometry &scenario, element_offset offset)
    {
        const auto rx = scenario.rx_position();
        const double ax = offset.dx - rx[0];
        const double ay = -rx[1];
        const double az = offset.dz - rx[2];
        return std::sqrt(ax * ax + ay * ay + az * az);
    }

} // namespace crossfield
