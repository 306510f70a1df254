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

#ifndef CROSSFIELD_GEOMETRY_HPP
#define CROSSFIELD_GEOMETRY_HPP

#include <array>
#include <cstddef>
#include <vector>

namespace crossfield
{
    // Element position relative to the array center, in the array plane.
    struct element_offset
    {
        double dx = 0.0; // m, horizontal
        double dz = 0.0; // m, vertical
    };

    // Uniform planar array in the x-z plane. Elements are stored in scan
    // order: x fastest (columns), then z (rows), starting at the bottom-left
    // corner. Offsets produced by build_upa are centered on the lattice
    // centroid; a jittered copy keeps rows/cols/spacing as the nominal values.
    struct upa_geometry
    {
        std::size_t rows = 0;
        std::size_t cols = 0;
        double spacing = 0.0;                // m, nominal lattice pitch
        std::vector<element_offset> offsets; // rows*cols entries, scan order

        std::size_t size() const { return offsets.size(); }
        double side_x() const { return static_cast<double>(cols - 1) * spacing; }
        double side_z() const { return static_cast<double>(rows - 1) * spacing; }

        // Aperture is the lattice diagonal.
        double aperture() const;

        std::size_t index_of(std::size_t row, std::size_t col) const { return row * cols + col; }
        std::size_t row_of(std::size_t index) const { return index / cols; }
        std::size_t col_of(std::size_t index) const { return index % cols; }
    };

    upa_geometry build_upa(std::size_t rows, std::size_t cols, double spacing);

    // Transmit array plus the single receive point. d0 is the distance from
    // the array center to the receiver; theta is the angle between the receive
    // direction and broadside. The receiver sits at (d0 sin(theta),
    // d0 cos(theta), 0), so broadside scenarios place it on the +y axis.
    struct scenario_geometry
    {
        upa_geometry upa;
        double d0 = 0.0;    // m
        double theta = 0.0; // rad, 0 <= theta < pi/2

        std::array<double, 3> rx_position() const;
    };

    scenario_geometry make_scenario(upa_geometry upa, double d0, double theta = 0.0);

    // Exact distance from the element at the given offset to the receiver.
    // For broadside scenarios this is sqrt(d0^2 + dx^2 + dz^2).
    double element_distance(const scenario_geometry &scenario, element_offset offset);

} // namespace crossfield

#endif
