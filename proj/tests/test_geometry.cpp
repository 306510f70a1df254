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
#include <map>
#include <utility>

#include "crossfield/common.hpp"
#include "crossfield/geometry.hpp"

using namespace crossfield;

TEST_CASE("build_upa: degenerate 1x1 lattice")
{
    const upa_geometry upa = build_upa(1, 1, 0.0005);
    REQUIRE(upa.size() == 1);
    CHECK(upa.offsets[0].dx == 0.0);
    CHECK(upa.offsets[0].dz == 0.0);
    CHECK(upa.side_x() == 0.0);
    CHECK(upa.aperture() == 0.0);
}

TEST_CASE("build_upa: rejects invalid arguments")
{
    CHECK_THROWS_AS(build_upa(0, 16, 0.0005), std::invalid_argument);
    CHECK_THROWS_AS(build_upa(16, 0, 0.0005), std::invalid_argument);
    CHECK_THROWS_AS(build_upa(16, 16, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_upa(16, 16, -0.0005), std::invalid_argument);
    CHECK_THROWS_AS(build_upa(16, 16, std::nan("")), std::invalid_argument);
}

TEST_CASE("build_upa: 16x16 and 64x64 side lengths and diagonal aperture")
{
    const upa_geometry upa16 = build_upa(16, 16, 0.0005);
    REQUIRE(upa16.size() == 256);
    CHECK(upa16.side_x() == doctest::Approx(0.0075).epsilon(1e-12));
    CHECK(upa16.side_z() == doctest::Approx(0.0075).epsilon(1e-12));
    CHECK(upa16.aperture() == doctest::Approx(0.0106066).epsilon(1e-5));

    const upa_geometry upa64 = build_upa(64, 64, 0.0005);
    REQUIRE(upa64.size() == 4096);
    CHECK(upa64.side_x() == doctest::Approx(0.0315).epsilon(1e-12));
    CHECK(upa64.aperture() == doctest::Approx(0.044548).epsilon(1e-4));
}

TEST_CASE("build_upa: scan order runs x fastest from the bottom-left corner")
{
    const std::size_t rows = 3, cols = 4;
    const double s = 0.001;
    const upa_geometry upa = build_upa(rows, cols, s);

    CHECK(upa.offsets[0].dx == doctest::Approx(-1.5 * s));
    CHECK(upa.offsets[0].dz == doctest::Approx(-1.0 * s));
    CHECK(upa.offsets[1].dx == doctest::Approx(-0.5 * s));
    CHECK(upa.offsets[1].dz == doctest::Approx(-1.0 * s));
    CHECK(upa.offsets[cols].dz == doctest::Approx(0.0));

    for (std::size_t i = 0; i < upa.size(); ++i)
    {
        const std::size_t r = upa.row_of(i);
        const std::size_t c = upa.col_of(i);
        CHECK(r == i / cols);
        CHECK(c == i % cols);
        CHECK(upa.index_of(r, c) == i);
        CHECK(upa.offsets[i].dx ==
              doctest::Approx((static_cast<double>(c) - 1.5) * s).epsilon(1e-14));
        CHECK(upa.offsets[i].dz ==
              doctest::Approx((static_cast<double>(r) - 1.0) * s).epsilon(1e-14));
    }
}

TEST_CASE("build_upa: offsets are symmetric about the center and sum to zero")
{
    const std::pair<std::size_t, std::size_t> shapes[] = {{5, 7}, {16, 16}, {2, 9}, {1, 4}};
    for (const auto &[rows, cols] : shapes)
    {
        const upa_geometry upa = build_upa(rows, cols, 0.0005);

        std::map<std::pair<double, double>, int> census;
        double sum_dx = 0.0, sum_dz = 0.0;
        for (const element_offset &o : upa.offsets)
        {
            ++census[{o.dx, o.dz}];
            sum_dx += o.dx;
            sum_dz += o.dz;
        }
        for (const element_offset &o : upa.offsets)
        {
            const auto mirrored = census.find({-o.dx, -o.dz});
            REQUIRE(mirrored != census.end());
            CHECK(mirrored->second == census[{o.dx, o.dz}]);
        }
        const double scale = static_cast<double>(upa.size()) * upa.spacing;
        CHECK(std::abs(sum_dx) <= 1e-12 * scale);
        CHECK(std::abs(sum_dz) <= 1e-12 * scale);
    }
}

TEST_CASE("element_distance: broadside closed forms")
{
    const scenario_geometry scenario = make_scenario(build_upa(64, 64, 0.0005), 0.86);

    CHECK(element_distance(scenario, {0.0, 0.0}) == 0.86);
    CHECK(element_distance(scenario, {0.01575, 0.01575}) ==
          doctest::Approx(0.8602884).epsilon(1e-7));
    CHECK(element_distance(scenario, {0.01575, 0.0}) ==
          doctest::Approx(0.8601442).epsilon(1e-7));

    // Sign symmetry is exact, and distance grows with |dx| and |dz|.
    for (const element_offset o : {element_offset{0.003, 0.001}, {0.01575, 0.0105}})
    {
        const double d = element_distance(scenario, o);
        CHECK(element_distance(scenario, {-o.dx, o.dz}) == d);
        CHECK(element_distance(scenario, {o.dx, -o.dz}) == d);
        CHECK(element_distance(scenario, {-o.dx, -o.dz}) == d);
        CHECK(element_distance(scenario, {o.dx * 1.5, o.dz}) > d);
        CHECK(element_distance(scenario, {o.dx, o.dz * 1.5}) > d);
    }
}

TEST_CASE("element_distance: every 64x64 element lies in the 0.8600-0.8603 m range")
{
    const scenario_geometry scenario = make_scenario(build_upa(64, 64, 0.0005), 0.86);
    double d_min = 1e9, d_max = 0.0;
    for (const element_offset &o : scenario.upa.offsets)
    {
        const double d = element_distance(scenario, o);
        d_min = std::min(d_min, d);
        d_max = std::max(d_max, d);
    }
    // Even dimensions: the innermost elements sit a quarter spacing off center.
    CHECK(d_min >= 0.86);
    CHECK(d_min < 0.86 + 1e-7);
    CHECK(d_max < 0.8603);
}

TEST_CASE("element_distance: corner excess path matches the small-angle estimate")
{
    const scenario_geometry scenario = make_scenario(build_upa(64, 64, 0.0005), 0.86);

    double max_excess = 0.0;
    for (const element_offset &o : scenario.upa.offsets)
        max_excess = std::max(max_excess, element_distance(scenario, o) - scenario.d0);

    // Cancellation-free oracle: sqrt(d0^2+h^2) - d0 = h^2 / (sqrt(d0^2+h^2) + d0).
    const double h2 = 2.0 * 0.01575 * 0.01575;
    const double oracle = h2 / (std::sqrt(scenario.d0 * scenario.d0 + h2) + scenario.d0);
    CHECK(max_excess == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(max_excess == doctest::Approx(2.884e-4).epsilon(1e-3));

    // Small-angle form (half-diagonal)^2 / (2 d0) agrees to 1e-7 m.
    const double small_angle = h2 / (2.0 * scenario.d0);
    CHECK(std::abs(max_excess - small_angle) < 1e-7);
}

TEST_CASE("scenario validation")
{
    upa_geometry upa = build_upa(4, 4, 0.0005);
    CHECK_THROWS_AS(make_scenario(upa, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_scenario(upa, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_scenario(upa, 0.86, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_scenario(upa, 0.86, pi / 2.0), std::invalid_argument);
    CHECK_NOTHROW(make_scenario(upa, 0.86, 0.4));

    upa_geometry broken = upa;
    broken.offsets.pop_back();
    CHECK_THROWS_AS(make_scenario(broken, 0.86), std::invalid_argument);
}

TEST_CASE("element_distance: off-broadside receiver geometry")
{
    const double theta = 0.3;
    const scenario_geometry scenario = make_scenario(build_upa(8, 8, 0.0005), 0.86, theta);

    CHECK(element_distance(scenario, {0.0, 0.0}) == doctest::Approx(0.86).epsilon(1e-15));

    const auto rx = scenario.rx_position();
    CHECK(rx[0] == doctest::Approx(0.86 * std::sin(theta)));
    CHECK(rx[1] == doctest::Approx(0.86 * std::cos(theta)));

    // Independent route through the expanded quadratic.
    const element_offset o{0.002, -0.0015};
    const double expected = std::sqrt(0.86 * 0.86 - 2.0 * 0.86 * std::sin(theta) * o.dx +
                                      o.dx * o.dx + o.dz * o.dz);
    CHECK(element_distance(scenario, o) == doctest::Approx(expected).epsilon(1e-14));

    // Moving toward the receiver shortens the path off-broadside.
    CHECK(element_distance(scenario, {0.002, 0.0}) < 0.86);
}
