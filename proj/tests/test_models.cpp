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

#include <cmath>

#include "crossfield/common.hpp"
#include "crossfield/models.hpp"
#include "crossfield/rng.hpp"

using namespace crossfield;

namespace
{
    // Fitted reference parameter set for the 64x64 / 0.86 m layout.
    cross_field_params reference_params()
    {
        return {0.4459, 1.3295, 1.1433, 0.8885, 1.2318};
    }

    constexpr double lambda_290 = speed_of_light / 290e9; // 1.0337671e-3 m
} // namespace

TEST_CASE("friis_fspl: reference values")
{
    CHECK(friis_fspl(0.8600, 1e-3) == doctest::Approx(80.6742).epsilon(1.3e-5));
    CHECK(friis_fspl(0.8603, 1e-3) == doctest::Approx(80.6772).epsilon(1.3e-5));
    CHECK(friis_fspl(0.7829, lambda_290) == doctest::Approx(79.56).epsilon(2.6e-4));

    // d = lambda / (4 pi) is the 0 dB reference point.
    const double lambda = 2e-3;
    CHECK(friis_fspl(lambda / (4.0 * pi), lambda) == doctest::Approx(0.0).scale(1.0));

    CHECK_THROWS_AS(friis_fspl(0.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(friis_fspl(-1.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(friis_fspl(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(friis_fspl(1.0, std::nan("")), std::invalid_argument);
}

TEST_CASE("rayleigh_distance: deployment presets")
{
    const double d16 = build_upa(16, 16, 0.0005).aperture();
    const double d32 = build_upa(32, 32, 0.0005).aperture();
    const double d64 = build_upa(64, 64, 0.0005).aperture();

    CHECK(rayleigh_distance(d16, lambda_290) == doctest::Approx(0.21765).epsilon(1e-4));
    CHECK(rayleigh_distance(d32, lambda_290) == doctest::Approx(0.92961).epsilon(1e-4));
    CHECK(rayleigh_distance(d64, lambda_290) == doctest::Approx(3.8394).epsilon(1e-4));

    // The 16x16 boundary is well inside 0.86 m, the 64x64 one well beyond.
    CHECK(rayleigh_distance(d16, lambda_290) < 0.86);
    CHECK(rayleigh_distance(d64, lambda_290) > 0.86);

    // cos^2 collapses the boundary at grazing angles.
    CHECK(rayleigh_distance(d64, lambda_290, pi / 2.0) < 1e-25);
    CHECK(rayleigh_distance(d64, lambda_290, 0.5) ==
          doctest::Approx(rayleigh_distance(d64, lambda_290) * std::cos(0.5) * std::cos(0.5)));

    CHECK(rayleigh_distance(0.0, lambda_290) == 0.0);
    CHECK_THROWS_AS(rayleigh_distance(0.01, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rayleigh_distance(0.01, lambda_290, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(rayleigh_distance(0.01, lambda_290, 2.0), std::invalid_argument);
}

TEST_CASE("max_phase_error: broadside presets against the exact-geometry oracle")
{
    const scenario_geometry s16 = make_scenario(build_upa(16, 16, 0.0005), 0.86);
    const scenario_geometry s32 = make_scenario(build_upa(32, 32, 0.0005), 0.86);
    const scenario_geometry s64 = make_scenario(build_upa(64, 64, 0.0005), 0.86);

    const double e16 = max_phase_error(s16, lambda_290);
    const double e32 = max_phase_error(s32, lambda_290);
    const double e64 = max_phase_error(s64, lambda_290);

    CHECK(e16 == doctest::Approx(0.0994).epsilon(5e-3));
    CHECK(e32 == doctest::Approx(0.4245).epsilon(5e-3));
    CHECK(e64 == doctest::Approx(1.7529).epsilon(5e-3));

    CHECK(e16 < pi / 8.0);
    CHECK(e32 > pi / 8.0);
    CHECK(e64 > pi / 8.0);

    // Broadside reduces to 2 pi / lambda * max corner excess.
    double excess = 0.0;
    for (const element_offset &o : s64.upa.offsets)
        excess = std::max(excess, element_distance(s64, o) - s64.d0);
    CHECK(e64 == doctest::Approx(two_pi * excess / lambda_290).epsilon(1e-12));
}

TEST_CASE("max_phase_error: vanishes in the far-field limit")
{
    const scenario_geometry far = make_scenario(build_upa(16, 16, 0.0005), 1e6);
    CHECK(max_phase_error(far, lambda_290) < 1e-6);
}

TEST_CASE("max_phase_error: approximately pi/8 exactly at the Rayleigh distance")
{
    const upa_geometry upa = build_upa(64, 64, 0.0005);
    const double r = rayleigh_distance(upa.aperture(), lambda_290);
    const scenario_geometry at_boundary = make_scenario(upa, r);
    const double e = max_phase_error(at_boundary, lambda_290);
    CHECK(std::abs(e - pi / 8.0) <= 0.05 * pi / 8.0);
}

TEST_CASE("classify_region: presets match the deployment table")
{
    const scenario_geometry s16 = make_scenario(build_upa(16, 16, 0.0005), 0.86);
    const scenario_geometry s32 = make_scenario(build_upa(32, 32, 0.0005), 0.86);
    const scenario_geometry s64 = make_scenario(build_upa(64, 64, 0.0005), 0.86);

    CHECK(classify_region(s16, lambda_290).region == field_region::far_field);
    CHECK(classify_region(s32, lambda_290).region == field_region::boundary);
    CHECK(classify_region(s64, lambda_290).region == field_region::near_field);

    CHECK(to_string(classify_region(s32, lambda_290).region) == "Boundary");
    CHECK(field_region_from_string("NF") == field_region::near_field);
    CHECK_THROWS_AS(field_region_from_string("midfield"), std::invalid_argument);
}

TEST_CASE("classify_region: band edges")
{
    const upa_geometry upa = build_upa(32, 32, 0.0005);
    const double r = rayleigh_distance(upa.aperture(), lambda_290);

    CHECK(classify_region(make_scenario(upa, 1.151 * r), lambda_290).region ==
          field_region::far_field);
    CHECK(classify_region(make_scenario(upa, 1.149 * r), lambda_290).region ==
          field_region::boundary);
    CHECK(classify_region(make_scenario(upa, 0.851 * r), lambda_290).region ==
          field_region::boundary);
    CHECK(classify_region(make_scenario(upa, 0.849 * r), lambda_290).region ==
          field_region::near_field);

    // A wider band swallows the 32x32 boundary case into Boundary even at
    // half the Rayleigh distance.
    CHECK(classify_region(make_scenario(upa, 0.5 * r), lambda_290, 0.6).region ==
          field_region::boundary);
}

TEST_CASE("cross_field_factor: reference parameter values")
{
    const cross_field_params p = reference_params();

    const double k_center = cross_field_factor(0.0, 0.0, lambda_290, 0.86, p);
    CHECK(k_center == doctest::Approx(1.7558).epsilon(1e-4));
    CHECK(p.d_ref * k_center == doctest::Approx(0.7829).epsilon(6e-4));

    const double k_corner = cross_field_factor(0.01575, 0.01575, lambda_290, 0.86, p);
    CHECK(k_corner == doctest::Approx(1.8621).epsilon(6e-4));

    // K -> 1 as the transition term dominates.
    cross_field_params fast_transition = p;
    fast_transition.c2 = 1e6;
    CHECK(cross_field_factor(0.0, 0.0, lambda_290, 0.86, fast_transition) ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("cross_field_pl: reference parameter values")
{
    const cross_field_params p = reference_params();

    CHECK(cross_field_pl(0.0, 0.0, lambda_290, 0.86, p) == doctest::Approx(79.56).epsilon(2.6e-4));
    CHECK(cross_field_pl(0.01575, 0.01575, lambda_290, 0.86, p) ==
          doctest::Approx(80.08).epsilon(1.3e-3));

    // Identical to Friis at the inflated distance.
    const double k = cross_field_factor(0.004, -0.002, lambda_290, 0.86, p);
    CHECK(cross_field_pl(0.004, -0.002, lambda_290, 0.86, p) ==
          doctest::Approx(friis_fspl(p.d_ref * k, lambda_290)).epsilon(1e-14));
}

TEST_CASE("cross_field_pl: c1 -> 1+ with a bounded exponent tends to Friis at 2 d_ref")
{
    cross_field_params p = reference_params();
    p.c1 = 1.0 + 1e-9;
    const double pl = cross_field_pl(0.0, 0.0, lambda_290, 0.86, p);
    CHECK(pl == doctest::Approx(friis_fspl(2.0 * p.d_ref, lambda_290)).epsilon(1e-9));
}

TEST_CASE("cross_field_factor: monotonicity and elliptic level sets")
{
    const cross_field_params p = reference_params();

    double prev = cross_field_factor(0.0, 0.0, lambda_290, 0.86, p);
    for (double dx = 0.002; dx <= 0.016; dx += 0.002)
    {
        const double k = cross_field_factor(dx, 0.0, lambda_290, 0.86, p);
        CHECK(k > prev);
        prev = k;
    }

    CHECK(cross_field_factor(0.01, 0.01, lambda_290, 0.5, p) >
          cross_field_factor(0.01, 0.01, lambda_290, 0.86, p));

    // (dx/c3)^2 + (dz/c4)^2 = const defines a level set.
    for (double t : {0.001, 0.005, 0.02})
    {
        const double k_x = cross_field_factor(p.c3 * t, 0.0, lambda_290, 0.86, p);
        const double k_z = cross_field_factor(0.0, p.c4 * t, lambda_290, 0.86, p);
        CHECK(k_x == doctest::Approx(k_z).epsilon(1e-12));
    }

    // With c3 < c4 the loss climbs faster along x.
    CHECK(cross_field_factor(0.01, 0.0, lambda_290, 0.86, p) >
          cross_field_factor(0.0, 0.01, lambda_290, 0.86, p));

    // Center element carries the least model loss.
    const double pl_center = cross_field_pl(0.0, 0.0, lambda_290, 0.86, p);
    gaussian_stream g(11);
    for (int i = 0; i < 64; ++i)
    {
        const double dx = 0.01 * g.next();
        const double dz = 0.01 * g.next();
        if (dx == 0.0 && dz == 0.0)
            continue;
        CHECK(cross_field_pl(dx, dz, lambda_290, 0.86, p) > pl_center);
    }
}

TEST_CASE("cross_field_factor: degeneracy transform leaves K unchanged")
{
    const cross_field_params p = reference_params();
    splitmix64 rng(404);
    for (int i = 0; i < 2000; ++i)
    {
        const double dx = 0.05 * (rng.next_unit() - 0.5);
        const double dz = 0.05 * (rng.next_unit() - 0.5);
        const double lambda = 5e-4 + 1.5e-3 * rng.next_unit();
        const double d0 = 0.1 + 5.0 * rng.next_unit();
        const double s = 0.25 + 3.75 * rng.next_unit();

        cross_field_params q;
        q.d_ref = p.d_ref;
        q.c1 = std::pow(p.c1, s);
        q.c2 = p.c2 / s;
        q.c3 = p.c3 * std::sqrt(s);
        q.c4 = p.c4 * std::sqrt(s);

        const double k_p = cross_field_factor(dx, dz, lambda, d0, p);
        const double k_q = cross_field_factor(dx, dz, lambda, d0, q);
        CHECK(std::abs(k_p - k_q) <= 1e-10 * k_p);
    }
}

TEST_CASE("cross_field_factor: exponent clamp reports saturation")
{
    cross_field_params p = reference_params();
    bool saturated = false;
    const double k = cross_field_factor(10.0, 10.0, 1e-9, 0.86, p, &saturated);
    CHECK(saturated);
    CHECK(std::isfinite(k));
    CHECK(k > 1.0);

    saturated = true;
    cross_field_factor(0.0, 0.0, lambda_290, 0.86, p, &saturated);
    CHECK_FALSE(saturated);
}

TEST_CASE("cross_field_params: validation")
{
    cross_field_params p = reference_params();
    CHECK_NOTHROW(p.validate());

    cross_field_params bad = p;
    bad.c1 = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.d_ref = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.c3 = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.c2 = std::nan("");
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.c4 = 0.0;
    CHECK_THROWS_AS(cross_field_factor(0.0, 0.0, lambda_290, 0.86, bad), std::invalid_argument);
}
