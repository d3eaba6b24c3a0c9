// SPDX-License-Identifier: Apache-2.0
//
// psoamsim - plane spiral OAM mode-group MIMO link simulator
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

#include <catch2/catch_amalgamated.hpp>

#include "psoam/geometry.hpp"
#include "psoam/rng.hpp"

using namespace psoam;

TEST_CASE("element_positions - receive ULA placement")
{
    // A_r = 0.6 m at D = 5 m: receivers at (5, -0.3) and (5, +0.3),
    // most-negative transverse coordinate first
    const auto geom = LinkGeometry::coaxial(2, 2, 0.6, 5.0, 0.03);
    const auto rx = element_positions(geom, Side::Rx);
    REQUIRE(rx.size() == 2);
    CHECK(rx[0].x == 5.0);
    CHECK(rx[0].y == -0.3);
    CHECK(rx[1].x == 5.0);
    CHECK(rx[1].y == 0.3);
}

TEST_CASE("element_positions - coaxial transmit stack")
{
    const auto geom = LinkGeometry::coaxial(2, 2, 0.6, 5.0, 0.03);
    const auto tx = element_positions(geom, Side::Tx);
    REQUIRE(tx.size() == 2);
    for (const auto &p : tx)
    {
        CHECK(p.x == 0.0);
        CHECK(p.y == 0.0);
    }
}

TEST_CASE("element_positions - singleton sits at the centroid")
{
    const auto geom = LinkGeometry::ula(1, 1, 0.0, 0.0, 5.0, 0.03);
    const auto rx = element_positions(geom, Side::Rx);
    REQUIRE(rx.size() == 1);
    CHECK(rx[0].x == 5.0);
    CHECK(rx[0].y == 0.0);
}

TEST_CASE("element_positions - ULA span and centering")
{
    const auto geom = LinkGeometry::ula(5, 7, 0.35, 0.85, 10.0, 0.03);
    for (Side side : {Side::Tx, Side::Rx})
    {
        const auto pts = element_positions(geom, side);
        const double aperture = side == Side::Tx ? 0.35 : 0.85;
        CHECK(pts.back().y - pts.front().y == Catch::Approx(aperture).margin(1e-15));
        double mean = 0.0;
        for (const auto &p : pts)
            mean += p.y;
        mean /= static_cast<double>(pts.size());
        CHECK(std::abs(mean) <= 1e-12 * aperture);
    }
}

TEST_CASE("path_distance - fixed values")
{
    CHECK(path_distance({0, 0}, {5, 0}) == 5.0);
    CHECK(path_distance({0, 0}, {3, 4}) == 5.0); // 3-4-5 triangle
    // hypot(5, 0.3), evaluated independently
    CHECK(path_distance({0, 0}, {5, 0.3}) == Catch::Approx(5.008991914547278).epsilon(1e-15));
}

TEST_CASE("path_distance - symmetry, identity and triangle inequality")
{
    Rng rng(11);
    for (int it = 0; it < 200; ++it)
    {
        const Point2 a{rng.uniform() * 10 - 5, rng.uniform() * 10 - 5};
        const Point2 b{rng.uniform() * 10 - 5, rng.uniform() * 10 - 5};
        const Point2 c{rng.uniform() * 10 - 5, rng.uniform() * 10 - 5};
        CHECK(path_distance(a, b) == path_distance(b, a));
        CHECK(path_distance(a, a) == 0.0);
        CHECK(path_distance(a, c) <= path_distance(a, b) + path_distance(b, c) + 1e-12);
    }
}

TEST_CASE("azimuth_from_tx - reference angles")
{
    CHECK(azimuth_from_tx({0, 0}, {5, 0}) == 0.0); // boresight
    CHECK(azimuth_from_tx({0, 0}, {0, 1}) == Catch::Approx(kPi / 2).epsilon(1e-15));
    CHECK(azimuth_from_tx({0, 0}, {5, 0.3}) ==
          Catch::Approx(0.05992815512120788).epsilon(1e-15));
}

TEST_CASE("azimuth_from_tx - range and mirror symmetry")
{
    CHECK_THROWS_AS(azimuth_from_tx({1, 2}, {1, 2}), std::invalid_argument);
    // (-pi, pi]: straight backwards maps to +pi
    CHECK(azimuth_from_tx({0, 0}, {-1, 0}) == kPi);

    Rng rng(12);
    for (int it = 0; it < 200; ++it)
    {
        const Point2 tx{rng.uniform(), rng.uniform() - 0.5};
        const Point2 rx{tx.x + rng.uniform() + 0.1, tx.y + rng.uniform() - 0.5};
        const Point2 mirrored{rx.x, 2 * tx.y - rx.y};
        CHECK(azimuth_from_tx(tx, mirrored) == Catch::Approx(-azimuth_from_tx(tx, rx)).margin(1e-15));
    }
}

TEST_CASE("rayleigh_distance - reference geometries")
{
    // A_r = 20*lambda/pi: 2*A^2/lambda = 800/pi^2 = 81.057 lambda (reported 81.1)
    const double lam = 0.03;
    const double a = 20.0 * lam / kPi;
    CHECK(rayleigh_distance(a, lam) / lam == Catch::Approx(81.05694691387023).epsilon(1e-12));

    const double lam102 = kSpeedOfLight / 10.2e9; // 0.029391 m
    CHECK(rayleigh_distance(0.35, lam102) == Catch::Approx(8.33576673900182).epsilon(1e-12));
    CHECK(rayleigh_distance(0.85, lam102) == Catch::Approx(49.16401199125563).epsilon(1e-12));
}

TEST_CASE("rayleigh_distance - exact quadratic scaling in aperture")
{
    Rng rng(13);
    for (int it = 0; it < 100; ++it)
    {
        const double a = rng.uniform() + 0.1;
        const double lam = rng.uniform() * 0.1 + 0.01;
        CHECK(rayleigh_distance(2.0 * a, lam) == 4.0 * rayleigh_distance(a, lam));
    }
}

TEST_CASE("geometry validation")
{
    LinkGeometry g;
    g.distance_m = 0.0;
    g.wavelength_m = 0.03;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    CHECK_THROWS_AS(LinkGeometry::coaxial(2, 2, -0.1, 5.0, 0.03), std::invalid_argument);
    CHECK_THROWS_AS(LinkGeometry::ula(2, 2, 0.3, 0.3, 5.0, 0.0), std::invalid_argument);
}
