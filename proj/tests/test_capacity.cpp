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

#include "psoam/capacity.hpp"
#include "psoam/rng.hpp"

using namespace psoam;
using Catch::Approx;

namespace {

double equal_power_capacity(const std::vector<double> &sv, double p, double s2)
{
    int active = 0;
    for (double nu : sv)
        if (nu > 0.0)
            ++active;
    double c = 0.0;
    for (double nu : sv)
        if (nu > 0.0)
            c += std::log2(1.0 + nu * nu * (p / active) / s2);
    return c;
}

SweepScenario benchmark_sweep(ChannelKind kind)
{
    SweepScenario sc;
    sc.kind = kind;
    sc.wavelength_m = kSpeedOfLight / 10e9;
    sc.rx_aperture_m = 20.0 * sc.wavelength_m / kPi;
    sc.tx_aperture_m = 20.0 * sc.wavelength_m / kPi;
    sc.tx_layout = kind == ChannelKind::Mimo ? TxLayout::Ula : TxLayout::Coaxial;
    sc.target_snr_db = 30.0;
    if (kind == ChannelKind::MgMimo)
        sc.mode_groups = {ModeGroup::consecutive(1, 10), ModeGroup::consecutive(11, 20)};
    if (kind == ChannelKind::PsoamMimo)
        sc.psoam_orders = {-5, 5};
    sc.distances_wavelengths = log_spaced(10.0, 2000.0, 400);
    return sc;
}

} // namespace

TEST_CASE("waterfill - degenerate splits")
{
    // single subchannel takes everything
    const auto one = waterfill({2.0}, 5.0, 1.0);
    CHECK(one.per_channel[0] == Approx(5.0).epsilon(1e-12));

    // two equal gains split evenly
    const auto two = waterfill({1.5, 1.5}, 4.0, 1.0);
    CHECK(two.per_channel[0] == Approx(2.0).margin(1e-9));
    CHECK(two.per_channel[1] == Approx(2.0).margin(1e-9));

    CHECK_THROWS_WITH(waterfill({0.0, 0.0}, 1.0, 1.0),
                      Catch::Matchers::ContainsSubstring("rank-zero"));
}

TEST_CASE("waterfill - grid-search oracle for nu = (1, 0.1)")
{
    // brute-force over the split: all power goes to the strong channel
    // (the weak one needs mu > 100 to activate, but mu = P + 1 = 2)
    double best_p1 = -1.0, best_c = -1.0;
    for (int i = 0; i <= 100000; ++i)
    {
        const double p1 = static_cast<double>(i) / 100000.0;
        const double c = std::log2(1.0 + p1) + std::log2(1.0 + 0.01 * (1.0 - p1));
        if (c > best_c)
        {
            best_c = c;
            best_p1 = p1;
        }
    }
    const auto alloc = waterfill({1.0, 0.1}, 1.0, 1.0);
    CHECK(alloc.per_channel[0] == Approx(best_p1).margin(1e-4));
    CHECK(alloc.per_channel[1] == Approx(1.0 - best_p1).margin(1e-4));
    CHECK(alloc.per_channel[0] + alloc.per_channel[1] == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("waterfill - KKT conditions on random channels")
{
    Rng rng(31);
    for (int it = 0; it < 1000; ++it)
    {
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        std::vector<double> sv(static_cast<std::size_t>(n));
        for (auto &nu : sv)
            nu = rng.uniform() * 2.0 + 0.01;
        const double p = rng.uniform() * 10.0 + 0.1;
        const double s2 = rng.uniform() + 0.1;
        const auto alloc = waterfill(sv, p, s2);

        double sum = 0.0;
        for (std::size_t k = 0; k < sv.size(); ++k)
        {
            sum += alloc.per_channel[k];
            const double floor_k = s2 / (sv[k] * sv[k]);
            if (alloc.per_channel[k] > 1e-12 * p)
                // active: P_k + sigma^2/nu_k^2 equals the common water level
                CHECK(alloc.per_channel[k] + floor_k ==
                      Approx(alloc.water_level).epsilon(1e-9).margin(1e-9));
            else
                // inactive: the floor is above the water
                CHECK(floor_k >= alloc.water_level * (1.0 - 1e-9));
        }
        CHECK(sum == Approx(p).epsilon(1e-9));
    }
}

TEST_CASE("capacity - SISO closed form")
{
    Eigen::MatrixXcd h(1, 1);
    h(0, 0) = std::complex<double>(0.03, 0.04); // |h|^2 = 2.5e-3
    const double p = 1000.0 / 2.5e-3;           // P|h|^2/s2 = 1000
    CHECK(capacity_bits(h, p, 1.0) == Approx(std::log2(1001.0)).epsilon(1e-12));
    CHECK(capacity_bits(h, p, 1.0) == Approx(9.967226258835993).epsilon(1e-12));
}

TEST_CASE("capacity - two orthogonal equal columns give CG 2")
{
    // columns orthogonal with per-subchannel SNR 1000 each:
    // H = g * [[1, 1], [1, -1]], nu^2 = 2 g^2; with P split evenly the
    // per-channel SNR is g^2 P, so pick P = 1000/g^2
    const double g = 1e-3;
    Eigen::MatrixXcd h(2, 2);
    h << g, g, g, -g;
    const double p = 1000.0 / (g * g);
    const double c = capacity_bits(h, p, 1.0);
    CHECK(c == Approx(2.0 * std::log2(1001.0)).epsilon(1e-12));
    CHECK(c / std::log2(1001.0) == Approx(2.0).epsilon(1e-12));
}

TEST_CASE("capacity - rank-1 matrix equals the composite scalar channel")
{
    // rank-1 H: capacity equals a 1x1 channel with nu = ||H||_2
    Eigen::MatrixXcd h(2, 2);
    const std::complex<double> a(3e-4, 1e-4), b(-2e-4, 5e-4);
    h << a, 2.0 * a, b, 2.0 * b; // columns proportional
    const double p = 1e7;
    const auto sv = singular_values_of(h);
    Eigen::MatrixXcd h1(1, 1);
    h1(0, 0) = sv[0];
    CHECK(capacity_bits(h, p, 1.0) == Approx(capacity_bits(h1, p, 1.0)).epsilon(1e-10));
    CHECK_THROWS_WITH(capacity_bits(Eigen::MatrixXcd::Zero(2, 2), 1.0, 1.0),
                      Catch::Matchers::ContainsSubstring("rank-zero"));
}

TEST_CASE("capacity - water-filling beats equal power on random matrices")
{
    Rng rng(32);
    for (int it = 0; it < 1000; ++it)
    {
        const int n = 2 + static_cast<int>(rng.next_u64() % 3);
        Eigen::MatrixXcd h(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                h(r, c) = std::complex<double>(rng.gaussian(), rng.gaussian());
        const double p = rng.uniform() * 100.0 + 1.0;
        const auto sv = singular_values_of(h);
        CHECK(capacity_bits(h, p, 1.0) >= equal_power_capacity(sv, p, 1.0) - 1e-9);
    }
}

TEST_CASE("capacity - invariance under unit scalar and permutations")
{
    Rng rng(33);
    Eigen::MatrixXcd h(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            h(r, c) = std::complex<double>(rng.gaussian(), rng.gaussian());
    const double p = 50.0;
    const double base = capacity_bits(h, p, 1.0);

    const std::complex<double> u = std::polar(1.0, 1.234);
    CHECK(capacity_bits((u * h).eval(), p, 1.0) == Approx(base).epsilon(1e-10));

    Eigen::PermutationMatrix<3> perm;
    perm.setIdentity();
    perm.applyTranspositionOnTheRight(0, 2);
    CHECK(capacity_bits((perm * h).eval(), p, 1.0) == Approx(base).epsilon(1e-10));
    CHECK(capacity_bits((h * perm).eval(), p, 1.0) == Approx(base).epsilon(1e-10));
}

TEST_CASE("capacity_gain_sweep - capacity-gain peak anchors of the benchmark geometry")
{
    const auto mg = capacity_gain_sweep(benchmark_sweep(ChannelKind::MgMimo));
    const auto mimo = capacity_gain_sweep(benchmark_sweep(ChannelKind::Mimo));
    const auto psoam = capacity_gain_sweep(benchmark_sweep(ChannelKind::PsoamMimo));

    const auto peak = [](const CapacityCurve &c) {
        double m = 0.0;
        for (const auto &p : c.points)
            m = std::max(m, p.cg);
        return m;
    };

    CHECK(peak(mg) == Approx(2.6).margin(0.15));
    CHECK(peak(mimo) == Approx(2.0).margin(0.05));
    CHECK(peak(psoam) == Approx(2.0).margin(0.05));

    // fully-orthogonal coaxial limit: 2*log2(1 + Q*SNR)/log2(1 + SNR)
    CHECK(2.0 * std::log2(1.0 + 10.0 * 1000.0) / std::log2(1.0 + 1000.0) ==
          Approx(2.666).margin(5e-4));

    // the 2x2 CG never exceeds the orthogonal limit anywhere on the grid
    const double limit = 2.0 * std::log2(1.0 + 10.0 * 1000.0) / std::log2(1.0 + 1000.0);
    for (const auto &p : mg.points)
        CHECK(p.cg <= limit + 1e-9);
}

TEST_CASE("distance_at_cg - crossings of the benchmark mode-group pairs")
{
    // reference crossings: 328/655/993 wavelengths for dl_e = 10/21/31
    auto sc = benchmark_sweep(ChannelKind::MgMimo);
    const auto c12 = capacity_gain_sweep(sc);
    CHECK(distance_at_cg(c12, 2.0) == Approx(328.0).epsilon(0.10));

    sc.mode_groups = {ModeGroup::consecutive(11, 20), ModeGroup::consecutive(-10, -1)};
    const auto c23 = capacity_gain_sweep(sc);
    CHECK(distance_at_cg(c23, 2.0) == Approx(655.0).epsilon(0.10));

    sc.mode_groups = {ModeGroup::consecutive(11, 20), ModeGroup::consecutive(-20, -11)};
    const auto c24 = capacity_gain_sweep(sc);
    CHECK(distance_at_cg(c24, 2.0) == Approx(993.0).epsilon(0.10));

    // larger vorticity difference at equal Q reaches farther
    CHECK(distance_at_cg(c12, 2.0) < distance_at_cg(c23, 2.0));
    CHECK(distance_at_cg(c23, 2.0) < distance_at_cg(c24, 2.0));
}

TEST_CASE("distance_at_cg - unreachable targets are reported")
{
    const auto curve = capacity_gain_sweep(benchmark_sweep(ChannelKind::MgMimo));
    CHECK_THROWS_WITH(distance_at_cg(curve, 5.0),
                      Catch::Matchers::ContainsSubstring("unreachable"));
}

TEST_CASE("sweep - grid validation")
{
    auto sc = benchmark_sweep(ChannelKind::Mimo);
    sc.distances_wavelengths.clear();
    CHECK_THROWS_AS(capacity_gain_sweep(sc), std::invalid_argument);
    sc.distances_wavelengths = {10.0, 9.0};
    CHECK_THROWS_AS(capacity_gain_sweep(sc), std::invalid_argument);
    CHECK_THROWS_AS(log_spaced(10.0, 5.0, 10), std::invalid_argument);
}
