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
#include <complex>

#include "psoam/pasr.hpp"

using namespace psoam;
using Catch::Approx;

TEST_CASE("pasr_aperture - reference operating points")
{
    // 2D tan(pi/(2 dl_e)): 1.2997 m at (2 m, 5); 6.498 m at (10 m, 5);
    // 0.3927 m at (10 m, 80)
    CHECK(pasr_aperture(2.0, 5.0) == Approx(1.2996787849316251).epsilon(1e-12));
    CHECK(pasr_aperture(10.0, 5.0) == Approx(6.498393924658126).epsilon(1e-12));
    CHECK(pasr_aperture(10.0, 80.0) == Approx(0.3927495554275395).epsilon(1e-12));
    CHECK_THROWS_WITH(pasr_aperture(2.0, 0.0), Catch::Matchers::ContainsSubstring("PASR undefined"));
}

TEST_CASE("pasr_aperture - monotone decreasing in the order difference")
{
    double prev = pasr_aperture(10.0, 2.0);
    for (double dle = 3.0; dle <= 40.0; dle += 1.0)
    {
        const double a = pasr_aperture(10.0, dle);
        CHECK(a < prev);
        prev = a;
    }
}

TEST_CASE("pasr_placement - the worked two-receiver example")
{
    // dl_e = 5, N_r = 2: phi_s = 2 pi / 10 = 36 degrees exactly
    const auto arr = pasr_placement(2.0, 5.0, 2, {2.5, -2.5});
    CHECK(arr.phi_s_rad == 2.0 * kPi / 10.0);
    CHECK(arr.phi_s_rad * 180.0 / kPi == Approx(36.0).epsilon(1e-14));
    REQUIRE(arr.azimuths_rad.size() == 2);
    CHECK(arr.azimuths_rad[0] == Approx(-kPi / 10.0).epsilon(1e-14));
    CHECK(arr.azimuths_rad[1] == Approx(+kPi / 10.0).epsilon(1e-14));

    // equivalent linear aperture agrees with pasr_aperture
    CHECK(arr.equivalent_aperture_m() == Approx(pasr_aperture(2.0, 5.0)).epsilon(1e-12));

    // receivers sit on the arc: equal range D
    for (const auto &p : arr.positions())
        CHECK(std::hypot(p.x, p.y) == Approx(2.0).epsilon(1e-14));

    // the demux shift sets of the dl_e = 5 pair are {90, 0} and {0, 90} deg
    REQUIRE(arr.phase_shift_sets.size() == 2);
    CHECK(arr.phase_shift_sets[0][0] == Approx(kPi / 2).epsilon(1e-12));
    CHECK(arr.phase_shift_sets[0][1] == Approx(0.0).margin(1e-15));
    CHECK(arr.phase_shift_sets[1][0] == Approx(0.0).margin(1e-15));
    CHECK(arr.phase_shift_sets[1][1] == Approx(kPi / 2).epsilon(1e-12));

    CHECK(pasr_placement(2.0, 2.0, 2).phi_s_rad == Approx(kPi / 2).epsilon(1e-14)); // 90 deg
    CHECK_THROWS_AS(pasr_placement(2.0, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(pasr_placement(2.0, 5.0, 1), std::invalid_argument);
}

TEST_CASE("orthogonality_sum - the dl_e = 5 pair nulls at the PASR samples")
{
    const auto mg1 = ModeGroup::consecutive(1, 4);
    const auto mg2 = ModeGroup::consecutive(-4, -1);
    const auto arr = pasr_placement(2.0, 5.0, 2);

    const auto sum = orthogonality_sum(mg1, mg2, arr);
    // gamma * N_r scale: the self inner product
    const auto self_scale = std::abs(orthogonality_sum(mg1, mg1, arr));
    CHECK(std::abs(sum) < 1e-10 * self_scale);

    // self inner product is real, positive, and equals sum |BP|^2
    const auto self = orthogonality_sum(mg1, mg1, arr);
    CHECK(self.real() > 0.0);
    CHECK(std::abs(self.imag()) < 1e-14 * self.real());
    double direct = 0.0;
    for (double phi : arr.azimuths_rad)
        direct += std::norm(beam_pattern(mg1, phi));
    CHECK(self.real() == Approx(direct).epsilon(1e-12));
}

TEST_CASE("orthogonality_sum - non-matching interval stays nonzero")
{
    // dl_e = 3 sampled on a delta = 5 arc: direct evaluation, no null
    const auto mg1 = ModeGroup::consecutive(1, 2);  // l_e = 1.5
    const auto mg2 = ModeGroup::consecutive(-2, -1); // l_e = -1.5
    auto arr = pasr_placement(2.0, 3.0, 2, {}, 5.0); // delta forced to 5
    std::complex<double> direct{0.0, 0.0};
    for (double phi : arr.azimuths_rad)
        direct += beam_pattern(mg1, phi) * std::conj(beam_pattern(mg2, phi));
    const auto sum = orthogonality_sum(mg1, mg2, arr);
    CHECK(std::abs(sum - direct) < 1e-14);
    CHECK(std::abs(sum) > 0.1);
}

TEST_CASE("orthogonality_sum - roots-of-unity nulls across k' and N_r")
{
    // single-mode groups have constant gain on the arc, so the sum is the
    // pure DFT: zero whenever k' = dl_e/delta is a nonzero integer that is
    // not a multiple of N_r, and gamma*N_r when the alias k' = 0 mod N_r
    for (int n_rx : {2, 3, 4})
        for (int kprime : {1, 2, 3})
        {
            const int dle = 5 * kprime;
            const auto mg1 = ModeGroup::single(dle); // l_e difference = dle
            const auto mg2 = ModeGroup::single(0);
            const auto arr = pasr_placement(1.0, static_cast<double>(dle), n_rx, {},
                                            /*delta=*/5.0);
            const auto sum = orthogonality_sum(mg1, mg2, arr);
            if (kprime % n_rx != 0)
                CHECK(std::abs(sum) < 1e-10 * n_rx);
            else
                CHECK(std::abs(sum) == Approx(static_cast<double>(n_rx)).epsilon(1e-12));
        }

    // consecutive equal-Q pairs at N_r = 2 null for odd k' (symmetric
    // placement makes the two samples equal-gain)
    for (int kprime : {1, 3})
    {
        const int dle = 5 * kprime;
        const auto mg1 = ModeGroup::consecutive(1, 4);
        std::vector<PsoamMode> shifted;
        for (int l = 1; l <= 4; ++l)
            shifted.push_back({l - dle, 1.0, 0.0});
        const ModeGroup mg2(std::move(shifted)); // same Q, l_e difference dle
        const auto arr = pasr_placement(1.0, static_cast<double>(dle), 2, {}, 5.0);
        const auto scale = std::abs(orthogonality_sum(mg1, mg1, arr));
        CHECK(std::abs(orthogonality_sum(mg1, mg2, arr)) < 1e-10 * scale);
    }
}

TEST_CASE("analog_combine - alignment and linearity")
{
    using cd = std::complex<double>;
    const std::vector<cd> plain{{1.0, 0.0}, {0.0, 1.0}};
    const std::vector<double> zero{0.0, 0.0};
    CHECK(std::abs(analog_combine(plain, zero) - cd(1.0, 1.0)) < 1e-15);

    // shifts (0, 90 deg) on inputs (1, j): 1 + j*e^{-j pi/2} = 2
    const std::vector<double> quarter{0.0, kPi / 2};
    CHECK(std::abs(analog_combine(plain, quarter) - cd(2.0, 0.0)) < 1e-15);

    // linearity in the received samples
    const std::vector<cd> a{{0.3, -0.2}, {1.1, 0.4}};
    const std::vector<cd> b{{-0.7, 0.9}, {0.2, 0.1}};
    std::vector<cd> apb(2);
    for (int i = 0; i < 2; ++i)
        apb[static_cast<std::size_t>(i)] =
            a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)];
    const auto lhs = analog_combine(apb, quarter);
    const auto rhs = analog_combine(a, quarter) + analog_combine(b, quarter);
    CHECK(std::abs(lhs - rhs) < 1e-15);

    CHECK_THROWS_AS(analog_combine(a, std::vector<double>{0.0}), std::invalid_argument);
}

TEST_CASE("crosstalk_db - measured power-matrix arithmetic")
{
    // dBm bookkeeping from the bench: unexpected -60.39 dBm over expected
    // -39.82 dBm is -20.57 dB
    PowerTransferMatrix ptm;
    ptm.linear.resize(2, 2);
    ptm.linear(0, 0) = std::pow(10.0, -39.82 / 10.0);
    ptm.linear(1, 0) = std::pow(10.0, -60.39 / 10.0);
    ptm.linear(0, 1) = std::pow(10.0, -62.9 / 10.0);
    ptm.linear(1, 1) = std::pow(10.0, -40.8 / 10.0);
    const auto ct = crosstalk_db(ptm);
    CHECK(ct[0] == Approx(-20.57).margin(5e-3));
    CHECK(ct[1] == Approx(-22.1).margin(5e-3));

    // equal powers: 0 dB
    ptm.linear.setOnes();
    CHECK(crosstalk_db(ptm)[0] == Approx(0.0).margin(1e-12));

    ptm.linear(0, 0) = 0.0;
    CHECK_THROWS_WITH(crosstalk_db(ptm), Catch::Matchers::ContainsSubstring("expected"));
}

TEST_CASE("pasr_experiment - ideal arrangement nulls to machine precision")
{
    const auto mg1 = ModeGroup::consecutive(1, 4);
    const auto mg2 = ModeGroup::consecutive(-4, -1);
    const auto ptm = pasr_experiment(mg1, mg2, 2.0, kSpeedOfLight / 10.2e9, {0.0, 0.0, 0});
    const auto ct = crosstalk_db(ptm);
    CHECK(ct[0] <= -200.0);
    CHECK(ct[1] <= -200.0);
}

TEST_CASE("pasr_experiment - swapping the pair transposes the power matrix")
{
    const auto mg1 = ModeGroup::consecutive(1, 4);
    const auto mg2 = ModeGroup::consecutive(-4, -1);
    const FeedErrorModel zero{0.0, 0.0, 0};
    const auto fwd = pasr_experiment(mg1, mg2, 2.0, 0.0294, zero);
    const auto rev = pasr_experiment(mg2, mg1, 2.0, 0.0294, zero);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(rev.linear(i, j) == Approx(fwd.linear(1 - i, 1 - j)).margin(1e-18));
}

TEST_CASE("pasr_experiment - feed errors lift the crosstalk floor")
{
    const auto mg1 = ModeGroup::consecutive(1, 4);
    const auto mg2 = ModeGroup::consecutive(-4, -1);
    const auto ideal = crosstalk_db(
        pasr_experiment(mg1, mg2, 2.0, 0.0294, {0.0, 0.0, 0}));
    const auto noisy = crosstalk_db(
        pasr_experiment(mg1, mg2, 2.0, 0.0294, {0.05, 5.0 * kPi / 180.0, 3}));
    CHECK(noisy[0] > ideal[0]);
    CHECK(noisy[1] > ideal[1]);
    CHECK(noisy[0] > -60.0); // finite, error-dominated floor
}

TEST_CASE("pasr crosstalk - invariant under a common phase rotation")
{
    // rotating every received sample by a common phasor cannot change the
    // measured power ratios
    const auto mg1 = ModeGroup::consecutive(1, 4);
    const auto mg2 = ModeGroup::consecutive(-4, -1);
    const auto arr = pasr_placement(2.0, 5.0, 2, {2.5, -2.5});
    const auto rxp = arr.positions();
    const std::complex<double> rot = std::polar(1.0, 0.7321);

    Eigen::MatrixXcd h(2, 2);
    for (int r = 0; r < 2; ++r)
    {
        const double phi = arr.azimuths_rad[static_cast<std::size_t>(r)];
        const double d = std::hypot(rxp[static_cast<std::size_t>(r)].x,
                                    rxp[static_cast<std::size_t>(r)].y);
        h(r, 0) = free_space_gain(d, 0.0294, 1.0) * beam_pattern(mg1, phi);
        h(r, 1) = free_space_gain(d, 0.0294, 1.0) * beam_pattern(mg2, phi);
    }

    const auto measure = [&](const Eigen::MatrixXcd &chan) {
        PowerTransferMatrix ptm;
        ptm.linear.resize(2, 2);
        for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n)
            {
                std::vector<std::complex<double>> rx{chan(0, n), chan(1, n)};
                ptm.linear(n, m) = std::norm(
                    analog_combine(rx, arr.phase_shift_sets[static_cast<std::size_t>(m)]));
            }
        // keep the nulls finite for the ratio
        ptm.linear.array() += 1e-30;
        return crosstalk_db(ptm);
    };

    const auto base = measure(h);
    const auto rotated = measure((rot * h).eval());
    CHECK(base[0] == Approx(rotated[0]).margin(1e-9));
    CHECK(base[1] == Approx(rotated[1]).margin(1e-9));
}
