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

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "psoam/channel.hpp"
#include "psoam/geometry.hpp"
#include "psoam/modegroup.hpp"

namespace psoam {

/// Partial-arc sampling receiver placement: N_r antennas uniformly spread
/// on the equal-gain arc at range D, neighbours separated by
/// phi_s = 2*pi/(delta*N_r), symmetric about boresight. Demultiplexing is
/// one analog phase-shift set per target group.
struct PasrArrangement
{
    int n_rx = 2;
    double delta = 0.0;      // arc fraction denominator
    double distance_m = 0.0; // range of every receiver (equal path length)
    double phi_s_rad = 0.0;  // neighbour angle difference
    std::vector<double> azimuths_rad;                 // ascending, symmetric
    std::vector<std::vector<double>> phase_shift_sets; // per demux target

    /// Receivers on the arc, not on a transverse line; paths are equal.
    std::vector<Point2> positions() const
    {
        std::vector<Point2> p;
        p.reserve(azimuths_rad.size());
        for (double phi : azimuths_rad)
            p.push_back({distance_m * std::cos(phi), distance_m * std::sin(phi)});
        return p;
    }

    /// Equivalent linear aperture: the span where the outer rays cross the
    /// transverse line at range D. Matches pasr_aperture for delta = dl_e.
    double equivalent_aperture_m() const
    {
        const double half_span = 0.5 * (n_rx - 1) * phi_s_rad;
        return 2.0 * distance_m * std::tan(half_span);
    }
};

/// Receiving aperture required to demultiplex a group pair with equivalent
/// order difference dl_e at range D: A_r = 2*D*tan(pi/(2*dl_e)).
inline double pasr_aperture(double distance_m, double delta_l_e)
{
    if (delta_l_e == 0.0)
        throw std::invalid_argument("no vorticity difference, PASR undefined");
    if (!(distance_m > 0.0))
        throw std::invalid_argument("pasr_aperture: distance must be > 0");
    return 2.0 * distance_m * std::tan(kPi / (2.0 * std::abs(delta_l_e)));
}

/// Analog phase-shift set aligning the inter-receiver phase progression of
/// a target with equivalent order l_e; normalized so the smallest shift is
/// zero (the worked two-receiver case gives {0, 90} and {90, 0} degrees).
inline std::vector<double> pasr_phase_shifts(const std::vector<double> &azimuths, double l_e)
{
    std::vector<double> shifts(azimuths.size());
    double lo = 0.0;
    for (std::size_t r = 0; r < azimuths.size(); ++r)
    {
        shifts[r] = -l_e * azimuths[r];
        lo = (r == 0) ? shifts[r] : std::min(lo, shifts[r]);
    }
    for (auto &s : shifts)
    {
        s -= lo;
        s = std::fmod(s, 2.0 * kPi);
    }
    return shifts;
}

/// Place N_r receivers for a pair with vorticity difference dl_e. The arc
/// denominator defaults to delta = dl_e (the k' = 1 case); pass
/// `target_orders` (the l_e of each multiplexed group) to fill the demux
/// phase-shift sets.
inline PasrArrangement pasr_placement(double distance_m, double delta_l_e, int n_rx,
                                      const std::vector<double> &target_orders = {},
                                      double delta_override = 0.0)
{
    if (delta_l_e == 0.0)
        throw std::invalid_argument("no vorticity difference, PASR undefined");
    if (n_rx < 2)
        throw std::invalid_argument("pasr_placement: need at least two receivers");
    if (!(distance_m > 0.0))
        throw std::invalid_argument("pasr_placement: distance must be > 0");

    PasrArrangement a;
    a.n_rx = n_rx;
    a.delta = (delta_override != 0.0) ? delta_override : std::abs(delta_l_e);
    a.distance_m = distance_m;
    a.phi_s_rad = 2.0 * kPi / (a.delta * static_cast<double>(n_rx));
    a.azimuths_rad.resize(static_cast<std::size_t>(n_rx));
    for (int r = 0; r < n_rx; ++r)
        a.azimuths_rad[static_cast<std::size_t>(r)] =
            (static_cast<double>(r) - 0.5 * (n_rx - 1)) * a.phi_s_rad;
    for (double l_e : target_orders)
        a.phase_shift_sets.push_back(pasr_phase_shifts(a.azimuths_rad, l_e));
    return a;
}

/// Inner product of two beam patterns sampled at the receiver azimuths,
/// sum_r BP1(phi_r) * conj(BP2(phi_r)). Zero (to rounding) whenever the
/// groups have identical amplitude patterns at the samples and their
/// vorticity difference is a nonzero integer multiple of delta that is not
/// a multiple of N_r (the roots-of-unity null).
inline std::complex<double> orthogonality_sum(const ModeGroup &mg1, const ModeGroup &mg2,
                                              const PasrArrangement &arr)
{
    std::complex<double> acc{0.0, 0.0};
    for (double phi : arr.azimuths_rad)
        acc += beam_pattern(mg1, phi) * std::conj(beam_pattern(mg2, phi));
    return acc;
}

/// Analog combining: sum_r received_r * exp(-j*shift_r).
inline std::complex<double> analog_combine(std::span<const std::complex<double>> received,
                                           std::span<const double> phase_shifts)
{
    if (received.size() != phase_shifts.size())
        throw std::invalid_argument("analog_combine: length mismatch");
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t r = 0; r < received.size(); ++r)
        acc += received[r] *
               std::complex<double>(std::cos(phase_shifts[r]), -std::sin(phase_shifts[r]));
    return acc;
}

/// Received power for each (transmitted group, demux setting) pair, linear
/// units. Rows follow the transmitted groups, columns the settings.
struct PowerTransferMatrix
{
    Eigen::MatrixXd linear;

    void validate() const
    {
        if ((linear.array() < 0.0).any())
            throw std::invalid_argument("power transfer matrix: powers must be >= 0");
    }
};

/// Crosstalk per demux setting: CT_n = 10*log10(unexpected / expected)
/// where "expected" is the matched group's power under that setting.
inline std::vector<double> crosstalk_db(const PowerTransferMatrix &ptm)
{
    ptm.validate();
    if (ptm.linear.rows() != ptm.linear.cols())
        throw std::invalid_argument("crosstalk: need one setting per transmitted group");
    std::vector<double> ct(static_cast<std::size_t>(ptm.linear.cols()));
    for (Eigen::Index n = 0; n < ptm.linear.cols(); ++n)
    {
        const double expected = ptm.linear(n, n);
        if (!(expected > 0.0))
            throw std::invalid_argument("crosstalk: zero expected power");
        double unexpected = 0.0;
        for (Eigen::Index m = 0; m < ptm.linear.rows(); ++m)
            if (m != n)
                unexpected += ptm.linear(m, n);
        ct[static_cast<std::size_t>(n)] = 10.0 * std::log10(unexpected / expected);
    }
    return ct;
}

/// Bench experiment: each group of the pair carries one continuous-wave
/// baseband tone; both are radiated coaxially, sampled at the PASR
/// placement and combined with each phase-shift set. Returns the power
/// transfer matrix measured by projecting the combined signal on each tone.
/// Tone offsets default to +/-0.5 MHz around the carrier; absolute levels
/// are arbitrary, only ratios carry meaning.
inline PowerTransferMatrix pasr_experiment(const ModeGroup &mg1, const ModeGroup &mg2,
                                           double distance_m, double wavelength_m,
                                           const FeedErrorModel &err, int n_rx = 2,
                                           std::vector<double> tone_offsets_hz = {-0.5e6, 0.5e6},
                                           double sample_rate_hz = 20e6, int n_samples = 4000)
{
    const double dle = equivalent_order(mg1) - equivalent_order(mg2);
    if (dle == 0.0)
        throw std::invalid_argument("no vorticity difference, PASR undefined");
    if (tone_offsets_hz.size() != 2)
        throw std::invalid_argument("pasr_experiment: exactly two tones");

    FeedErrorModel e1 = err, e2 = err;
    e1.seed = derive_seed(err.seed, 0);
    e2.seed = derive_seed(err.seed, 1);
    const ModeGroup g1 = perturb(mg1, e1);
    const ModeGroup g2 = perturb(mg2, e2);

    const auto arr = pasr_placement(distance_m, dle, n_rx,
                                    {equivalent_order(mg1), equivalent_order(mg2)});
    const auto rx = arr.positions();
    const Point2 tx{0.0, 0.0};

    // channel column per group at the arc receivers
    Eigen::MatrixXcd h(n_rx, 2);
    for (int r = 0; r < n_rx; ++r)
    {
        const double d = path_distance(tx, rx[static_cast<std::size_t>(r)]);
        const double phi = azimuth_from_tx(tx, rx[static_cast<std::size_t>(r)]);
        const auto g = free_space_gain(d, wavelength_m, 1.0);
        h(r, 0) = g * beam_pattern(g1, phi);
        h(r, 1) = g * beam_pattern(g2, phi);
    }

    PowerTransferMatrix ptm;
    ptm.linear.setZero(2, 2);
    std::vector<std::complex<double>> received(static_cast<std::size_t>(n_rx));
    std::vector<std::complex<double>> combined(arr.phase_shift_sets.size());
    std::vector<std::vector<std::complex<double>>> projections(
        arr.phase_shift_sets.size(),
        std::vector<std::complex<double>>(tone_offsets_hz.size(), {0.0, 0.0}));

    for (int t = 0; t < n_samples; ++t)
    {
        const double time = static_cast<double>(t) / sample_rate_hz;
        std::complex<double> tones[2];
        for (int n = 0; n < 2; ++n)
        {
            const double a = 2.0 * kPi * tone_offsets_hz[static_cast<std::size_t>(n)] * time;
            tones[n] = {std::cos(a), std::sin(a)};
        }
        for (int r = 0; r < n_rx; ++r)
            received[static_cast<std::size_t>(r)] = h(r, 0) * tones[0] + h(r, 1) * tones[1];
        for (std::size_t m = 0; m < arr.phase_shift_sets.size(); ++m)
        {
            combined[m] = analog_combine(received, arr.phase_shift_sets[m]);
            for (std::size_t n = 0; n < tone_offsets_hz.size(); ++n)
                projections[m][n] += combined[m] * std::conj(tones[n]);
        }
    }

    for (std::size_t m = 0; m < arr.phase_shift_sets.size(); ++m)
        for (std::size_t n = 0; n < tone_offsets_hz.size(); ++n)
            ptm.linear(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) =
                std::norm(projections[m][n] / static_cast<double>(n_samples));
    return ptm;
}

} // namespace psoam
