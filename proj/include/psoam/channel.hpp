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
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "psoam/geometry.hpp"
#include "psoam/modegroup.hpp"

namespace psoam {

enum class ChannelKind
{
    Mimo,      // common antennas both ends; differences from path lengths only
    MgMimo,    // mode-group transmitters
    PsoamMimo  // single-mode PSOAM transmitters (Q = 1 groups)
};

/// Complex narrowband line-of-sight transfer matrix, n_rx rows x n_tx
/// columns, dimensionless amplitude gain. One matrix describes the whole
/// 20 MHz band (flat fading).
struct TransferMatrix
{
    Eigen::MatrixXcd entries;
    double wavelength_m = 0.0;
    ChannelKind kind = ChannelKind::Mimo;

    int n_rx() const { return static_cast<int>(entries.rows()); }
    int n_tx() const { return static_cast<int>(entries.cols()); }
};

/// Complex additive white Gaussian noise at the receive elements.
/// variance = 0 disables noise (used by noiseless chain checks).
struct NoiseModel
{
    double variance = 1.0;
    std::uint64_t seed = 0;

    void validate() const
    {
        if (!(variance >= 0.0))
            throw std::invalid_argument("noise model: variance must be >= 0");
    }
};

/// Free-space scalar transfer function beta * lambda/(4*pi*d) * e^{-jkd}.
inline std::complex<double> free_space_gain(double distance_m, double wavelength_m, double beta_a)
{
    if (!(distance_m > 0.0))
        throw std::invalid_argument("zero propagation distance");
    const double amp = beta_a * wavelength_m / (4.0 * kPi * distance_m);
    const double phase = -2.0 * kPi / wavelength_m * distance_m;
    return {amp * std::cos(phase), amp * std::sin(phase)};
}

/// Conventional MIMO channel: entry (m,n) = beta * lambda/(4*pi*d_mn) *
/// e^{-j*k*d_mn} with exact Euclidean d_mn.
inline TransferMatrix build_mimo_channel(const LinkGeometry &geom, double beta_a = 1.0)
{
    const auto tx = element_positions(geom, Side::Tx);
    const auto rx = element_positions(geom, Side::Rx);
    TransferMatrix h;
    h.wavelength_m = geom.wavelength_m;
    h.kind = ChannelKind::Mimo;
    h.entries.resize(geom.n_rx, geom.n_tx);
    for (int m = 0; m < geom.n_rx; ++m)
        for (int n = 0; n < geom.n_tx; ++n)
            h.entries(m, n) = free_space_gain(path_distance(tx[n], rx[m]), geom.wavelength_m, beta_a);
    return h;
}

/// Mode-group MIMO channel: the MIMO entry times the transmitting group's
/// beam pattern evaluated at the azimuth of the receiver from that element.
/// Requires one group per transmit element.
inline TransferMatrix build_mg_channel(const LinkGeometry &geom, const std::vector<ModeGroup> &mgs,
                                       double beta_a = 1.0)
{
    if (static_cast<int>(mgs.size()) != geom.n_tx)
        throw std::invalid_argument("mg channel: need one mode group per transmit element");
    const auto tx = element_positions(geom, Side::Tx);
    const auto rx = element_positions(geom, Side::Rx);
    TransferMatrix h;
    h.wavelength_m = geom.wavelength_m;
    h.kind = ChannelKind::MgMimo;
    h.entries.resize(geom.n_rx, geom.n_tx);
    for (int m = 0; m < geom.n_rx; ++m)
        for (int n = 0; n < geom.n_tx; ++n)
        {
            const double d = path_distance(tx[n], rx[m]);
            const double phi = azimuth_from_tx(tx[n], rx[m]);
            h.entries(m, n) =
                free_space_gain(d, geom.wavelength_m, beta_a) * beam_pattern(mgs[n], phi);
        }
    return h;
}

/// PSOAM-MIMO: the MG channel with single-mode (Q = 1) groups, i.e. beam
/// magnitude 1 and phase -l*phi.
inline TransferMatrix build_psoam_channel(const LinkGeometry &geom, const std::vector<int> &orders,
                                          double beta_a = 1.0)
{
    std::vector<ModeGroup> groups;
    groups.reserve(orders.size());
    for (int l : orders)
        groups.push_back(ModeGroup::single(l));
    TransferMatrix h = build_mg_channel(geom, groups, beta_a);
    h.kind = ChannelKind::PsoamMimo;
    return h;
}

/// Total transmit power that makes a reference SISO link — one unit-gain
/// element at the transmit centroid to one at the receive centroid, distance
/// D — reach the target receiving SNR:  P * |h_ref|^2 / sigma_n^2 = SNR.
inline double calibrate_total_power(const LinkGeometry &geom, double target_snr_db,
                                    double noise_variance, double beta_a = 1.0)
{
    geom.validate();
    if (!(noise_variance > 0.0))
        throw std::invalid_argument("calibrate: noise variance must be > 0");
    if (!std::isfinite(target_snr_db))
        throw std::invalid_argument("calibrate: target SNR must be finite");
    const double href2 = std::norm(free_space_gain(geom.distance_m, geom.wavelength_m, beta_a));
    return std::pow(10.0, target_snr_db / 10.0) * noise_variance / href2;
}

} // namespace psoam
