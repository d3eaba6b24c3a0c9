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
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "psoam/channel.hpp"
#include "psoam/geometry.hpp"
#include "psoam/modegroup.hpp"

namespace psoam {

/// Singular values treated as zero below this fraction of the largest one.
/// A coaxial pair with equal equivalent orders produces an exactly rank-1
/// matrix up to rounding, which must not be counted as a subchannel.
inline constexpr double kRankCutoff = 1e-12;

/// Water-filling result: per-subchannel powers summing to the total.
struct PowerAllocation
{
    std::vector<double> per_channel;
    double total = 0.0;
    double water_level = 0.0;
};

/// Optimal power split over parallel subchannels with gains nu_k:
/// P_k = max(0, mu - sigma^2/nu_k^2), with the water level mu found by
/// bisection to 1e-12 relative so that the powers sum to p_total.
inline PowerAllocation waterfill(const std::vector<double> &singular_values, double p_total,
                                 double noise_variance)
{
    if (!(p_total > 0.0))
        throw std::invalid_argument("waterfill: total power must be > 0");
    if (!(noise_variance > 0.0))
        throw std::invalid_argument("waterfill: noise variance must be > 0");
    double nu_max = 0.0;
    for (double nu : singular_values)
    {
        if (nu < 0.0)
            throw std::invalid_argument("waterfill: singular values must be >= 0");
        nu_max = std::max(nu_max, nu);
    }
    if (nu_max == 0.0)
        throw std::invalid_argument("rank-zero channel");

    // inverse gains of usable channels; rank cutoff relative to the largest
    std::vector<double> inv_gain(singular_values.size(), -1.0);
    double floor_max = 0.0;
    for (std::size_t k = 0; k < singular_values.size(); ++k)
    {
        const double nu = singular_values[k];
        if (nu > kRankCutoff * nu_max)
        {
            inv_gain[k] = noise_variance / (nu * nu);
            floor_max = std::max(floor_max, inv_gain[k]);
        }
    }

    const auto allocated = [&](double mu) {
        double s = 0.0;
        for (double g : inv_gain)
            if (g >= 0.0)
                s += std::max(0.0, mu - g);
        return s;
    };

    double lo = 0.0;
    double hi = floor_max + p_total;
    for (int it = 0; it < 200; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (allocated(mid) < p_total)
            lo = mid;
        else
            hi = mid;
        if ((hi - lo) <= 1e-12 * hi)
            break;
    }
    const double mu = 0.5 * (lo + hi);

    PowerAllocation alloc;
    alloc.water_level = mu;
    alloc.per_channel.resize(singular_values.size(), 0.0);
    double sum = 0.0;
    for (std::size_t k = 0; k < singular_values.size(); ++k)
        if (inv_gain[k] >= 0.0)
        {
            alloc.per_channel[k] = std::max(0.0, mu - inv_gain[k]);
            sum += alloc.per_channel[k];
        }
    // absorb bisection residue into the strongest channel so the powers sum
    // exactly to the budget
    if (sum > 0.0)
    {
        std::size_t best = 0;
        for (std::size_t k = 1; k < singular_values.size(); ++k)
            if (singular_values[k] > singular_values[best])
                best = k;
        alloc.per_channel[best] += p_total - sum;
    }
    alloc.total = p_total;
    return alloc;
}

inline std::vector<double> singular_values_of(const Eigen::MatrixXcd &h)
{
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h);
    const auto &sv = svd.singularValues();
    return {sv.data(), sv.data() + sv.size()};
}

/// Shannon capacity sum_k log2(1 + nu_k^2 P_k / sigma^2) with water-filled
/// P_k, in bits/s/Hz.
inline double capacity_bits(const Eigen::MatrixXcd &h, double p_total, double noise_variance)
{
    const auto sv = singular_values_of(h);
    const auto alloc = waterfill(sv, p_total, noise_variance);
    double c = 0.0;
    for (std::size_t k = 0; k < sv.size(); ++k)
        if (alloc.per_channel[k] > 0.0)
            c += std::log2(1.0 + sv[k] * sv[k] * alloc.per_channel[k] / noise_variance);
    return c;
}

inline double capacity_bits(const TransferMatrix &h, double p_total, double noise_variance)
{
    return capacity_bits(h.entries, p_total, noise_variance);
}

/// One point of a capacity-gain-versus-distance curve.
struct CapacityPoint
{
    double d_wavelengths = 0.0;
    double d_m = 0.0;
    double cg = 0.0;            // capacity / log2(1 + SNR_target)
    double capacity_bits = 0.0; // bits/s/Hz
};

struct CapacityCurve
{
    std::vector<CapacityPoint> points;
    ChannelKind kind = ChannelKind::Mimo;
    double target_snr_db = 0.0;
    std::string label;
};

/// Distance sweep template. Apertures are fixed while the boresight
/// distance runs over the grid; transmit power is re-calibrated to the
/// target receiving SNR at every distance.
struct SweepScenario
{
    ChannelKind kind = ChannelKind::Mimo;
    double wavelength_m = kSpeedOfLight / 10e9;
    TxLayout tx_layout = TxLayout::Coaxial;
    double tx_aperture_m = 0.0;
    double rx_aperture_m = 0.0;
    std::vector<ModeGroup> mode_groups; // MgMimo
    std::vector<int> psoam_orders;      // PsoamMimo
    double target_snr_db = 30.0;
    double noise_variance = 1.0;
    double beta_a = 1.0;
    int n_streams_mimo = 2; // stream count for the conventional-MIMO kind
    std::vector<double> distances_wavelengths;
    std::string label;

    int n_streams() const
    {
        switch (kind)
        {
        case ChannelKind::MgMimo:
            return static_cast<int>(mode_groups.size());
        case ChannelKind::PsoamMimo:
            return static_cast<int>(psoam_orders.size());
        default:
            return n_streams_mimo;
        }
    }
};

inline std::vector<double> log_spaced(double lo, double hi, int n)
{
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw std::invalid_argument("log_spaced: need 0 < lo < hi and n >= 2");
    std::vector<double> g(static_cast<std::size_t>(n));
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
    g.back() = hi;
    return g;
}

inline TransferMatrix build_scenario_channel(const SweepScenario &sc, const LinkGeometry &geom)
{
    switch (sc.kind)
    {
    case ChannelKind::Mimo:
        return build_mimo_channel(geom, sc.beta_a);
    case ChannelKind::MgMimo:
        return build_mg_channel(geom, sc.mode_groups, sc.beta_a);
    case ChannelKind::PsoamMimo:
        return build_psoam_channel(geom, sc.psoam_orders, sc.beta_a);
    }
    throw std::logic_error("unknown channel kind");
}

inline LinkGeometry scenario_geometry(const SweepScenario &sc, double distance_m)
{
    const int n = sc.n_streams();
    if (sc.tx_layout == TxLayout::Coaxial)
        return LinkGeometry::coaxial(n, n, sc.rx_aperture_m, distance_m, sc.wavelength_m);
    return LinkGeometry::ula(n, n, sc.tx_aperture_m, sc.rx_aperture_m, distance_m,
                             sc.wavelength_m);
}

/// Capacity gain over SISO versus distance. CG = C / log2(1 + SNR_target);
/// the SISO baseline is exact by construction of the power calibration.
inline CapacityCurve capacity_gain_sweep(const SweepScenario &sc)
{
    if (sc.distances_wavelengths.empty())
        throw std::invalid_argument("sweep: distance grid must be nonempty");
    for (std::size_t i = 1; i < sc.distances_wavelengths.size(); ++i)
        if (!(sc.distances_wavelengths[i] > sc.distances_wavelengths[i - 1]))
            throw std::invalid_argument("sweep: distance grid must be strictly increasing");

    const double snr = std::pow(10.0, sc.target_snr_db / 10.0);
    const double siso_bits = std::log2(1.0 + snr);

    CapacityCurve curve;
    curve.kind = sc.kind;
    curve.target_snr_db = sc.target_snr_db;
    curve.label = sc.label;
    curve.points.reserve(sc.distances_wavelengths.size());
    for (double d_wl : sc.distances_wavelengths)
    {
        const double d_m = d_wl * sc.wavelength_m;
        const LinkGeometry geom = scenario_geometry(sc, d_m);
        const double p_total =
            calibrate_total_power(geom, sc.target_snr_db, sc.noise_variance, sc.beta_a);
        const TransferMatrix h = build_scenario_channel(sc, geom);
        const double c = capacity_bits(h, p_total, sc.noise_variance);
        curve.points.push_back({d_wl, d_m, c / siso_bits, c});
    }
    return curve;
}

/// Largest distance at which the curve still attains the target CG,
/// refined by linear interpolation between grid points. `rel_tol` relaxes
/// the comparison to CG >= target*(1 - rel_tol); the default is strict.
inline double distance_at_cg(const CapacityCurve &curve, double target_cg, double rel_tol = 0.0)
{
    if (curve.points.size() < 2)
        throw std::invalid_argument("distance_at_cg: need at least two points");
    const double thr = target_cg * (1.0 - rel_tol);
    std::ptrdiff_t last = -1;
    for (std::size_t i = 0; i < curve.points.size(); ++i)
        if (curve.points[i].cg >= thr)
            last = static_cast<std::ptrdiff_t>(i);
    if (last < 0)
        throw std::invalid_argument("target CG unreachable");
    if (last + 1 >= static_cast<std::ptrdiff_t>(curve.points.size()))
        throw std::invalid_argument("distance_at_cg: curve does not bracket the target "
                                    "on a decreasing tail");
    const auto &a = curve.points[static_cast<std::size_t>(last)];
    const auto &b = curve.points[static_cast<std::size_t>(last + 1)];
    const double t = (thr - a.cg) / (b.cg - a.cg);
    return a.d_wavelengths + t * (b.d_wavelengths - a.d_wavelengths);
}

} // namespace psoam
