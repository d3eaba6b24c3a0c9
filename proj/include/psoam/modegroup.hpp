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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "psoam/geometry.hpp"
#include "psoam/rng.hpp"

namespace psoam {

/// One plane-spiral OAM wave: azimuthal field A * exp(-j(l*phi + phase)).
/// The topological charge l may be negative or zero.
struct PsoamMode
{
    int order = 0;
    double amplitude = 1.0;
    double phase_rad = 0.0;
};

/// A coherent superposition of PSOAM modes forming one transmit beam.
///
/// A group of Q consecutive modes radiates a pencil beam whose mainlobe
/// keeps a linear azimuthal phase slope (its vorticity); the weights are
/// normalized by 1/sqrt(Q) so transmit power is comparable with a single
/// mode.
class ModeGroup
{
  public:
    explicit ModeGroup(std::vector<PsoamMode> modes) : modes_(std::move(modes))
    {
        if (modes_.empty())
            throw std::invalid_argument("mode group: needs at least one mode");
        std::set<int> seen;
        for (const auto &m : modes_)
        {
            if (!(m.amplitude >= 0.0) || !std::isfinite(m.amplitude))
                throw std::invalid_argument("mode group: amplitude must be finite and >= 0");
            if (!seen.insert(m.order).second)
                throw std::invalid_argument("mode group: mode orders must be distinct");
        }
    }

    /// Consecutive equi-amplitude in-phase group {l_first, ..., l_last}.
    static ModeGroup consecutive(int l_first, int l_last)
    {
        if (l_last < l_first)
            throw std::invalid_argument("mode group: l_last must be >= l_first");
        std::vector<PsoamMode> m;
        for (int l = l_first; l <= l_last; ++l)
            m.push_back({l, 1.0, 0.0});
        return ModeGroup(std::move(m));
    }

    static ModeGroup single(int order) { return ModeGroup({{order, 1.0, 0.0}}); }

    const std::vector<PsoamMode> &modes() const { return modes_; }
    int size() const { return static_cast<int>(modes_.size()); } // Q
    int first_order() const { return modes_.front().order; }     // l_f

    /// Common mode interval (delta l) when the orders form an arithmetic
    /// progression; nullopt otherwise or for a single mode.
    std::optional<int> common_interval() const
    {
        if (modes_.size() < 2)
            return std::nullopt;
        const int step = modes_[1].order - modes_[0].order;
        if (step == 0)
            return std::nullopt;
        for (std::size_t q = 1; q < modes_.size(); ++q)
            if (modes_[q].order - modes_[q - 1].order != step)
                return std::nullopt;
        return step;
    }

    /// The pencil-beam case: orders consecutive with interval 1.
    bool is_consecutive() const { return common_interval() == 1; }

    /// Equi-amplitude and in-phase (the closed-form pattern case).
    bool is_uniform() const
    {
        return std::all_of(modes_.begin(), modes_.end(), [&](const PsoamMode &m) {
            return m.amplitude == modes_.front().amplitude && m.phase_rad == 0.0;
        });
    }

    std::string label() const
    {
        std::string s = "{";
        for (std::size_t q = 0; q < modes_.size(); ++q)
            s += (q ? "," : "") + std::to_string(modes_[q].order);
        return s + "}";
    }

  private:
    std::vector<PsoamMode> modes_;
};

/// Complex azimuthal beam pattern of a group,
///   BP(phi) = (1/sqrt(Q)) * sum_q A_q * exp(-j((l_q)*phi + phase_q)).
/// Evaluated from the general sum so non-uniform weights are supported; the
/// uniform closed form sin(Q*phi*dl/2)/sin(phi*dl/2) * exp(-j*l_e*phi) is a
/// test oracle only.
inline std::complex<double> beam_pattern(const ModeGroup &mg, double phi)
{
    const double norm = 1.0 / std::sqrt(static_cast<double>(mg.size()));
    std::complex<double> acc{0.0, 0.0};
    for (const auto &m : mg.modes())
    {
        const double arg = -(static_cast<double>(m.order) * phi + m.phase_rad);
        acc += m.amplitude * std::complex<double>(std::cos(arg), std::sin(arg));
    }
    return norm * acc;
}

/// Equivalent OAM order l_e = l_f + dl*(Q-1)/2, the phase slope within the
/// mainlobe. Equals the arithmetic mean of the constituent orders. Requires
/// the orders to form an arithmetic progression.
inline double equivalent_order(const ModeGroup &mg)
{
    if (mg.size() == 1)
        return static_cast<double>(mg.first_order());
    const auto step = mg.common_interval();
    if (!step)
        throw std::invalid_argument("equivalent order undefined: "
                                    "orders are not an arithmetic progression");
    return static_cast<double>(mg.first_order()) +
           static_cast<double>(*step) * 0.5 * static_cast<double>(mg.size() - 1);
}

/// Peak azimuthal power gain of a normalized group over a single mode,
/// 10*log10(Q). Only meaningful for equi-amplitude in-phase groups.
inline double directivity_gain_db(const ModeGroup &mg)
{
    if (!mg.is_uniform())
        throw std::invalid_argument("directivity gain: group must be equi-amplitude, in-phase");
    return 10.0 * std::log10(static_cast<double>(mg.size()));
}

/// Full 3 dB width of the mainlobe in degrees, found by bisection on
/// |BP(phi)|^2 = |BP(0)|^2 / 2 to 1e-9 rad. Defined for consecutive groups
/// with Q >= 2; a single mode is omnidirectional.
inline double half_power_beamwidth_deg(const ModeGroup &mg)
{
    if (mg.size() < 2)
        throw std::invalid_argument("omnidirectional, beamwidth undefined");
    if (!mg.is_consecutive())
        throw std::invalid_argument("beamwidth: group must be consecutive (dl = 1)");
    const double q = static_cast<double>(mg.size());
    const double peak = std::norm(beam_pattern(mg, 0.0));
    const double half = 0.5 * peak;
    // mainlobe first null at 2*pi/Q
    double lo = 0.0, hi = 2.0 * kPi / q;
    for (int it = 0; it < 200 && (hi - lo) > 1e-9; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (std::norm(beam_pattern(mg, mid)) > half)
            lo = mid;
        else
            hi = mid;
    }
    return 2.0 * 0.5 * (lo + hi) * 180.0 / kPi;
}

/// OAM spectrum of the group: order -> normalized complex weight
/// (A_q/sqrt(Q)) * exp(-j*phase_q). PSOAM order and azimuth form a Fourier
/// pair, so integrating BP(phi)*exp(+j*l*phi)/(2*pi) recovers each weight.
inline std::map<int, std::complex<double>> mode_spectrum(const ModeGroup &mg)
{
    const double norm = 1.0 / std::sqrt(static_cast<double>(mg.size()));
    std::map<int, std::complex<double>> spec;
    for (const auto &m : mg.modes())
        spec[m.order] = norm * m.amplitude *
                        std::complex<double>(std::cos(m.phase_rad), -std::sin(m.phase_rad));
    return spec;
}

/// Feeding-network imperfection model: per-mode multiplicative amplitude
/// error and additive phase error, both Gaussian with the given RMS.
struct FeedErrorModel
{
    double amplitude_error_rms = 0.0; // fraction
    double phase_error_rms = 0.0;     // radians
    std::uint64_t seed = 0;

    void validate() const
    {
        if (amplitude_error_rms < 0.0 || phase_error_rms < 0.0)
            throw std::invalid_argument("feed error: RMS values must be >= 0");
    }
};

/// Reproducible perturbed copy of a group. Zero RMS returns the group
/// unchanged; amplitudes are clamped at zero.
inline ModeGroup perturb(const ModeGroup &mg, const FeedErrorModel &err)
{
    err.validate();
    Rng rng(err.seed);
    std::vector<PsoamMode> out = mg.modes();
    for (auto &m : out)
    {
        m.amplitude = std::max(0.0, m.amplitude * (1.0 + err.amplitude_error_rms * rng.gaussian()));
        m.phase_rad += err.phase_error_rms * rng.gaussian();
    }
    return ModeGroup(std::move(out));
}

} // namespace psoam
