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

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace psoam {

enum class Modulation
{
    Qpsk,
    Qam16,
    Qam64
};

inline int bits_per_symbol(Modulation m)
{
    switch (m)
    {
    case Modulation::Qpsk:
        return 2;
    case Modulation::Qam16:
        return 4;
    case Modulation::Qam64:
        return 6;
    }
    throw std::logic_error("unknown modulation");
}

inline std::string modulation_name(Modulation m)
{
    switch (m)
    {
    case Modulation::Qpsk:
        return "qpsk";
    case Modulation::Qam16:
        return "qam16";
    case Modulation::Qam64:
        return "qam64";
    }
    throw std::logic_error("unknown modulation");
}

/// Scale bringing the average constellation power to exactly 1:
/// 1/sqrt(2), 1/sqrt(10), 1/sqrt(42) for QPSK/16-QAM/64-QAM.
inline double qam_scale(Modulation m)
{
    const int half = bits_per_symbol(m) / 2;       // bits per axis
    const int levels = 1 << half;                  // PAM levels per axis
    // mean of (2v - (L-1))^2 over v = 0..L-1 is (L^2 - 1)/3 per axis
    const double axis_power = (static_cast<double>(levels) * levels - 1.0) / 3.0;
    return 1.0 / std::sqrt(2.0 * axis_power);
}

namespace detail {

// Gray-coded PAM: bit pattern g (msb first) -> odd level in {-(L-1)..(L-1)}.
// Adjacent levels differ in exactly one bit.
inline int gray_to_level(unsigned g, int bits)
{
    unsigned v = g;
    for (unsigned shift = 1; shift < static_cast<unsigned>(bits); shift <<= 1)
        v ^= v >> shift;
    return 2 * static_cast<int>(v) - ((1 << bits) - 1);
}

inline unsigned level_to_gray(int level, int bits)
{
    const int levels = 1 << bits;
    const unsigned v = static_cast<unsigned>((level + levels - 1) / 2);
    return v ^ (v >> 1);
}

// Nearest-level slicer for one axis.
inline int slice_level(double x, int bits)
{
    const int levels = 1 << bits;
    int v = static_cast<int>(std::lround((x + (levels - 1)) / 2.0));
    v = std::min(std::max(v, 0), levels - 1);
    return 2 * v - (levels - 1);
}

} // namespace detail

/// Map a bit sequence onto a Gray-coded square constellation with unit
/// average power. Per symbol the first half of the bits selects the I level
/// (msb first), the second half the Q level.
inline std::vector<std::complex<double>> qam_map(const std::vector<std::uint8_t> &bits,
                                                 Modulation m)
{
    const int bps = bits_per_symbol(m);
    if (bits.size() % static_cast<std::size_t>(bps) != 0)
        throw std::invalid_argument("qam_map: bit count not divisible by bits per symbol");
    const int half = bps / 2;
    const double scale = qam_scale(m);
    std::vector<std::complex<double>> out;
    out.reserve(bits.size() / static_cast<std::size_t>(bps));
    for (std::size_t i = 0; i < bits.size(); i += static_cast<std::size_t>(bps))
    {
        unsigned gi = 0, gq = 0;
        for (int b = 0; b < half; ++b)
        {
            gi = (gi << 1) | (bits[i + static_cast<std::size_t>(b)] & 1u);
            gq = (gq << 1) | (bits[i + static_cast<std::size_t>(half + b)] & 1u);
        }
        out.emplace_back(scale * detail::gray_to_level(gi, half),
                         scale * detail::gray_to_level(gq, half));
    }
    return out;
}

/// Hard-decision demapper: nearest constellation point's Gray label.
/// For square Gray constellations per-axis slicing is the minimum-distance
/// decision.
inline std::vector<std::uint8_t> qam_demap(const std::vector<std::complex<double>> &symbols,
                                           Modulation m)
{
    const int bps = bits_per_symbol(m);
    const int half = bps / 2;
    const double inv_scale = 1.0 / qam_scale(m);
    std::vector<std::uint8_t> bits;
    bits.reserve(symbols.size() * static_cast<std::size_t>(bps));
    for (const auto &s : symbols)
    {
        const unsigned gi = detail::level_to_gray(detail::slice_level(s.real() * inv_scale, half), half);
        const unsigned gq = detail::level_to_gray(detail::slice_level(s.imag() * inv_scale, half), half);
        for (int b = half - 1; b >= 0; --b)
            bits.push_back(static_cast<std::uint8_t>((gi >> b) & 1u));
        for (int b = half - 1; b >= 0; --b)
            bits.push_back(static_cast<std::uint8_t>((gq >> b) & 1u));
    }
    return bits;
}

} // namespace psoam
