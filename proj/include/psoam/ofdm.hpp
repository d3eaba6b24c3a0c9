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
#include <stdexcept>
#include <vector>

#include "psoam/geometry.hpp"

namespace psoam {

/// 64-point OFDM grid with 56 active subcarriers symmetric around a null DC
/// bin: 52 data + 4 pilots, 312.5 kHz spacing inside a 20 MHz band.
/// Pilots sit at the 802.11-style bins +/-7 and +/-21; the cyclic prefix is
/// a quarter symbol (inert over a pure line-of-sight channel but kept for
/// realism).
struct OfdmConfig
{
    int fft_size = 64;
    int active_subcarriers = 56;
    int data_subcarriers = 52;
    int pilot_subcarriers = 4;
    double subcarrier_spacing_hz = 312.5e3;
    double bandwidth_hz = 20e6;
    int cyclic_prefix = 16;
    int symbols_per_frame = 0; // 0 = derive from the frame payload size

    void validate() const
    {
        if (fft_size <= 0 || (fft_size & (fft_size - 1)) != 0)
            throw std::invalid_argument("ofdm: fft size must be a power of two");
        if (data_subcarriers + pilot_subcarriers != active_subcarriers)
            throw std::invalid_argument("ofdm: data + pilot subcarriers must equal active");
        if (active_subcarriers >= fft_size)
            throw std::invalid_argument("ofdm: active subcarriers must leave guard bins");
        if (active_subcarriers % 2 != 0)
            throw std::invalid_argument("ofdm: active subcarriers must be symmetric around DC");
        if (active_subcarriers * subcarrier_spacing_hz > bandwidth_hz)
            throw std::invalid_argument("ofdm: occupied band exceeds bandwidth");
        if (cyclic_prefix < 0 || cyclic_prefix >= fft_size)
            throw std::invalid_argument("ofdm: bad cyclic prefix length");
    }

    int samples_per_symbol() const { return fft_size + cyclic_prefix; }

    /// Logical pilot bins (DC-relative). Scaled from the 802.11 positions
    /// when the grid is not the default 56-active layout.
    std::vector<int> pilot_bins() const
    {
        if (pilot_subcarriers == 0)
            return {};
        if (pilot_subcarriers != 4)
            throw std::invalid_argument("ofdm: layout supports exactly 4 pilots (or 0)");
        const int edge = active_subcarriers / 2;
        const int outer = (21 * edge + 14) / 28;
        const int inner = (7 * edge + 14) / 28;
        return {-outer, -inner, inner, outer};
    }

    /// Data bins in ascending order: +/-1..+/-edge minus the pilots.
    std::vector<int> data_bins() const
    {
        const auto pilots = pilot_bins();
        const int edge = active_subcarriers / 2;
        std::vector<int> bins;
        bins.reserve(static_cast<std::size_t>(data_subcarriers));
        for (int b = -edge; b <= edge; ++b)
        {
            if (b == 0)
                continue;
            bool is_pilot = false;
            for (int p : pilots)
                is_pilot |= (p == b);
            if (!is_pilot)
                bins.push_back(b);
        }
        return bins;
    }
};

/// In-place unitary radix-2 FFT (scale 1/sqrt(N) both directions), so
/// time- and frequency-domain powers match and white noise stays white.
inline void fft_unitary(std::vector<std::complex<double>> &x, bool inverse)
{
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: size must be a power of two");

    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i)
    {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(x[i], x[j]);
    }

    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1)
    {
        const double ang = sign * 2.0 * kPi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len)
        {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k)
            {
                const std::complex<double> u = x[i + k];
                const std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto &v : x)
        v *= scale;
}

namespace detail {
inline int bin_to_index(int bin, int fft_size) { return (bin + fft_size) % fft_size; }
} // namespace detail

/// Map data symbols onto the OFDM grid (unit-power pilots at the pilot
/// bins), transform to the time domain and prepend the cyclic prefix.
/// Expects an integer number of symbols worth of data.
inline std::vector<std::complex<double>> ofdm_modulate(
    const std::vector<std::complex<double>> &data_symbols, const OfdmConfig &cfg)
{
    cfg.validate();
    const auto data_bins = cfg.data_bins();
    const auto pilot_bins = cfg.pilot_bins();
    const std::size_t per_symbol = data_bins.size();
    if (data_symbols.size() % per_symbol != 0)
        throw std::invalid_argument("ofdm_modulate: symbol count not a multiple of the "
                                    "data subcarrier count");
    const std::size_t n_sym = data_symbols.size() / per_symbol;
    const std::size_t out_len = n_sym * static_cast<std::size_t>(cfg.samples_per_symbol());

    std::vector<std::complex<double>> out;
    out.reserve(out_len);
    std::vector<std::complex<double>> grid(static_cast<std::size_t>(cfg.fft_size));
    for (std::size_t s = 0; s < n_sym; ++s)
    {
        std::fill(grid.begin(), grid.end(), std::complex<double>{0.0, 0.0});
        for (std::size_t k = 0; k < per_symbol; ++k)
            grid[static_cast<std::size_t>(detail::bin_to_index(data_bins[k], cfg.fft_size))] =
                data_symbols[s * per_symbol + k];
        for (int p : pilot_bins)
            grid[static_cast<std::size_t>(detail::bin_to_index(p, cfg.fft_size))] = {1.0, 0.0};
        fft_unitary(grid, true);
        // cyclic prefix = tail of the symbol
        for (int i = cfg.fft_size - cfg.cyclic_prefix; i < cfg.fft_size; ++i)
            out.push_back(grid[static_cast<std::size_t>(i)]);
        out.insert(out.end(), grid.begin(), grid.end());
    }
    return out;
}

/// Strip the cyclic prefix, transform back and collect the data bins.
/// Exactly inverts ofdm_modulate in the absence of channel and noise.
inline std::vector<std::complex<double>> ofdm_demodulate(
    const std::vector<std::complex<double>> &samples, const OfdmConfig &cfg)
{
    cfg.validate();
    const std::size_t sps = static_cast<std::size_t>(cfg.samples_per_symbol());
    if (samples.size() % sps != 0)
        throw std::invalid_argument("ofdm_demodulate: sample count not a multiple of the "
                                    "symbol length");
    const auto data_bins = cfg.data_bins();
    const std::size_t n_sym = samples.size() / sps;

    std::vector<std::complex<double>> out;
    out.reserve(n_sym * data_bins.size());
    std::vector<std::complex<double>> grid(static_cast<std::size_t>(cfg.fft_size));
    for (std::size_t s = 0; s < n_sym; ++s)
    {
        const auto *sym = samples.data() + s * sps + static_cast<std::size_t>(cfg.cyclic_prefix);
        grid.assign(sym, sym + cfg.fft_size);
        fft_unitary(grid, false);
        for (int b : data_bins)
            out.push_back(grid[static_cast<std::size_t>(detail::bin_to_index(b, cfg.fft_size))]);
    }
    return out;
}

} // namespace psoam
