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

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace psoam {

// CRC-32 (IEEE 802.3, generator 0x04C11DB7). Implemented in the reflected
// form (0xEDB88320) so byte input matches the common zlib convention:
// crc32("123456789") == 0xCBF43926.

namespace detail {
inline std::uint32_t crc32_update_bit(std::uint32_t crc, bool bit)
{
    const std::uint32_t mask = ~(((crc ^ static_cast<std::uint32_t>(bit)) & 1u) - 1u);
    return (crc >> 1) ^ (0xEDB88320u & mask);
}
} // namespace detail

/// CRC over a bit sequence (stored one bit per byte, values 0/1). Bits are
/// fed in stream order, matching the byte routine when bytes are read
/// LSB-first.
inline std::uint32_t crc32_bits(const std::uint8_t *bits, std::size_t n)
{
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < n; ++i)
        crc = detail::crc32_update_bit(crc, bits[i] != 0);
    return crc ^ 0xFFFFFFFFu;
}

inline std::uint32_t crc32_bits(const std::vector<std::uint8_t> &bits)
{
    return crc32_bits(bits.data(), bits.size());
}

/// CRC over raw bytes (zlib-compatible).
inline std::uint32_t crc32_bytes(const void *data, std::size_t n)
{
    const auto *p = static_cast<const std::uint8_t *>(data);
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < n; ++i)
    {
        std::uint8_t byte = p[i];
        for (int b = 0; b < 8; ++b)
        {
            crc = detail::crc32_update_bit(crc, (byte & 1u) != 0);
            byte >>= 1;
        }
    }
    return crc ^ 0xFFFFFFFFu;
}

inline std::uint32_t crc32_bytes(std::string_view s) { return crc32_bytes(s.data(), s.size()); }

/// Append the 32 CRC bits of `payload` (LSB of the CRC word first, matching
/// the bit-stream convention above).
inline void crc32_append(std::vector<std::uint8_t> &payload)
{
    const std::uint32_t crc = crc32_bits(payload);
    for (int b = 0; b < 32; ++b)
        payload.push_back(static_cast<std::uint8_t>((crc >> b) & 1u));
}

/// Check a frame laid out as [payload bits | 32 CRC bits].
inline bool crc32_verify(const std::uint8_t *frame, std::size_t n_with_crc)
{
    if (n_with_crc < 32)
        return false;
    const std::size_t n = n_with_crc - 32;
    const std::uint32_t crc = crc32_bits(frame, n);
    for (int b = 0; b < 32; ++b)
        if (frame[n + b] != ((crc >> b) & 1u))
            return false;
    return true;
}

} // namespace psoam
