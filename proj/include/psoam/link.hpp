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
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "psoam/capacity.hpp"
#include "psoam/channel.hpp"
#include "psoam/crc32.hpp"
#include "psoam/geometry.hpp"
#include "psoam/modegroup.hpp"
#include "psoam/ofdm.hpp"
#include "psoam/qam.hpp"
#include "psoam/rng.hpp"

namespace psoam {

/// Which transmitters drive the link and with what beams.
struct LinkSystem
{
    ChannelKind kind = ChannelKind::Mimo;
    std::vector<ModeGroup> mode_groups; // MgMimo: one per transmit element
    std::vector<int> psoam_orders;      // PsoamMimo

    int n_streams(const LinkGeometry &geom) const
    {
        switch (kind)
        {
        case ChannelKind::MgMimo:
            return static_cast<int>(mode_groups.size());
        case ChannelKind::PsoamMimo:
            return static_cast<int>(psoam_orders.size());
        default:
            return geom.n_tx;
        }
    }

    TransferMatrix build(const LinkGeometry &geom, double beta_a,
                         const FeedErrorModel &err) const
    {
        switch (kind)
        {
        case ChannelKind::Mimo:
            return build_mimo_channel(geom, beta_a);
        case ChannelKind::PsoamMimo:
            return build_psoam_channel(geom, psoam_orders, beta_a);
        case ChannelKind::MgMimo:
        {
            std::vector<ModeGroup> groups;
            groups.reserve(mode_groups.size());
            for (std::size_t n = 0; n < mode_groups.size(); ++n)
            {
                FeedErrorModel e = err;
                e.seed = derive_seed(err.seed, n);
                groups.push_back(perturb(mode_groups[n], e));
            }
            return build_mg_channel(geom, groups, beta_a);
        }
        }
        throw std::logic_error("unknown channel kind");
    }
};

enum class CsiMode
{
    Perfect,
    PilotEstimated
};

inline constexpr int kFramePayloadBits = 4096; // CRC-32 appended on top

/// One Monte-Carlo link run: geometry, transmitters, modulation and the
/// per-SNR bit budget.
struct LinkConfig
{
    Modulation modulation = Modulation::Qpsk;
    LinkGeometry geometry;
    LinkSystem system;
    std::vector<double> snr_grid_db;
    std::uint64_t bits_per_point = 0; // total over all streams, BER/EVM pass
    int frames_per_point = 250;       // CRC frames per SNR point (0 = skip)
    CsiMode csi = CsiMode::Perfect;
    std::uint64_t seed = 0;
    double noise_variance = 1.0;
    double beta_a = 1.0;
    OfdmConfig ofdm;
    FeedErrorModel feed_error; // transmit-side impairment hook

    void validate() const
    {
        geometry.validate();
        ofdm.validate();
        if (snr_grid_db.empty())
            throw std::invalid_argument("link: SNR grid must be nonempty");
        const int n = system.n_streams(geometry);
        if (n != geometry.n_tx)
            throw std::invalid_argument("link: stream count must match transmit elements");
        const std::uint64_t quantum = static_cast<std::uint64_t>(bits_per_symbol(modulation)) *
                                      static_cast<std::uint64_t>(ofdm.data_subcarriers) *
                                      static_cast<std::uint64_t>(n);
        if (bits_per_point == 0 || bits_per_point % quantum != 0)
            throw std::invalid_argument("link: bits per point must be a positive multiple of "
                                        "bits-per-symbol x data subcarriers x streams");
        if (frames_per_point < 0)
            throw std::invalid_argument("link: frames per point must be >= 0");
        if (!(noise_variance > 0.0))
            throw std::invalid_argument("link: noise variance must be > 0");
    }
};

/// Measured outputs of one link run.
struct LinkReport
{
    struct Point
    {
        double snr_db = 0.0;
        std::vector<double> ber;     // per stream
        std::vector<double> evm_pct; // per stream
        double eta_s = 1.0;          // CRC frame success rate
    };
    std::vector<Point> points;
    double spectrum_efficiency = 0.0; // bits/s/Hz
};

/// Moore-Penrose pseudo-inverse with relative rank cutoff.
inline Eigen::MatrixXcd pseudo_inverse(const Eigen::MatrixXcd &h, double rel_cutoff = kRankCutoff)
{
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sv = svd.singularValues();
    const double cut = rel_cutoff * (sv.size() ? sv(0) : 0.0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > cut)
            inv(k) = 1.0 / sv(k);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

inline int numeric_rank(const Eigen::MatrixXcd &h, double rel_cutoff = kRankCutoff)
{
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h);
    const auto &sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0)
        return 0;
    int r = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > rel_cutoff * sv(0))
            ++r;
    return r;
}

/// Zero-forcing detection x_hat = pinv(H_est) * y. Requires full column
/// rank; the Monte-Carlo chain below deliberately bypasses this check so
/// that degenerate scenarios run to completion with garbage symbols instead
/// of aborting.
inline Eigen::MatrixXcd zf_detect(const Eigen::MatrixXcd &y, const Eigen::MatrixXcd &h_est)
{
    if (y.rows() != h_est.rows())
        throw std::invalid_argument("zf_detect: dimension mismatch");
    if (numeric_rank(h_est) < h_est.cols())
        throw std::invalid_argument("ZF undefined, singular channel");
    return pseudo_inverse(h_est) * y;
}

/// Pass unit-power per-stream sample blocks (n_tx x T) through the channel:
/// streams are scaled so the transmit power budget p_total splits equally,
/// then y = H x + n per sample with complex AWGN of the given variance per
/// receive element.
inline Eigen::MatrixXcd transmit(const Eigen::MatrixXcd &streams, const TransferMatrix &h,
                                 const NoiseModel &noise, double p_total, Rng &rng)
{
    noise.validate();
    if (streams.rows() != h.entries.cols())
        throw std::invalid_argument("transmit: stream count must match transmit elements");
    if (!(p_total > 0.0))
        throw std::invalid_argument("transmit: total power must be > 0");
    const double scale = std::sqrt(p_total / static_cast<double>(streams.rows()));
    Eigen::MatrixXcd y = h.entries * (scale * streams);
    if (noise.variance > 0.0)
        for (Eigen::Index t = 0; t < y.cols(); ++t)
            for (Eigen::Index m = 0; m < y.rows(); ++m)
                y(m, t) += rng.complex_gaussian(noise.variance);
    return y;
}

/// Convenience overload seeding the generator from the noise model.
inline Eigen::MatrixXcd transmit(const Eigen::MatrixXcd &streams, const TransferMatrix &h,
                                 const NoiseModel &noise, double p_total)
{
    Rng rng(noise.seed);
    return transmit(streams, h, noise, p_total, rng);
}

namespace detail {

inline std::vector<std::uint8_t> draw_bits(Rng &rng, std::size_t n)
{
    std::vector<std::uint8_t> bits(n);
    for (auto &b : bits)
        b = rng.bit() ? 1 : 0;
    return bits;
}

/// Least-squares channel estimate from one known full-band training symbol
/// per stream (streams train one at a time so columns separate).
inline Eigen::MatrixXcd estimate_csi(const TransferMatrix &h, const LinkConfig &cfg,
                                     double p_total, Rng &rng)
{
    const int n_tx = h.n_tx();
    const int n_rx = h.n_rx();
    const double scale = std::sqrt(p_total / static_cast<double>(n_tx));
    const auto data_bins = cfg.ofdm.data_bins();
    const std::size_t n_bins = data_bins.size();

    // deterministic unit-power QPSK training sequence, shared by both ends
    Rng train_rng(derive_seed(cfg.seed, 0xC51));
    std::vector<std::complex<double>> pattern(n_bins);
    for (auto &p : pattern)
    {
        const double re = train_rng.bit() ? 1.0 : -1.0;
        const double im = train_rng.bit() ? 1.0 : -1.0;
        p = std::complex<double>(re, im) / std::sqrt(2.0);
    }
    const auto preamble_time = ofdm_modulate(pattern, cfg.ofdm);
    const std::size_t t_len = preamble_time.size();

    Eigen::MatrixXcd h_est(n_rx, n_tx);
    for (int n = 0; n < n_tx; ++n)
    {
        Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n_tx, static_cast<Eigen::Index>(t_len));
        for (std::size_t t = 0; t < t_len; ++t)
            x(n, static_cast<Eigen::Index>(t)) = scale * preamble_time[t];
        Eigen::MatrixXcd y = h.entries * x;
        if (cfg.noise_variance > 0.0)
            for (Eigen::Index t = 0; t < y.cols(); ++t)
                for (Eigen::Index m = 0; m < y.rows(); ++m)
                    y(m, t) += rng.complex_gaussian(cfg.noise_variance);
        for (int m = 0; m < n_rx; ++m)
        {
            std::vector<std::complex<double>> row(static_cast<std::size_t>(y.cols()));
            for (Eigen::Index t = 0; t < y.cols(); ++t)
                row[static_cast<std::size_t>(t)] = y(m, t);
            const auto rx_syms = ofdm_demodulate(row, cfg.ofdm);
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t k = 0; k < n_bins; ++k)
                acc += rx_syms[k] * std::conj(pattern[k]);
            h_est(m, n) = acc / (scale * static_cast<double>(n_bins));
        }
    }
    return h_est;
}

struct PointResult
{
    std::vector<double> ber;
    std::vector<double> evm_pct;
    double eta_s = 1.0;
};

/// Run one SNR point: the frameless BER/EVM pass followed by the CRC frame
/// pass. All randomness comes from the point's derived seed.
inline PointResult run_point(const LinkConfig &cfg, std::size_t point_index, bool do_ber,
                             int n_frames)
{
    const double snr_db = cfg.snr_grid_db[point_index];
    const int n_streams = cfg.system.n_streams(cfg.geometry);
    const int bps = bits_per_symbol(cfg.modulation);
    const auto data_bins = cfg.ofdm.data_bins();
    const std::size_t syms_per_ofdm = data_bins.size();

    Rng rng(derive_seed(cfg.seed, point_index));
    const TransferMatrix h = cfg.system.build(cfg.geometry, cfg.beta_a, cfg.feed_error);
    const double p_total =
        calibrate_total_power(cfg.geometry, snr_db, cfg.noise_variance, cfg.beta_a);
    const double scale = std::sqrt(p_total / static_cast<double>(n_streams));

    const Eigen::MatrixXcd h_est = (cfg.csi == CsiMode::Perfect)
                                       ? h.entries
                                       : estimate_csi(h, cfg, p_total, rng);
    const Eigen::MatrixXcd w = pseudo_inverse(h_est);

    const NoiseModel point_noise{cfg.noise_variance, 0};

    // send `n_ofdm` OFDM symbols of fresh random bits on every stream at
    // once; returns per-stream detected unit-power symbols plus the bits
    const auto send_block = [&](std::size_t n_ofdm, std::vector<std::vector<std::uint8_t>> &bits,
                                std::vector<std::vector<std::complex<double>>> &tx_syms,
                                std::vector<std::vector<std::complex<double>>> &rx_syms) {
        const std::size_t bits_per_stream = n_ofdm * syms_per_ofdm * static_cast<std::size_t>(bps);
        bits.resize(static_cast<std::size_t>(n_streams));
        tx_syms.resize(static_cast<std::size_t>(n_streams));
        Eigen::MatrixXcd x;
        for (int s = 0; s < n_streams; ++s)
        {
            bits[static_cast<std::size_t>(s)] = draw_bits(rng, bits_per_stream);
            tx_syms[static_cast<std::size_t>(s)] =
                qam_map(bits[static_cast<std::size_t>(s)], cfg.modulation);
            const auto time = ofdm_modulate(tx_syms[static_cast<std::size_t>(s)], cfg.ofdm);
            if (s == 0)
                x.resize(n_streams, static_cast<Eigen::Index>(time.size()));
            for (std::size_t t = 0; t < time.size(); ++t)
                x(s, static_cast<Eigen::Index>(t)) = time[t];
        }
        const Eigen::MatrixXcd y = transmit(x, h, point_noise, p_total, rng);

        Eigen::MatrixXcd yf(h.n_rx(), static_cast<Eigen::Index>(n_ofdm * syms_per_ofdm));
        std::vector<std::complex<double>> row(static_cast<std::size_t>(y.cols()));
        for (int m = 0; m < h.n_rx(); ++m)
        {
            for (Eigen::Index t = 0; t < y.cols(); ++t)
                row[static_cast<std::size_t>(t)] = y(m, t);
            const auto d = ofdm_demodulate(row, cfg.ofdm);
            for (std::size_t k = 0; k < d.size(); ++k)
                yf(m, static_cast<Eigen::Index>(k)) = d[k];
        }
        const Eigen::MatrixXcd xf = w * yf;
        rx_syms.assign(static_cast<std::size_t>(n_streams), {});
        for (int s = 0; s < n_streams; ++s)
        {
            auto &v = rx_syms[static_cast<std::size_t>(s)];
            v.resize(static_cast<std::size_t>(xf.cols()));
            for (Eigen::Index k = 0; k < xf.cols(); ++k)
                v[static_cast<std::size_t>(k)] = xf(s, k) / scale;
        }
    };

    PointResult res;
    res.ber.assign(static_cast<std::size_t>(n_streams), 0.0);
    res.evm_pct.assign(static_cast<std::size_t>(n_streams), 0.0);

    if (do_ber)
    {
        const std::uint64_t bits_per_stream = cfg.bits_per_point / static_cast<std::uint64_t>(n_streams);
        const std::uint64_t total_ofdm =
            bits_per_stream / (static_cast<std::uint64_t>(bps) * syms_per_ofdm);
        std::vector<std::uint64_t> bit_errors(static_cast<std::size_t>(n_streams), 0);
        std::vector<double> evm_acc(static_cast<std::size_t>(n_streams), 0.0);
        std::uint64_t done = 0;
        std::vector<std::vector<std::uint8_t>> bits;
        std::vector<std::vector<std::complex<double>>> tx_syms, rx_syms;
        while (done < total_ofdm)
        {
            const std::size_t n_ofdm =
                static_cast<std::size_t>(std::min<std::uint64_t>(256, total_ofdm - done));
            send_block(n_ofdm, bits, tx_syms, rx_syms);
            for (int s = 0; s < n_streams; ++s)
            {
                const auto &tx = tx_syms[static_cast<std::size_t>(s)];
                const auto &rx = rx_syms[static_cast<std::size_t>(s)];
                for (std::size_t k = 0; k < rx.size(); ++k)
                    evm_acc[static_cast<std::size_t>(s)] += std::norm(rx[k] - tx[k]);
                const auto hat = qam_demap(rx, cfg.modulation);
                const auto &ref = bits[static_cast<std::size_t>(s)];
                for (std::size_t k = 0; k < hat.size(); ++k)
                    bit_errors[static_cast<std::size_t>(s)] += (hat[k] != ref[k]) ? 1u : 0u;
            }
            done += n_ofdm;
        }
        const double n_bits = static_cast<double>(bits_per_stream);
        const double n_syms = static_cast<double>(total_ofdm * syms_per_ofdm);
        for (int s = 0; s < n_streams; ++s)
        {
            res.ber[static_cast<std::size_t>(s)] =
                static_cast<double>(bit_errors[static_cast<std::size_t>(s)]) / n_bits;
            // reference constellation has unit RMS power
            res.evm_pct[static_cast<std::size_t>(s)] =
                100.0 * std::sqrt(evm_acc[static_cast<std::size_t>(s)] / n_syms);
        }
    }

    if (n_frames > 0)
    {
        const std::size_t frame_bits = static_cast<std::size_t>(kFramePayloadBits) + 32;
        const std::size_t bits_per_ofdm = syms_per_ofdm * static_cast<std::size_t>(bps);
        std::size_t ofdm_per_frame = (frame_bits + bits_per_ofdm - 1) / bits_per_ofdm;
        if (cfg.ofdm.symbols_per_frame > 0)
        {
            if (static_cast<std::size_t>(cfg.ofdm.symbols_per_frame) < ofdm_per_frame)
                throw std::invalid_argument("ofdm: symbols_per_frame cannot hold the frame "
                                            "payload plus CRC");
            ofdm_per_frame = static_cast<std::size_t>(cfg.ofdm.symbols_per_frame);
        }
        const std::size_t padded_bits = ofdm_per_frame * bits_per_ofdm;

        std::uint64_t ok = 0;
        std::vector<std::vector<std::uint8_t>> frames(static_cast<std::size_t>(n_streams));
        std::vector<std::vector<std::complex<double>>> tx_syms, rx_syms;
        for (int f = 0; f < n_frames; ++f)
        {
            Eigen::MatrixXcd x;
            for (int s = 0; s < n_streams; ++s)
            {
                auto &frame = frames[static_cast<std::size_t>(s)];
                frame = draw_bits(rng, kFramePayloadBits);
                crc32_append(frame);
                frame.resize(padded_bits, 0);
                const auto syms = qam_map(frame, cfg.modulation);
                const auto time = ofdm_modulate(syms, cfg.ofdm);
                if (s == 0)
                    x.resize(n_streams, static_cast<Eigen::Index>(time.size()));
                for (std::size_t t = 0; t < time.size(); ++t)
                    x(s, static_cast<Eigen::Index>(t)) = time[t];
            }
            const Eigen::MatrixXcd y = transmit(x, h, point_noise, p_total, rng);
            Eigen::MatrixXcd yf(h.n_rx(), static_cast<Eigen::Index>(ofdm_per_frame * syms_per_ofdm));
            std::vector<std::complex<double>> row(static_cast<std::size_t>(y.cols()));
            for (int m = 0; m < h.n_rx(); ++m)
            {
                for (Eigen::Index t = 0; t < y.cols(); ++t)
                    row[static_cast<std::size_t>(t)] = y(m, t);
                const auto d = ofdm_demodulate(row, cfg.ofdm);
                for (std::size_t k = 0; k < d.size(); ++k)
                    yf(m, static_cast<Eigen::Index>(k)) = d[k];
            }
            const Eigen::MatrixXcd xf = w * yf;
            for (int s = 0; s < n_streams; ++s)
            {
                std::vector<std::complex<double>> v(static_cast<std::size_t>(xf.cols()));
                for (Eigen::Index k = 0; k < xf.cols(); ++k)
                    v[static_cast<std::size_t>(k)] = xf(s, k) / scale;
                const auto hat = qam_demap(v, cfg.modulation);
                ok += crc32_verify(hat.data(), frame_bits) ? 1u : 0u;
            }
        }
        res.eta_s = static_cast<double>(ok) / (static_cast<double>(n_frames) * n_streams);
    }
    return res;
}

} // namespace detail

/// Uncoded spectrum efficiency: bits per symbol x streams x the data
/// fraction of the active subcarriers.
inline double spectrum_efficiency(Modulation m, int n_streams, const OfdmConfig &cfg)
{
    return static_cast<double>(bits_per_symbol(m)) * static_cast<double>(n_streams) *
           static_cast<double>(cfg.data_subcarriers) / static_cast<double>(cfg.active_subcarriers);
}

/// Full Monte-Carlo run over the SNR grid: bits -> QAM -> OFDM -> channel ->
/// AWGN -> (CSI) -> ZF -> demap, plus CRC frame accounting. Deterministic
/// for a given (config, seed); points use derived seeds so multi-threaded
/// execution is schedule-independent.
inline LinkReport simulate_link(const LinkConfig &cfg, int n_threads = 1)
{
    cfg.validate();
    LinkReport report;
    report.spectrum_efficiency =
        spectrum_efficiency(cfg.modulation, cfg.system.n_streams(cfg.geometry), cfg.ofdm);
    report.points.resize(cfg.snr_grid_db.size());

    const auto worker = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < cfg.snr_grid_db.size(); i += stride)
        {
            const auto r = detail::run_point(cfg, i, true, cfg.frames_per_point);
            report.points[i] = {cfg.snr_grid_db[i], r.ber, r.evm_pct, r.eta_s};
        }
    };

    if (n_threads <= 1 || cfg.snr_grid_db.size() < 2)
        worker(0, 1);
    else
    {
        const std::size_t n =
            std::min<std::size_t>(static_cast<std::size_t>(n_threads), cfg.snr_grid_db.size());
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (std::size_t t = 0; t < n; ++t)
            pool.emplace_back(worker, t, n);
        for (auto &th : pool)
            th.join();
    }
    return report;
}

/// CRC-verified frame success rate eta_s at every SNR grid point.
inline std::vector<double> frame_success_rate(const LinkConfig &cfg, int n_frames)
{
    cfg.validate();
    if (n_frames < 1)
        throw std::invalid_argument("frame_success_rate: need at least one frame");
    std::vector<double> eta(cfg.snr_grid_db.size(), 0.0);
    for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i)
        eta[i] = detail::run_point(cfg, i, false, n_frames).eta_s;
    return eta;
}

} // namespace psoam
