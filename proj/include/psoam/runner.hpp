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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psoam/config.hpp"
#include "psoam/crc32.hpp"
#include "psoam/csv.hpp"

namespace psoam {

inline constexpr const char *kToolVersion = "0.1.0";

/// Stable 64-bit FNV-1a over the raw config bytes; identifies a run.
inline std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : data)
    {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

struct RunResult
{
    std::filesystem::path results_csv;
    std::filesystem::path manifest;
    json summary;
};

namespace detail {

inline std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string hex32(std::uint32_t v)
{
    char buf[9];
    std::snprintf(buf, sizeof(buf), "%08x", v);
    return buf;
}

inline CsvWriter run_capacity_sweep(const ExperimentConfig &cfg, json &summary)
{
    const auto curve = capacity_gain_sweep(*cfg.sweep);
    CsvWriter csv({"D_wavelengths", "D_meters", "cg", "capacity_bits"});
    double peak = 0.0, peak_d = 0.0;
    for (const auto &p : curve.points)
    {
        csv.append_row({format_double(p.d_wavelengths), format_double(p.d_m), format_double(p.cg),
                        format_double(p.capacity_bits)});
        if (p.cg > peak)
        {
            peak = p.cg;
            peak_d = p.d_wavelengths;
        }
    }
    summary["peak_cg"] = peak;
    summary["peak_cg_distance_wavelengths"] = peak_d;
    for (double target : cfg.cg_targets)
    {
        json entry;
        entry["target_cg"] = target;
        try
        {
            entry["distance_wavelengths"] = distance_at_cg(curve, target);
        }
        catch (const std::exception &e)
        {
            entry["error"] = e.what();
            // a curve that tops out just under the target still has a
            // well-defined crossing at figure-reading precision
            if (cfg.cg_crossing_rel_tol > 0.0)
            {
                try
                {
                    entry["distance_wavelengths_at_rel_tol"] =
                        distance_at_cg(curve, target, cfg.cg_crossing_rel_tol);
                    entry["rel_tol"] = cfg.cg_crossing_rel_tol;
                }
                catch (const std::exception &)
                {
                }
            }
        }
        summary["cg_crossings"].push_back(entry);
    }
    return csv;
}

inline CsvWriter run_ber_sweep(const ExperimentConfig &cfg, int threads, json &summary)
{
    LinkConfig lc = *cfg.link;
    lc.seed = cfg.seed;
    const auto report = simulate_link(lc, threads);
    CsvWriter csv({"snr_db", "stream", "ber", "evm_pct", "eta_s"});
    for (const auto &p : report.points)
        for (std::size_t s = 0; s < p.ber.size(); ++s)
            csv.append_row({format_double(p.snr_db), std::to_string(s), format_double(p.ber[s]),
                            format_double(p.evm_pct[s]), format_double(p.eta_s)});
    summary["spectrum_efficiency_bits_per_s_per_hz"] = report.spectrum_efficiency;
    return csv;
}

inline CsvWriter run_pasr(const ExperimentConfig &cfg, json &summary)
{
    const auto &pc = *cfg.pasr;
    const auto ptm = pasr_experiment(pc.pair[0], pc.pair[1], pc.distance_m, pc.wavelength_m,
                                     pc.feed_error, pc.n_rx, pc.tone_offsets_hz);
    const auto ct = crosstalk_db(ptm);
    const double dle = equivalent_order(pc.pair[0]) - equivalent_order(pc.pair[1]);
    const auto arr = pasr_placement(pc.distance_m, dle, pc.n_rx);

    // Mirrors the measured power-transfer-matrix layout: one column per
    // demux setting, rows are the transmitted groups, powers in dBm
    // (unit-amplitude tones into the free-space model; ratios meaningful).
    std::vector<std::string> header{"quantity"};
    for (std::size_t m = 0; m < static_cast<std::size_t>(ptm.linear.cols()); ++m)
        header.push_back("demux_mg" + std::to_string(m + 1));
    CsvWriter csv(header);
    for (Eigen::Index n = 0; n < ptm.linear.rows(); ++n)
    {
        std::vector<std::string> row{"tx_mg" + std::to_string(n + 1) + "_dbm"};
        for (Eigen::Index m = 0; m < ptm.linear.cols(); ++m)
            row.push_back(format_double(10.0 * std::log10(ptm.linear(n, m)) + 30.0));
        csv.append_row(row);
    }
    std::vector<std::string> ctrow{"ct_db"};
    for (double v : ct)
        ctrow.push_back(format_double(v));
    csv.append_row(ctrow);

    summary["delta_l_e"] = dle;
    summary["phi_s_deg"] = arr.phi_s_rad * 180.0 / kPi;
    summary["aperture_m"] = pasr_aperture(pc.distance_m, dle);
    summary["crosstalk_db"] = ct;
    return csv;
}

inline CsvWriter run_robustness(const ExperimentConfig &cfg, json &summary)
{
    const auto &rc = *cfg.robustness;
    CsvWriter csv({"system", "distance_m", "snr_db", "modulation", "eta_s"});
    for (ChannelKind kind : rc.systems)
    {
        const std::string name = kind == ChannelKind::Mimo
                                     ? "mimo"
                                     : (kind == ChannelKind::MgMimo ? "mg_mimo" : "psoam_mimo");
        for (double d : rc.distances_m)
        {
            LinkConfig lc;
            lc.modulation = rc.modulation;
            lc.geometry = rc.geometry;
            lc.geometry.distance_m = d;
            lc.system.kind = kind;
            lc.system.mode_groups = rc.mode_groups;
            lc.system.psoam_orders = rc.psoam_orders;
            lc.snr_grid_db = {rc.snr_db};
            const int n = lc.system.n_streams(lc.geometry);
            lc.bits_per_point = static_cast<std::uint64_t>(bits_per_symbol(rc.modulation)) *
                                static_cast<std::uint64_t>(lc.ofdm.data_subcarriers) *
                                static_cast<std::uint64_t>(n);
            lc.seed = cfg.seed;
            const double eta = frame_success_rate(lc, rc.n_frames)[0];
            csv.append_row({name, format_double(d), format_double(rc.snr_db),
                            modulation_name(rc.modulation), format_double(eta)});
            summary["eta_s"][name][format_double(d)] = eta;
        }
    }
    return csv;
}

inline CsvWriter run_pattern(const ExperimentConfig &cfg, json &summary)
{
    const auto &pc = *cfg.pattern;
    const ModeGroup &mg = pc.group.front();
    CsvWriter csv({"phi_deg", "gain_db", "phase_deg"});
    const double step = (pc.phi_max_deg - pc.phi_min_deg) / static_cast<double>(pc.points - 1);
    for (int i = 0; i < pc.points; ++i)
    {
        const double phi_deg = pc.phi_min_deg + step * i;
        const auto bp = beam_pattern(mg, phi_deg * kPi / 180.0);
        const double power = std::norm(bp);
        csv.append_row({format_double(phi_deg),
                        format_double(power > 0.0 ? 10.0 * std::log10(power) : -400.0),
                        format_double(std::arg(bp) * 180.0 / kPi)});
    }
    summary["boresight_gain_db"] = 10.0 * std::log10(std::norm(beam_pattern(mg, 0.0)));
    if (mg.common_interval() || mg.size() == 1)
        summary["equivalent_order"] = equivalent_order(mg);
    return csv;
}

} // namespace detail

/// Execute one experiment config: writes results.csv and manifest.json into
/// `out_dir`. Identical (config, seed) inputs reproduce byte-identical
/// results.csv.
inline RunResult run_experiment(const std::string &config_path, const std::string &out_dir,
                                std::optional<std::uint64_t> seed_override = {}, int threads = 1)
{
    std::ifstream in(config_path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read config file " + config_path);
    std::stringstream raw;
    raw << in.rdbuf();
    const std::string config_bytes = raw.str();

    ExperimentConfig cfg = parse_config(json::parse(config_bytes));
    if (seed_override)
        cfg.seed = *seed_override;

    const auto t0 = std::chrono::steady_clock::now();
    json summary;
    CsvWriter csv = [&] {
        switch (cfg.scenario)
        {
        case Scenario::CapacitySweep:
            return detail::run_capacity_sweep(cfg, summary);
        case Scenario::BerSweep:
            return detail::run_ber_sweep(cfg, threads, summary);
        case Scenario::Pasr:
            return detail::run_pasr(cfg, summary);
        case Scenario::Robustness:
            return detail::run_robustness(cfg, summary);
        case Scenario::Pattern:
            return detail::run_pattern(cfg, summary);
        }
        throw std::logic_error("unknown scenario");
    }();

    std::filesystem::create_directories(out_dir);
    RunResult res;
    res.results_csv = std::filesystem::path(out_dir) / "results.csv";
    res.manifest = std::filesystem::path(out_dir) / "manifest.json";
    csv.write(res.results_csv.string());

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json manifest;
    manifest["tool"] = "psoamsim";
    manifest["version"] = kToolVersion;
    manifest["config_file"] = std::filesystem::path(config_path).filename().string();
    manifest["config_fnv1a64"] = detail::hex64(fnv1a64(config_bytes));
    manifest["seed"] = cfg.seed;
    manifest["threads"] = threads;
    manifest["outputs"] = json::array();
    manifest["outputs"].push_back({{"file", "results.csv"},
                                   {"bytes", csv.str().size()},
                                   {"crc32", detail::hex32(crc32_bytes(csv.str()))}});
    manifest["duration_seconds"] = elapsed;
    manifest["summary"] = summary;
    res.summary = summary;

    std::ofstream mf(res.manifest, std::ios::binary);
    if (!mf)
        throw std::runtime_error("cannot write " + res.manifest.string());
    mf << manifest.dump(2) << '\n';
    return res;
}

/// Validate a config file; returns the diagnostics (empty = valid).
inline std::vector<Diagnostic> validate_experiment(const std::string &config_path)
{
    std::ifstream in(config_path, std::ios::binary);
    if (!in)
        return {{"$", "cannot read config file " + config_path}};
    json j;
    try
    {
        in >> j;
    }
    catch (const std::exception &e)
    {
        return {{"$", std::string("parse failure: ") + e.what()}};
    }
    return validate_config_json(j);
}

} // namespace psoam
