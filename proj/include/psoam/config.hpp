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

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "psoam/capacity.hpp"
#include "psoam/link.hpp"
#include "psoam/modegroup.hpp"
#include "psoam/pasr.hpp"

namespace psoam {

using json = nlohmann::json;

enum class Scenario
{
    CapacitySweep,
    BerSweep,
    Pasr,
    Robustness,
    Pattern
};

inline Scenario scenario_from_string(const std::string &s)
{
    if (s == "capacity_sweep")
        return Scenario::CapacitySweep;
    if (s == "ber_sweep")
        return Scenario::BerSweep;
    if (s == "pasr")
        return Scenario::Pasr;
    if (s == "robustness")
        return Scenario::Robustness;
    if (s == "pattern")
        return Scenario::Pattern;
    throw std::invalid_argument("unknown scenario '" + s + "'");
}

/// Parse a mode-group spec: either the shorthand "l_first..l_last" or a
/// list of [order, amplitude, phase_deg] triples.
inline ModeGroup parse_mode_group(const json &j)
{
    if (j.is_string())
    {
        const std::string s = j.get<std::string>();
        const auto pos = s.find("..");
        if (pos == std::string::npos)
            throw std::invalid_argument("mode group shorthand must be 'l_first..l_last'");
        const int lo = std::stoi(s.substr(0, pos));
        const int hi = std::stoi(s.substr(pos + 2));
        return ModeGroup::consecutive(lo, hi);
    }
    if (j.is_array())
    {
        std::vector<PsoamMode> modes;
        for (const auto &e : j)
        {
            if (!e.is_array() || e.size() < 1 || e.size() > 3)
                throw std::invalid_argument("mode entry must be [order, amplitude, phase_deg]");
            if (!e[0].is_number_integer())
                throw std::invalid_argument("mode order must be an integer");
            PsoamMode m;
            m.order = e[0].get<int>();
            if (e.size() > 1)
                m.amplitude = e[1].get<double>();
            if (e.size() > 2)
                m.phase_rad = e[2].get<double>() * kPi / 180.0;
            modes.push_back(m);
        }
        return ModeGroup(std::move(modes));
    }
    throw std::invalid_argument("mode group must be a shorthand string or a triple list");
}

inline ChannelKind channel_kind_from_string(const std::string &s)
{
    if (s == "mimo")
        return ChannelKind::Mimo;
    if (s == "mg_mimo")
        return ChannelKind::MgMimo;
    if (s == "psoam_mimo")
        return ChannelKind::PsoamMimo;
    throw std::invalid_argument("unknown system '" + s + "' (mimo|mg_mimo|psoam_mimo)");
}

inline Modulation modulation_from_string(const std::string &s)
{
    if (s == "qpsk")
        return Modulation::Qpsk;
    if (s == "qam16")
        return Modulation::Qam16;
    if (s == "qam64")
        return Modulation::Qam64;
    throw std::invalid_argument("unknown modulation '" + s + "' (qpsk|qam16|qam64)");
}

namespace detail {

inline double wavelength_from(const json &j)
{
    if (j.contains("wavelength_m"))
        return j.at("wavelength_m").get<double>();
    if (j.contains("frequency_ghz"))
        return kSpeedOfLight / (j.at("frequency_ghz").get<double>() * 1e9);
    throw std::invalid_argument("need 'wavelength_m' or 'frequency_ghz'");
}

inline FeedErrorModel feed_error_from(const json &j, std::uint64_t default_seed)
{
    FeedErrorModel e;
    e.seed = default_seed;
    if (!j.is_object())
        return e;
    e.amplitude_error_rms = j.value("amplitude_rms", 0.0);
    if (j.contains("phase_rms_deg"))
        e.phase_error_rms = j.at("phase_rms_deg").get<double>() * kPi / 180.0;
    if (j.contains("seed"))
        e.seed = j.at("seed").get<std::uint64_t>();
    return e;
}

} // namespace detail

struct PasrConfig
{
    std::vector<ModeGroup> pair;
    double distance_m = 2.0;
    double wavelength_m = kSpeedOfLight / 10.2e9;
    int n_rx = 2;
    FeedErrorModel feed_error;
    std::vector<double> tone_offsets_hz{-0.5e6, 0.5e6};
};

struct RobustnessConfig
{
    std::vector<ChannelKind> systems;
    Modulation modulation = Modulation::Qam64;
    LinkGeometry geometry; // distance filled per sweep entry
    std::vector<ModeGroup> mode_groups;
    std::vector<int> psoam_orders;
    std::vector<double> distances_m;
    double snr_db = 28.0;
    int n_frames = 250;
};

struct PatternConfig
{
    std::vector<ModeGroup> group; // single element; vector avoids default-ctor needs
    double phi_min_deg = -180.0;
    double phi_max_deg = 180.0;
    int points = 721;
};

/// A fully-parsed experiment description: one scenario per config file.
struct ExperimentConfig
{
    Scenario scenario = Scenario::Pattern;
    std::uint64_t seed = 0;
    std::optional<SweepScenario> sweep;
    std::vector<double> cg_targets;
    double cg_crossing_rel_tol = 0.0; // fallback for figure-read crossings
    std::optional<LinkConfig> link;
    std::optional<PasrConfig> pasr;
    std::optional<RobustnessConfig> robustness;
    std::optional<PatternConfig> pattern;
};

/// One validation finding, with a config-path locator.
struct Diagnostic
{
    std::string path;
    std::string message;
};

namespace detail {

inline LinkGeometry geometry_from(const json &j, int n_streams, bool need_distance = true)
{
    const std::string layout = j.value("tx_layout", "ula");
    const double wl = wavelength_from(j);
    const double d = need_distance ? j.at("distance_m").get<double>() : 1.0;
    const int n_tx = j.value("n_tx", n_streams);
    const int n_rx = j.value("n_rx", n_streams);
    if (layout == "coaxial")
        return LinkGeometry::coaxial(n_tx, n_rx, j.at("rx_aperture_m").get<double>(), d, wl);
    if (layout != "ula")
        throw std::invalid_argument("tx_layout must be 'coaxial' or 'ula'");
    return LinkGeometry::ula(n_tx, n_rx, j.at("tx_aperture_m").get<double>(),
                             j.at("rx_aperture_m").get<double>(), d, wl);
}

inline std::vector<ModeGroup> mode_groups_from(const json &j)
{
    std::vector<ModeGroup> groups;
    for (const auto &e : j)
        groups.push_back(parse_mode_group(e));
    return groups;
}

inline ExperimentConfig parse_capacity_sweep(const json &j, ExperimentConfig cfg)
{
    SweepScenario sc;
    sc.kind = channel_kind_from_string(j.at("system").get<std::string>());
    sc.wavelength_m = wavelength_from(j);
    sc.tx_layout = (j.value("tx_layout", sc.kind == ChannelKind::Mimo ? "ula" : "coaxial") ==
                    "coaxial")
                       ? TxLayout::Coaxial
                       : TxLayout::Ula;
    // Apertures: meters, wavelengths, or the l_max parametrization
    // (aperture = l_max * lambda / pi).
    const auto aperture = [&](const char *m_key, const char *wl_key) -> double {
        if (j.contains(m_key))
            return j.at(m_key).get<double>();
        if (j.contains(wl_key))
            return j.at(wl_key).get<double>() * sc.wavelength_m;
        if (j.contains("l_max"))
            return j.at("l_max").get<double>() * sc.wavelength_m / kPi;
        return 0.0;
    };
    sc.rx_aperture_m = aperture("rx_aperture_m", "rx_aperture_wavelengths");
    sc.tx_aperture_m = aperture("tx_aperture_m", "tx_aperture_wavelengths");
    if (j.contains("mode_groups"))
        sc.mode_groups = mode_groups_from(j.at("mode_groups"));
    if (j.contains("psoam_orders"))
        sc.psoam_orders = j.at("psoam_orders").get<std::vector<int>>();
    sc.target_snr_db = j.value("target_snr_db", 30.0);
    sc.n_streams_mimo = j.value("n_streams", 2);
    const auto &grid = j.at("grid");
    sc.distances_wavelengths =
        log_spaced(grid.value("min_wavelengths", 10.0), grid.value("max_wavelengths", 2000.0),
                   grid.value("points", 400));
    sc.label = j.value("label", std::string{});
    cfg.sweep = std::move(sc);
    if (j.contains("cg_targets"))
        cfg.cg_targets = j.at("cg_targets").get<std::vector<double>>();
    cfg.cg_crossing_rel_tol = j.value("cg_crossing_rel_tol", 0.0);
    return cfg;
}

inline LinkSystem link_system_from(const json &j)
{
    LinkSystem sys;
    sys.kind = channel_kind_from_string(j.at("system").get<std::string>());
    if (j.contains("mode_groups"))
        sys.mode_groups = mode_groups_from(j.at("mode_groups"));
    if (j.contains("psoam_orders"))
        sys.psoam_orders = j.at("psoam_orders").get<std::vector<int>>();
    if (sys.kind == ChannelKind::MgMimo && sys.mode_groups.empty())
        throw std::invalid_argument("mg_mimo needs 'mode_groups'");
    if (sys.kind == ChannelKind::PsoamMimo && sys.psoam_orders.empty())
        throw std::invalid_argument("psoam_mimo needs 'psoam_orders'");
    return sys;
}

inline ExperimentConfig parse_ber_sweep(const json &j, ExperimentConfig cfg)
{
    LinkConfig lc;
    lc.modulation = modulation_from_string(j.at("modulation").get<std::string>());
    lc.system = link_system_from(j);
    int n = j.at("geometry").value("n_tx", 2);
    if (lc.system.kind == ChannelKind::MgMimo)
        n = static_cast<int>(lc.system.mode_groups.size());
    else if (lc.system.kind == ChannelKind::PsoamMimo)
        n = static_cast<int>(lc.system.psoam_orders.size());
    lc.geometry = geometry_from(j.at("geometry"), n);
    lc.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
    lc.bits_per_point = j.at("bits_per_point").get<std::uint64_t>();
    lc.frames_per_point = j.value("frames_per_point", 250);
    lc.csi = j.value("csi", std::string("perfect")) == "pilot" ? CsiMode::PilotEstimated
                                                               : CsiMode::Perfect;
    lc.seed = cfg.seed;
    if (j.contains("feed_error"))
        lc.feed_error = feed_error_from(j.at("feed_error"), cfg.seed);
    cfg.link = std::move(lc);
    return cfg;
}

inline ExperimentConfig parse_pasr(const json &j, ExperimentConfig cfg)
{
    PasrConfig pc;
    pc.pair = mode_groups_from(j.at("mode_groups"));
    if (pc.pair.size() != 2)
        throw std::invalid_argument("pasr needs exactly two mode groups");
    pc.distance_m = j.at("distance_m").get<double>();
    pc.wavelength_m = wavelength_from(j);
    pc.n_rx = j.value("n_rx", 2);
    pc.feed_error = feed_error_from(j.value("feed_error", json()), cfg.seed);
    if (j.contains("tone_offsets_hz"))
        pc.tone_offsets_hz = j.at("tone_offsets_hz").get<std::vector<double>>();
    cfg.pasr = std::move(pc);
    return cfg;
}

inline ExperimentConfig parse_robustness(const json &j, ExperimentConfig cfg)
{
    RobustnessConfig rc;
    for (const auto &s : j.at("systems"))
        rc.systems.push_back(channel_kind_from_string(s.get<std::string>()));
    rc.modulation = modulation_from_string(j.at("modulation").get<std::string>());
    if (j.contains("mode_groups"))
        rc.mode_groups = mode_groups_from(j.at("mode_groups"));
    if (j.contains("psoam_orders"))
        rc.psoam_orders = j.at("psoam_orders").get<std::vector<int>>();
    const int n = rc.mode_groups.empty() ? 2 : static_cast<int>(rc.mode_groups.size());
    rc.geometry = geometry_from(j.at("geometry"), n, /*need_distance=*/false);
    rc.distances_m = j.at("distances_m").get<std::vector<double>>();
    rc.snr_db = j.at("snr_db").get<double>();
    rc.n_frames = j.value("n_frames", 250);
    cfg.robustness = std::move(rc);
    return cfg;
}

inline ExperimentConfig parse_pattern(const json &j, ExperimentConfig cfg)
{
    PatternConfig pc;
    pc.group.push_back(parse_mode_group(j.at("mode_group")));
    pc.phi_min_deg = j.value("phi_min_deg", -180.0);
    pc.phi_max_deg = j.value("phi_max_deg", 180.0);
    pc.points = j.value("points", 721);
    if (pc.points < 2 || !(pc.phi_max_deg > pc.phi_min_deg))
        throw std::invalid_argument("pattern: need points >= 2 and phi_max > phi_min");
    cfg.pattern = std::move(pc);
    return cfg;
}

} // namespace detail

/// Parse a JSON experiment config; throws std::invalid_argument with a
/// human-readable message on any violation.
inline ExperimentConfig parse_config(const json &j)
{
    ExperimentConfig cfg;
    cfg.seed = j.value("seed", 0ULL);
    cfg.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    switch (cfg.scenario)
    {
    case Scenario::CapacitySweep:
        return detail::parse_capacity_sweep(j, std::move(cfg));
    case Scenario::BerSweep:
        return detail::parse_ber_sweep(j, std::move(cfg));
    case Scenario::Pasr:
        return detail::parse_pasr(j, std::move(cfg));
    case Scenario::Robustness:
        return detail::parse_robustness(j, std::move(cfg));
    case Scenario::Pattern:
        return detail::parse_pattern(j, std::move(cfg));
    }
    throw std::logic_error("unknown scenario");
}

inline ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read config file " + path);
    json j;
    in >> j;
    return parse_config(j);
}

/// Collect every invariant violation without side effects. An empty list
/// means the config is runnable.
inline std::vector<Diagnostic> validate_config_json(const json &j)
{
    std::vector<Diagnostic> diags;
    ExperimentConfig cfg;
    try
    {
        cfg = parse_config(j);
    }
    catch (const std::exception &e)
    {
        diags.push_back({"$", e.what()});
        return diags;
    }

    const auto check = [&](const std::string &path, bool ok, const std::string &msg) {
        if (!ok)
            diags.push_back({path, msg});
    };

    if (cfg.sweep)
    {
        const auto &sc = *cfg.sweep;
        check("$.grid", !sc.distances_wavelengths.empty(), "distance grid is empty");
        check("$.rx_aperture", sc.rx_aperture_m >= 0.0, "negative receive aperture");
        check("$.tx_aperture", sc.tx_aperture_m >= 0.0, "negative transmit aperture");
        if (sc.kind == ChannelKind::MgMimo)
            check("$.mode_groups", !sc.mode_groups.empty(), "mg_mimo needs mode groups");
        if (sc.kind == ChannelKind::PsoamMimo)
            check("$.psoam_orders", !sc.psoam_orders.empty(), "psoam_mimo needs orders");
    }
    if (cfg.link)
    {
        try
        {
            cfg.link->validate();
        }
        catch (const std::exception &e)
        {
            diags.push_back({"$", e.what()});
        }
        for (std::size_t i = 1; i < cfg.link->snr_grid_db.size(); ++i)
            check("$.snr_grid_db", cfg.link->snr_grid_db[i] > cfg.link->snr_grid_db[i - 1],
                  "SNR grid must be strictly increasing");
    }
    if (cfg.pasr)
    {
        const double dle =
            equivalent_order(cfg.pasr->pair[0]) - equivalent_order(cfg.pasr->pair[1]);
        check("$.mode_groups", dle != 0.0, "PASR undefined: equivalent order difference is zero");
        check("$.n_rx", cfg.pasr->n_rx >= 2, "PASR needs at least two receivers");
        check("$.distance_m", cfg.pasr->distance_m > 0.0, "distance must be > 0");
    }
    if (cfg.robustness)
    {
        check("$.systems", !cfg.robustness->systems.empty(), "no systems listed");
        check("$.distances_m", !cfg.robustness->distances_m.empty(), "no distances listed");
        for (double d : cfg.robustness->distances_m)
            check("$.distances_m", d > 0.0, "distances must be > 0");
        check("$.n_frames", cfg.robustness->n_frames >= 1, "need at least one frame");
    }
    return diags;
}

} // namespace psoam
