// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qkdsim/event_sim.hpp"
#include "qkdsim/key_rate.hpp"
#include "qkdsim/link_budget.hpp"
#include "qkdsim/orbit_geometry.hpp"

namespace qkdsim {

struct IntegrationSettings {
    double min_elevation_rad = 0.3490658503988659;  // 20 deg
    double loss_cutoff_db = 45.0;
    double max_window_s = 300.0;
    double dt_s = 1.0;
};

/// Settings used only by the clock-recovery part of the montecarlo command.
struct ClockSettings {
    double bin_s = 1e-9;
    double block_s = 0.1;
    double max_offset_s = 50e-6;
};

/// Grids for the sweep-style commands. An empty list means the scenario's
/// own value (source.d_b_cps, orbit.ground_track_offset_km, link wavelength
/// and zenith attenuation).
struct SweepGrids {
    double attenuation_min_db = 20.0;
    double attenuation_max_db = 60.0;
    double attenuation_step_db = 0.5;
    std::vector<double> dcr_values_cps;
    std::vector<double> link_offsets_km = {0.0, 500.0};
    std::vector<double> wavelengths_m = {808e-9, 1550e-9};
    std::vector<double> a_atm0_values_db = {3.0, 2.0};  ///< paired with wavelengths_m
    double time_step_s = 1.0;
};

struct YieldSettings {
    double passes_per_year = 100.0;
    /// Empty means a single bin at the scenario's r0.
    FriedHistogram histogram;
};

struct DataBudgetSettings {
    double horizon_s = 0.5 * 365.25 * 86400.0;
    double delta_t_s = 25e-12;
    double event_rate_cps = 1e4;
    double experiment_s = 300.0;
    double passes_per_day = 3.0;
    int housekeeping_channels = 64;
    int housekeeping_bytes = 2;
    double housekeeping_rate_hz = 1.0;
    double housekeeping_duration_s = 86400.0;
};

/// One complete experiment description.
struct ScenarioConfig {
    OrbitSpec orbit;
    LinkParams link;
    LinkOptions link_options;
    Atmosphere atmosphere;
    SourceDetectorParams source;
    BackgroundModel background;
    SimConfig sim;
    double sim_tau_s = 1e-9;
    ClockSettings clock;
    IntegrationSettings integration;
    SweepGrids grids;
    YieldSettings yield;
    DataBudgetSettings data;

    void validate() const;
};

struct Override {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

struct LoadedScenario {
    ScenarioConfig config;
    std::vector<Override> overrides;
};

/// Parse flat `dotted.key = value` text; `#` starts a comment. Unspecified
/// keys keep their defaults. Throws ParseError carrying the line number.
LoadedScenario parse_scenario(std::string_view text);
LoadedScenario load_scenario(const std::string& path);

/// Apply one `key=value` assignment; line is used for error reporting.
void set_scenario_value(ScenarioConfig& config, std::string_view key, std::string_view value, std::size_t line = 0);
/// Apply assignments in order. Validation runs on the final state, so paired
/// keys may be set on separate lines; errors name the offending line.
void apply_overrides(ScenarioConfig& config, std::span<const Override> overrides);
std::string get_scenario_value(const ScenarioConfig& config, std::string_view key);

/// All keys in canonical order.
std::vector<std::string> scenario_keys();

/// Canonical text: every key, one per line, in scenario_keys() order.
std::string dump_scenario(const ScenarioConfig& config);

}  // namespace qkdsim
