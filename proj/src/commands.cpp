// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qkdsim/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>

#include "qkdsim/constants.hpp"
#include "qkdsim/data_budget.hpp"
#include "qkdsim/errors.hpp"
#include "qkdsim/event_sim.hpp"
#include "qkdsim/key_rate.hpp"
#include "qkdsim/link_budget.hpp"
#include "qkdsim/orbit_geometry.hpp"
#include "qkdsim/version.hpp"

namespace qkdsim {

namespace {

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add(std::vector<std::string> cells) {
        if (cells.size() != columns_.size()) {
            throw std::logic_error("csv row width mismatch");
        }
        rows_.push_back(std::move(cells));
    }

    void add_numbers(std::initializer_list<double> values) {
        std::vector<std::string> cells;
        for (double v : values) {
            cells.push_back(format_number(v));
        }
        add(std::move(cells));
    }

    std::string body() const {
        std::string out = join(columns_);
        for (const auto& row : rows_) {
            out += join(row);
        }
        return out;
    }

private:
    static std::string join(const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            line += (i ? "," : "") + cells[i];
        }
        return line + "\n";
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

std::string header_block(std::string_view command, const LoadedScenario& scenario) {
    std::string out = "# qkdsim " + std::string(kVersion) + "\n";
    out += "# command: " + std::string(command) + "\n";
    out += "# seed: " + std::to_string(scenario.config.sim.rng_seed) + "\n";
    out += "# overrides:";
    out += scenario.overrides.empty() ? " none\n" : "\n";
    for (const Override& o : scenario.overrides) {
        out += "#   " + o.key + " = " + o.value;
        out += o.line > 0 ? " (line " + std::to_string(o.line) + ")\n" : " (command line)\n";
    }
    out += "# scenario:\n";
    const std::string dump = dump_scenario(scenario.config);
    std::size_t start = 0;
    while (start < dump.size()) {
        const auto end = dump.find('\n', start);
        out += "#   " + dump.substr(start, end - start) + "\n";
        start = end + 1;
    }
    return out;
}

std::filesystem::path write_csv(const std::filesystem::path& dir, const std::string& name, std::string_view command,
                                const LoadedScenario& scenario, const CsvTable& table) {
    const std::filesystem::path path = dir / (name + ".csv");
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ResourceError("cannot open '" + path.string() + "' for writing");
    }
    f << header_block(command, scenario) << table.body();
    f.close();
    if (!f) {
        throw ResourceError("failed writing '" + path.string() + "'");
    }
    return path;
}

std::vector<double> attenuation_grid(const SweepGrids& g) {
    std::vector<double> grid;
    const auto n = static_cast<long long>(std::floor((g.attenuation_max_db - g.attenuation_min_db) /
                                                     g.attenuation_step_db + 1e-9));
    for (long long i = 0; i <= n; ++i) {
        grid.push_back(g.attenuation_min_db + static_cast<double>(i) * g.attenuation_step_db);
    }
    return grid;
}

LinkParams synced_link(const ScenarioConfig& c) {
    LinkParams link = c.link;
    link.altitude_km = c.orbit.altitude_km;
    return link;
}

CsvTable pass_profile_table(const ScenarioConfig& c) {
    CsvTable t({"t_s", "slant_range_km", "zenith_deg", "elevation_deg", "ogs_slew_mrad_s", "sat_slew_mrad_s",
                "point_ahead_urad"});
    for (const PassSample& s : pass_profile(c.orbit, c.grids.time_step_s, 0.0)) {
        const SlewRates rates = slew_rates(c.orbit, s.t_s);
        const PointAhead pa = point_ahead(c.orbit, s.t_s);
        t.add_numbers({s.t_s, s.slant_range_km, rad_to_deg(s.zenith_rad), rad_to_deg(s.elevation_rad),
                       rates.ogs_rate_rad_s * 1e3, rates.sat_rate_rad_s * 1e3, pa.angle_rad * 1e6});
    }
    return t;
}

std::vector<double> or_scenario(const std::vector<double>& grid, double own) {
    return grid.empty() ? std::vector<double>{own} : grid;
}

CsvTable link_sweep_table(const ScenarioConfig& c) {
    CsvTable t({"ground_track_offset_km", "wavelength_m", "a_atm0_db", "fried_r0_m", "t_s", "elevation_deg",
                "slant_range_km", "attenuation_db"});
    const std::vector<double> wavelengths = or_scenario(c.grids.wavelengths_m, c.link.wavelength_m);
    const std::vector<double> a_atm0 = or_scenario(c.grids.a_atm0_values_db, c.link.a_atm0_db);
    for (double offset : or_scenario(c.grids.link_offsets_km, c.orbit.ground_track_offset_km)) {
        OrbitSpec orbit = c.orbit;
        orbit.ground_track_offset_km = offset;
        const std::vector<PassSample> profile = pass_profile(orbit, c.grids.time_step_s, 0.0);
        for (std::size_t w = 0; w < wavelengths.size(); ++w) {
            LinkParams link = synced_link(c);
            link.wavelength_m = wavelengths[w];
            link.a_atm0_db = a_atm0[w];
            for (const PassSample& s : profile) {
                const double a =
                    link_attenuation_db(link, c.atmosphere, s.slant_range_km, s.zenith_rad, c.link_options);
                t.add_numbers({offset, link.wavelength_m, link.a_atm0_db, c.atmosphere.fried_r0_m, s.t_s,
                               rad_to_deg(s.elevation_rad), s.slant_range_km, a});
            }
        }
    }
    return t;
}

CsvTable qber_sweep_table(const ScenarioConfig& c) {
    CsvTable t({"dcr_cps", "attenuation_db", "coincidence_rate_cps", "qber", "snr", "visibility"});
    for (double dcr : or_scenario(c.grids.dcr_values_cps, c.source.d_b_cps)) {
        SourceDetectorParams p = c.source;
        p.d_b_cps = dcr;
        for (double a : attenuation_grid(c.grids)) {
            const KeyRateMetrics m = evaluate_key_rate(p, a);
            t.add_numbers({dcr, a, m.r_coinc_cps, m.qber, m.snr, m.visibility});
        }
    }
    return t;
}

CsvTable keyrate_sweep_table(const ScenarioConfig& c) {
    CsvTable t({"dcr_cps", "tau_s", "attenuation_db", "qber", "r_dist", "r_secure_cps"});
    for (double dcr : or_scenario(c.grids.dcr_values_cps, c.source.d_b_cps)) {
        SourceDetectorParams p = c.source;
        p.d_b_cps = dcr;
        for (double a : attenuation_grid(c.grids)) {
            const KeyRateMetrics m = evaluate_key_rate(p, a);
            t.add_numbers({dcr, p.tau_s, a, m.qber, m.r_dist, m.r_secure_cps});
        }
    }
    return t;
}

CsvTable pass_key_table(const ScenarioConfig& c) {
    CsvTable t({"t_s", "slant_range_km", "elevation_deg", "attenuation_db", "usable", "r_secure_cps",
                "cumulative_bits"});
    for (const PassKeySample& s : key_per_pass(c).samples) {
        t.add_numbers({s.t_s, s.slant_range_km, rad_to_deg(s.elevation_rad), s.attenuation_db, s.usable ? 1.0 : 0.0,
                       s.r_secure_cps, s.cumulative_bits});
    }
    return t;
}

struct MonteCarloTables {
    CsvTable metrics{{"metric", "analytic", "montecarlo", "montecarlo_sigma", "z_score"}};
    CsvTable clock{{"block_start_s", "offset_s", "offset_error_s", "peak_counts", "significance", "locked"}};
};

MonteCarloTables montecarlo_tables(const ScenarioConfig& c) {
    const SimConfig& sim = c.sim;
    SourceDetectorParams p = c.source;
    p.tau_s = c.sim_tau_s;
    p.mu = sim.pair_rate_cps * c.sim_tau_s;
    p.eta_a = sim.eta_a;
    p.n_det = sim.n_det;
    p.d_a_cps = sim.d_a_cps;
    p.d_b_cps = sim.d_b_cps;
    p.b_cps = sim.b_cps;
    p.e_d = sim.e_d;
    p.validate();

    const double q = coincidence_probability(p, sim.eta_b);
    const double rate = coincidence_rate(p, q);
    const double e = qber(p, sim.eta_b);
    const double v = visibility(e);

    const SimulatedStreams streams = simulate_streams(sim);
    const std::vector<TimeTag> alice = time_tags(streams.alice);
    const std::vector<TimeTag> bob = time_tags(streams.bob);
    const std::vector<Coincidence> matches = match_coincidences(alice, bob, c.sim_tau_s, sim.clock_offset_s);
    const MeasuredMetrics m = estimate_metrics(matches, alice, bob, sim.duration_s);

    MonteCarloTables out;
    const auto row = [&](const char* name, double analytic, std::optional<double> measured, double sigma) {
        if (!measured) {
            out.metrics.add({name, format_number(analytic), "nan", "nan", "nan"});
            return;
        }
        const double z = sigma > 0.0 ? (*measured - analytic) / sigma : 0.0;
        out.metrics.add({name, format_number(analytic), format_number(*measured), format_number(sigma),
                         format_number(z)});
    };
    row("coincidence_rate_cps", rate, m.coincidence_rate_cps, m.coincidence_rate_sigma);
    row("qber", e, m.qber, m.qber_sigma);
    row("visibility", v, m.visibility, m.visibility_sigma);
    out.metrics.add({"coincidences", "nan", format_number(static_cast<double>(m.coincidences)), "nan", "nan"});
    out.metrics.add({"sifted", "nan", format_number(static_cast<double>(m.sifted)), "nan", "nan"});

    ClockRecoveryOptions opts;
    opts.bin_s = c.clock.bin_s;
    opts.block_s = c.clock.block_s;
    opts.max_offset_s = c.clock.max_offset_s;
    for (const BlockOffset& b : recover_clock_offset(alice, bob, opts)) {
        const double truth = sim.clock_offset_s + sim.clock_drift_ppb * 1e-9 * b.block_start_s;
        out.clock.add_numbers({b.block_start_s, b.offset_s, b.offset_s - truth, b.peak_counts, b.significance,
                               b.locked ? 1.0 : 0.0});
    }
    return out;
}

CsvTable databudget_table(const ScenarioConfig& c) {
    const DataBudgetSettings& d = c.data;
    const BitsPerEvent bits = bits_per_event(d.horizon_s, d.delta_t_s);
    const double rate = stream_rate_bytes(d.event_rate_cps, bits.byte_aligned);
    const PassVolume volume = pass_volume(d.experiment_s, rate, d.passes_per_day);
    const double hk = housekeeping_volume(d.housekeeping_channels, d.housekeeping_bytes, d.housekeeping_rate_hz,
                                          d.housekeeping_duration_s);
    CsvTable t({"quantity", "value", "unit"});
    const auto row = [&](const char* name, double value, const char* unit) {
        t.add({name, format_number(value), unit});
    };
    row("bits_per_event_exact", bits.exact, "bit");
    row("bits_per_event", bits.byte_aligned, "bit");
    row("stream_rate", rate, "byte/s");
    row("per_experiment", volume.per_experiment_bytes, "byte");
    row("per_day", volume.per_day_bytes, "byte");
    row("housekeeping", hk, "byte");
    row("per_day_total", volume.per_day_bytes + hk, "byte");
    return t;
}

CsvTable annual_yield_table(const ScenarioConfig& c) {
    FriedHistogram hist = c.yield.histogram;
    if (hist.bins.empty()) {
        hist.bins = {{c.atmosphere.fried_r0_m, 365.25}};
        hist.reference_wavelength_m = c.atmosphere.reference_wavelength_m;
    }
    CsvTable t({"bin", "fried_r0_m", "days_per_year", "key_per_pass_bits", "yield_bits"});
    double total_days = 0.0;
    for (const FriedBin& b : hist.bins) {
        total_days += b.days_per_year;
    }
    std::vector<double> keys;
    const double total = annual_yield(hist, c.yield.passes_per_year, [&](double r0) {
        ScenarioConfig s = c;
        s.atmosphere.fried_r0_m = r0;
        s.atmosphere.reference_wavelength_m = hist.reference_wavelength_m;
        keys.push_back(key_per_pass(s).total_bits);
        return keys.back();
    });
    std::size_t k = 0;
    for (std::size_t i = 0; i < hist.bins.size(); ++i) {
        const FriedBin& b = hist.bins[i];
        const bool evaluated = b.days_per_year > 0.0 && total_days > 0.0;
        const double key = evaluated ? keys[k++] : 0.0;
        const double share = evaluated ? b.days_per_year / total_days : 0.0;
        t.add({std::to_string(i), format_number(b.r0_m), format_number(b.days_per_year), format_number(key),
               format_number(c.yield.passes_per_year * share * key)});
    }
    t.add({"total", "nan", format_number(total_days), "nan", format_number(total)});
    return t;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"pass-profile", "link-sweep", "qber-sweep",  "keyrate-sweep",
                                                   "pass-key",     "montecarlo", "databudget", "annual-yield"};
    return names;
}

bool is_command(std::string_view name) {
    for (const auto& n : command_names()) {
        if (n == name) {
            return true;
        }
    }
    return false;
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    if (value == 0.0) {
        value = 0.0;  // fold -0
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8e", value);
    return buf;
}

std::vector<std::filesystem::path> run_command(std::string_view command, const LoadedScenario& scenario,
                                               const std::filesystem::path& out_dir, std::string stem) {
    if (!is_command(command)) {
        throw std::invalid_argument("unknown command '" + std::string(command) + "'");
    }
    const ScenarioConfig& c = scenario.config;
    c.validate();
    if (stem.empty()) {
        stem = std::string(command);
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw ResourceError("cannot create output directory '" + out_dir.string() + "': " + ec.message());
    }

    if (command == "montecarlo") {
        const MonteCarloTables tables = montecarlo_tables(c);
        return {write_csv(out_dir, stem, command, scenario, tables.metrics),
                write_csv(out_dir, stem + "_clock", command, scenario, tables.clock)};
    }
    static const std::vector<std::pair<std::string_view, std::function<CsvTable(const ScenarioConfig&)>>> table = {
        {"pass-profile", pass_profile_table}, {"link-sweep", link_sweep_table},   {"qber-sweep", qber_sweep_table},
        {"keyrate-sweep", keyrate_sweep_table}, {"pass-key", pass_key_table},     {"databudget", databudget_table},
        {"annual-yield", annual_yield_table}};
    for (const auto& [name, build] : table) {
        if (name == command) {
            return {write_csv(out_dir, stem, command, scenario, build(c))};
        }
    }
    throw std::logic_error("command without implementation");
}

std::vector<std::filesystem::path> run_sweep(std::string_view command, std::string_view key,
                                             const std::vector<std::string>& values, const LoadedScenario& base,
                                             const std::filesystem::path& out_dir) {
    if (!is_command(command)) {
        throw std::invalid_argument("unknown command '" + std::string(command) + "'");
    }
    get_scenario_value(base.config, key);
    std::vector<std::filesystem::path> written;
    for (std::size_t i = 0; i < values.size(); ++i) {
        LoadedScenario point = base;
        set_scenario_value(point.config, key, values[i]);
        point.overrides.push_back({std::string(key), values[i], 0});
        const std::string stem = std::string(command) + "__" + std::string(key) + "-" + std::to_string(i);
        for (auto& p : run_command(command, point, out_dir, stem)) {
            written.push_back(std::move(p));
        }
    }
    return written;
}

}  // namespace qkdsim
