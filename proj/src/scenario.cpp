// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qkdsim/scenario.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "qkdsim/errors.hpp"

namespace qkdsim {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

template <typename Int>
Int parse_integer(std::string_view text) {
    text = trim(text);
    Int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

bool parse_bool(std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1") {
        return true;
    }
    if (text == "false" || text == "0") {
        return false;
    }
    throw std::invalid_argument("expected true or false, got '" + std::string(text) + "'");
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    text = trim(text);
    if (text.empty()) {
        return parts;
    }
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return parts;
}

std::string format_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? "," : "") + format_real(values[i]);
    }
    return out;
}

struct Field {
    std::string key;
    std::function<void(ScenarioConfig&, std::string_view)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

template <typename Access>
Field real(std::string key, Access access) {
    return {std::move(key), [access](ScenarioConfig& c, std::string_view v) { access(c) = parse_real(v); },
            [access](const ScenarioConfig& c) { return format_real(access(const_cast<ScenarioConfig&>(c))); }};
}

template <typename Access>
Field integer(std::string key, Access access) {
    using Int = std::remove_reference_t<decltype(access(std::declval<ScenarioConfig&>()))>;
    return {std::move(key), [access](ScenarioConfig& c, std::string_view v) { access(c) = parse_integer<Int>(v); },
            [access](const ScenarioConfig& c) { return std::to_string(access(const_cast<ScenarioConfig&>(c))); }};
}

template <typename Access>
Field list(std::string key, Access access) {
    return {std::move(key),
            [access](ScenarioConfig& c, std::string_view v) {
                std::vector<double> values;
                for (std::string_view part : split(v, ',')) {
                    values.push_back(parse_real(part));
                }
                access(c) = std::move(values);
            },
            [access](const ScenarioConfig& c) { return format_list(access(const_cast<ScenarioConfig&>(c))); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(real("orbit.altitude_km", [](ScenarioConfig& c) -> double& { return c.orbit.altitude_km; }));
        f.push_back(real("orbit.ground_track_offset_km",
                         [](ScenarioConfig& c) -> double& { return c.orbit.ground_track_offset_km; }));

        f.push_back(real("link.wavelength_m", [](ScenarioConfig& c) -> double& { return c.link.wavelength_m; }));
        f.push_back(real("link.a_atm0_db", [](ScenarioConfig& c) -> double& { return c.link.a_atm0_db; }));
        f.push_back(real("link.d_r_m", [](ScenarioConfig& c) -> double& { return c.link.d_r_m; }));
        f.push_back(real("link.d_t_m", [](ScenarioConfig& c) -> double& { return c.link.d_t_m; }));
        f.push_back(real("link.t_r", [](ScenarioConfig& c) -> double& { return c.link.t_r; }));
        f.push_back(real("link.t_t", [](ScenarioConfig& c) -> double& { return c.link.t_t; }));
        f.push_back(real("link.l_p", [](ScenarioConfig& c) -> double& { return c.link.l_p; }));
        f.push_back({"link.zenith_scaling",
                     [](ScenarioConfig& c, std::string_view v) { c.link_options.zenith_scaling = parse_bool(v); },
                     [](const ScenarioConfig& c) { return std::string(c.link_options.zenith_scaling ? "true" : "false"); }});
        f.push_back({"link.airmass",
                     [](ScenarioConfig& c, std::string_view v) {
                         v = trim(v);
                         if (v == "secant") {
                             c.link_options.airmass = AirmassModel::secant;
                         } else if (v == "slant_ratio") {
                             c.link_options.airmass = AirmassModel::slant_ratio;
                         } else {
                             throw std::invalid_argument("expected secant or slant_ratio");
                         }
                     },
                     [](const ScenarioConfig& c) {
                         return std::string(c.link_options.airmass == AirmassModel::secant ? "secant" : "slant_ratio");
                     }});

        f.push_back(real("atmosphere.fried_r0_m", [](ScenarioConfig& c) -> double& { return c.atmosphere.fried_r0_m; }));
        f.push_back(real("atmosphere.reference_wavelength_m",
                         [](ScenarioConfig& c) -> double& { return c.atmosphere.reference_wavelength_m; }));

        f.push_back(real("source.mu", [](ScenarioConfig& c) -> double& { return c.source.mu; }));
        f.push_back(real("source.tau_s", [](ScenarioConfig& c) -> double& { return c.source.tau_s; }));
        f.push_back(real("source.q_sift", [](ScenarioConfig& c) -> double& { return c.source.q_sift; }));
        f.push_back(real("source.f_ec", [](ScenarioConfig& c) -> double& { return c.source.f_ec; }));
        f.push_back(real("source.d_a_cps", [](ScenarioConfig& c) -> double& { return c.source.d_a_cps; }));
        f.push_back(real("source.d_b_cps", [](ScenarioConfig& c) -> double& { return c.source.d_b_cps; }));
        f.push_back(real("source.b_cps", [](ScenarioConfig& c) -> double& { return c.source.b_cps; }));
        f.push_back(integer("source.n_det", [](ScenarioConfig& c) -> int& { return c.source.n_det; }));
        f.push_back(real("source.pde", [](ScenarioConfig& c) -> double& { return c.source.pde; }));
        f.push_back(real("source.eta_a", [](ScenarioConfig& c) -> double& { return c.source.eta_a; }));
        f.push_back(real("source.e0", [](ScenarioConfig& c) -> double& { return c.source.e0; }));
        f.push_back(real("source.e_d", [](ScenarioConfig& c) -> double& { return c.source.e_d; }));
        f.push_back({"source.joint_sign",
                     [](ScenarioConfig& c, std::string_view v) {
                         v = trim(v);
                         if (v == "minus") {
                             c.source.joint_sign = JointTermSign::minus;
                         } else if (v == "plus") {
                             c.source.joint_sign = JointTermSign::plus;
                         } else {
                             throw std::invalid_argument("expected minus or plus");
                         }
                     },
                     [](const ScenarioConfig& c) {
                         return std::string(c.source.joint_sign == JointTermSign::minus ? "minus" : "plus");
                     }});

        f.push_back(real("background.spectral_radiance_photons",
                         [](ScenarioConfig& c) -> double& { return c.background.spectral_radiance_photons; }));
        f.push_back(real("background.fov_rad", [](ScenarioConfig& c) -> double& { return c.background.fov_rad; }));
        f.push_back(real("background.pde", [](ScenarioConfig& c) -> double& { return c.background.pde; }));

        f.push_back(real("sim.pair_rate_cps", [](ScenarioConfig& c) -> double& { return c.sim.pair_rate_cps; }));
        f.push_back(real("sim.duration_s", [](ScenarioConfig& c) -> double& { return c.sim.duration_s; }));
        f.push_back(real("sim.eta_a", [](ScenarioConfig& c) -> double& { return c.sim.eta_a; }));
        f.push_back(real("sim.eta_b", [](ScenarioConfig& c) -> double& { return c.sim.eta_b; }));
        f.push_back(integer("sim.n_det", [](ScenarioConfig& c) -> int& { return c.sim.n_det; }));
        f.push_back(real("sim.d_a_cps", [](ScenarioConfig& c) -> double& { return c.sim.d_a_cps; }));
        f.push_back(real("sim.d_b_cps", [](ScenarioConfig& c) -> double& { return c.sim.d_b_cps; }));
        f.push_back(real("sim.b_cps", [](ScenarioConfig& c) -> double& { return c.sim.b_cps; }));
        f.push_back(real("sim.jitter_sigma_s", [](ScenarioConfig& c) -> double& { return c.sim.jitter_sigma_s; }));
        f.push_back(real("sim.e_d", [](ScenarioConfig& c) -> double& { return c.sim.e_d; }));
        f.push_back(real("sim.clock_offset_s", [](ScenarioConfig& c) -> double& { return c.sim.clock_offset_s; }));
        f.push_back(real("sim.clock_drift_ppb", [](ScenarioConfig& c) -> double& { return c.sim.clock_drift_ppb; }));
        f.push_back(integer("sim.rng_seed", [](ScenarioConfig& c) -> std::uint64_t& { return c.sim.rng_seed; }));
        f.push_back(real("sim.tau_s", [](ScenarioConfig& c) -> double& { return c.sim_tau_s; }));

        f.push_back(real("clock.bin_s", [](ScenarioConfig& c) -> double& { return c.clock.bin_s; }));
        f.push_back(real("clock.block_s", [](ScenarioConfig& c) -> double& { return c.clock.block_s; }));
        f.push_back(real("clock.max_offset_s", [](ScenarioConfig& c) -> double& { return c.clock.max_offset_s; }));

        f.push_back(real("integration.min_elevation_rad",
                         [](ScenarioConfig& c) -> double& { return c.integration.min_elevation_rad; }));
        f.push_back(real("integration.loss_cutoff_db",
                         [](ScenarioConfig& c) -> double& { return c.integration.loss_cutoff_db; }));
        f.push_back(real("integration.max_window_s",
                         [](ScenarioConfig& c) -> double& { return c.integration.max_window_s; }));
        f.push_back(real("integration.dt_s", [](ScenarioConfig& c) -> double& { return c.integration.dt_s; }));

        f.push_back(real("grid.attenuation_min_db",
                         [](ScenarioConfig& c) -> double& { return c.grids.attenuation_min_db; }));
        f.push_back(real("grid.attenuation_max_db",
                         [](ScenarioConfig& c) -> double& { return c.grids.attenuation_max_db; }));
        f.push_back(real("grid.attenuation_step_db",
                         [](ScenarioConfig& c) -> double& { return c.grids.attenuation_step_db; }));
        f.push_back(list("grid.dcr_values_cps",
                         [](ScenarioConfig& c) -> std::vector<double>& { return c.grids.dcr_values_cps; }));
        f.push_back(list("grid.link_offsets_km",
                         [](ScenarioConfig& c) -> std::vector<double>& { return c.grids.link_offsets_km; }));
        f.push_back(list("grid.wavelengths_m",
                         [](ScenarioConfig& c) -> std::vector<double>& { return c.grids.wavelengths_m; }));
        f.push_back(list("grid.a_atm0_values_db",
                         [](ScenarioConfig& c) -> std::vector<double>& { return c.grids.a_atm0_values_db; }));
        f.push_back(real("grid.time_step_s", [](ScenarioConfig& c) -> double& { return c.grids.time_step_s; }));

        f.push_back(real("yield.passes_per_year",
                         [](ScenarioConfig& c) -> double& { return c.yield.passes_per_year; }));
        f.push_back({"yield.histogram",
                     [](ScenarioConfig& c, std::string_view v) {
                         std::vector<FriedBin> bins;
                         for (std::string_view entry : split(v, ',')) {
                             const auto parts = split(entry, ':');
                             if (parts.size() != 2) {
                                 throw std::invalid_argument("histogram entries are r0_m:days");
                             }
                             bins.push_back({parse_real(parts[0]), parse_real(parts[1])});
                         }
                         c.yield.histogram.bins = std::move(bins);
                     },
                     [](const ScenarioConfig& c) {
                         std::string out;
                         for (std::size_t i = 0; i < c.yield.histogram.bins.size(); ++i) {
                             const FriedBin& b = c.yield.histogram.bins[i];
                             out += (i ? "," : "") + format_real(b.r0_m) + ":" + format_real(b.days_per_year);
                         }
                         return out;
                     }});
        f.push_back(real("yield.histogram_wavelength_m",
                         [](ScenarioConfig& c) -> double& { return c.yield.histogram.reference_wavelength_m; }));

        f.push_back(real("data.horizon_s", [](ScenarioConfig& c) -> double& { return c.data.horizon_s; }));
        f.push_back(real("data.delta_t_s", [](ScenarioConfig& c) -> double& { return c.data.delta_t_s; }));
        f.push_back(real("data.event_rate_cps", [](ScenarioConfig& c) -> double& { return c.data.event_rate_cps; }));
        f.push_back(real("data.experiment_s", [](ScenarioConfig& c) -> double& { return c.data.experiment_s; }));
        f.push_back(real("data.passes_per_day", [](ScenarioConfig& c) -> double& { return c.data.passes_per_day; }));
        f.push_back(integer("data.housekeeping_channels",
                            [](ScenarioConfig& c) -> int& { return c.data.housekeeping_channels; }));
        f.push_back(integer("data.housekeeping_bytes",
                            [](ScenarioConfig& c) -> int& { return c.data.housekeeping_bytes; }));
        f.push_back(real("data.housekeeping_rate_hz",
                         [](ScenarioConfig& c) -> double& { return c.data.housekeeping_rate_hz; }));
        f.push_back(real("data.housekeeping_duration_s",
                         [](ScenarioConfig& c) -> double& { return c.data.housekeeping_duration_s; }));
        return f;
    }();
    return table;
}

const Field* find_field(std::string_view key) {
    for (const Field& f : fields()) {
        if (f.key == key) {
            return &f;
        }
    }
    return nullptr;
}

void require(bool ok, const char* what) {
    if (!ok) {
        throw DomainError(what);
    }
}

}  // namespace

void ScenarioConfig::validate() const {
    orbit.validate();
    LinkParams l = link;
    l.altitude_km = orbit.altitude_km;
    l.validate();
    atmosphere.validate();
    source.validate();
    background.validate();
    sim.validate();
    require(sim_tau_s > 0.0, "sim.tau_s must be positive");
    require(clock.bin_s > 0.0 && clock.block_s > 0.0 && clock.max_offset_s > 0.0,
            "clock settings must be positive");
    require(integration.dt_s > 0.0 && integration.max_window_s >= 0.0, "integration step/window out of range");
    require(integration.min_elevation_rad >= -0.5 * 3.141592653589793 &&
                integration.min_elevation_rad <= 0.5 * 3.141592653589793,
            "integration.min_elevation_rad out of range");
    require(grids.attenuation_step_db > 0.0 && grids.attenuation_max_db >= grids.attenuation_min_db,
            "attenuation grid out of range");
    require(grids.time_step_s > 0.0, "grid.time_step_s must be positive");
    require(grids.wavelengths_m.size() == grids.a_atm0_values_db.size(),
            "grid.wavelengths_m and grid.a_atm0_values_db must have equal length");
    for (double v : grids.dcr_values_cps) {
        require(v >= 0.0, "grid.dcr_values_cps must be non-negative");
    }
    for (double v : grids.link_offsets_km) {
        require(v >= 0.0, "grid.link_offsets_km must be non-negative");
    }
    for (double v : grids.wavelengths_m) {
        require(v > 0.0, "grid.wavelengths_m must be positive");
    }
    require(yield.passes_per_year >= 0.0, "yield.passes_per_year must be non-negative");
    require(yield.histogram.reference_wavelength_m > 0.0, "yield.histogram_wavelength_m must be positive");
    yield.histogram.validate();
    require(data.delta_t_s > 0.0 && data.horizon_s >= data.delta_t_s, "data horizon/resolution out of range");
    require(data.event_rate_cps >= 0.0 && data.experiment_s >= 0.0 && data.passes_per_day >= 0.0,
            "data rates must be non-negative");
    require(data.housekeeping_channels >= 0 && data.housekeeping_bytes >= 0 && data.housekeeping_rate_hz >= 0.0 &&
                data.housekeeping_duration_s >= 0.0,
            "housekeeping settings must be non-negative");
}

namespace {

// Parse one assignment into config without cross-field validation.
void assign(ScenarioConfig& config, std::string_view key, std::string_view value, std::size_t line) {
    const Field* field = find_field(trim(key));
    if (field == nullptr) {
        throw ParseError(line, "unknown key '" + std::string(trim(key)) + "'");
    }
    try {
        field->set(config, value);
    } catch (const std::invalid_argument& e) {
        throw ParseError(line, field->key + ": " + e.what());
    }
}

}  // namespace

void set_scenario_value(ScenarioConfig& config, std::string_view key, std::string_view value, std::size_t line) {
    apply_overrides(config, std::vector<Override>{{std::string(key), std::string(value), line}});
}

void apply_overrides(ScenarioConfig& config, std::span<const Override> overrides) {
    ScenarioConfig updated = config;
    // Paired keys may be inconsistent between their two lines; only the state
    // after the last assignment has to validate. Blame the line that broke it.
    const Override* broken_by = nullptr;
    for (const Override& o : overrides) {
        assign(updated, o.key, o.value, o.line);
        try {
            updated.validate();
            broken_by = nullptr;
        } catch (const DomainError&) {
            if (broken_by == nullptr) {
                broken_by = &o;
            }
        }
    }
    if (broken_by != nullptr) {
        try {
            updated.validate();
        } catch (const DomainError& e) {
            throw ParseError(broken_by->line, broken_by->key + ": out of range (" + e.what() + ")");
        }
    }
    config = std::move(updated);
}

std::string get_scenario_value(const ScenarioConfig& config, std::string_view key) {
    const Field* field = find_field(key);
    if (field == nullptr) {
        throw ParseError(0, "unknown key '" + std::string(key) + "'");
    }
    return field->get(config);
}

std::vector<std::string> scenario_keys() {
    std::vector<std::string> keys;
    for (const Field& f : fields()) {
        keys.push_back(f.key);
    }
    return keys;
}

LoadedScenario parse_scenario(std::string_view text) {
    LoadedScenario out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (!line.empty()) {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw ParseError(line_no, "expected 'key = value'");
            }
            const std::string_view key = trim(line.substr(0, eq));
            const std::string_view value = trim(line.substr(eq + 1));
            if (key.empty()) {
                throw ParseError(line_no, "missing key");
            }
            out.overrides.push_back({std::string(key), std::string(value), line_no});
        }
        if (end == std::string_view::npos) {
            break;
        }
        start = end + 1;
    }
    apply_overrides(out.config, out.overrides);
    return out;
}

LoadedScenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw ParseError(0, "cannot open scenario file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << f.rdbuf();
    return parse_scenario(buffer.str());
}

std::string dump_scenario(const ScenarioConfig& config) {
    std::string out;
    for (const Field& f : fields()) {
        const std::string value = f.get(config);
        out += f.key + (value.empty() ? " =\n" : " = " + value + "\n");
    }
    return out;
}

}  // namespace qkdsim
