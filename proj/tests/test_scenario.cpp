// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <random>
#include <string>

#include "qkdsim/errors.hpp"
#include "qkdsim/scenario.hpp"

using namespace qkdsim;

TEST_CASE("empty text yields the default scenario") {
    const LoadedScenario s = parse_scenario("");
    CHECK(s.overrides.empty());
    CHECK(dump_scenario(s.config) == dump_scenario(ScenarioConfig{}));
    CHECK(s.config.link.d_r_m == 0.15);
    CHECK(s.config.link.d_t_m == 1.0);
    CHECK(s.config.link.a_atm0_db == 3.0);
    CHECK(s.config.atmosphere.fried_r0_m == 0.20);
    CHECK(s.config.source.mu == 0.1);
    CHECK(s.config.source.tau_s == 1e-9);
    CHECK(s.config.source.d_b_cps == 100.0);
    CHECK(s.config.source.b_cps == 400.0);
    CHECK(s.config.source.pde == 0.4);
    CHECK(s.config.source.eta_a == 0.6);
}

TEST_CASE("comments, blank lines and whitespace") {
    const LoadedScenario s = parse_scenario(
        "# header comment\n"
        "\n"
        "   source.d_b_cps   =  250   # trailing comment\n"
        "orbit.ground_track_offset_km=500\r\n");
    CHECK(s.config.source.d_b_cps == 250.0);
    CHECK(s.config.orbit.ground_track_offset_km == 500.0);
    REQUIRE(s.overrides.size() == 2);
    CHECK(s.overrides[0].key == "source.d_b_cps");
    CHECK(s.overrides[0].value == "250");
    CHECK(s.overrides[0].line == 3);
    CHECK(s.overrides[1].line == 4);
}

TEST_CASE("out-of-range values report their line") {
    try {
        parse_scenario("orbit.altitude_km = 600\nsource.d_b_cps = -5\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("source.d_b_cps") != std::string::npos);
    }
}

TEST_CASE("unknown keys, bad numbers and malformed lines") {
    CHECK_THROWS_AS(parse_scenario("source.nope = 1\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("source.mu = abc\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("source.mu = 0.1x\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("source.n_det = 2.5\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("just some words\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario(" = 3\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("link.airmass = cosine\n"), ParseError);
    try {
        parse_scenario("\n\n\nbogus\n");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
}

TEST_CASE("list, enum and histogram keys") {
    const LoadedScenario s = parse_scenario(
        "grid.dcr_values_cps = 100, 1000\n"
        "link.airmass = secant\n"
        "source.joint_sign = plus\n"
        "link.zenith_scaling = false\n"
        "yield.histogram = 0.1:50, 0.2:200, 0.3:115.25\n");
    CHECK(s.config.grids.dcr_values_cps == std::vector<double>{100.0, 1000.0});
    CHECK(s.config.link_options.airmass == AirmassModel::secant);
    CHECK(s.config.source.joint_sign == JointTermSign::plus);
    CHECK_FALSE(s.config.link_options.zenith_scaling);
    REQUIRE(s.config.yield.histogram.bins.size() == 3);
    CHECK(s.config.yield.histogram.bins[2].days_per_year == 115.25);
    CHECK(get_scenario_value(s.config, "yield.histogram") == "0.1:50,0.2:200,0.3:115.25");

    CHECK_THROWS_AS(parse_scenario("yield.histogram = 0.2:1, 0.1:1\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("grid.wavelengths_m = 808e-9\n"), ParseError);
}

TEST_CASE("a failed assignment leaves the config untouched") {
    ScenarioConfig c;
    CHECK_THROWS_AS(set_scenario_value(c, "source.mu", "2"), ParseError);
    CHECK(c.source.mu == 0.1);
}

TEST_CASE("every key round-trips through get and set") {
    ScenarioConfig c;
    for (const std::string& key : scenario_keys()) {
        CAPTURE(key);
        const std::string value = get_scenario_value(c, key);
        ScenarioConfig copy;
        set_scenario_value(copy, key, value);
        CHECK(get_scenario_value(copy, key) == value);
    }
}

TEST_CASE("dump of a load equals the canonical text") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> scale(0.5, 1.5);
    const std::vector<std::string> scalar_keys = {
        "orbit.altitude_km", "orbit.ground_track_offset_km", "link.d_r_m",       "atmosphere.fried_r0_m",
        "source.b_cps",      "source.d_a_cps",               "source.tau_s",     "sim.duration_s",
        "data.event_rate_cps", "integration.loss_cutoff_db", "clock.bin_s",      "yield.passes_per_year"};
    for (int trial = 0; trial < 50; ++trial) {
        ScenarioConfig c;
        std::string text = "# trial " + std::to_string(trial) + "\n";
        for (const auto& key : scalar_keys) {
            if (rng() % 2 == 0) {
                continue;
            }
            const double base = std::stod(get_scenario_value(c, key));
            const double value = (base == 0.0 ? 100.0 : base) * scale(rng);
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.12g", value);
            text += key + " = " + buf + "\n";
        }
        const std::string canonical = dump_scenario(parse_scenario(text).config);
        CHECK(dump_scenario(parse_scenario(canonical).config) == canonical);
    }
}

TEST_CASE("dump lists every key once in canonical order") {
    const std::string dump = dump_scenario({});
    std::size_t pos = 0;
    for (const auto& key : scenario_keys()) {
        const auto at = dump.find(key + " =", pos);
        REQUIRE(at != std::string::npos);
        pos = at + key.size();
    }
}

TEST_CASE("load_scenario reports missing files") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.txt"), ParseError);
}

TEST_CASE("paired keys may be set on separate lines") {
    const LoadedScenario s = parse_scenario("grid.wavelengths_m = 1550e-9\ngrid.a_atm0_values_db = 2\n");
    CHECK(s.config.grids.wavelengths_m == std::vector<double>{1550e-9});
    try {
        parse_scenario("source.mu = 0.2\ngrid.wavelengths_m = 1550e-9\nsource.e_d = 0.02\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}
