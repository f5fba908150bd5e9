// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

// qkdsim <command> [--scenario FILE] --out DIR [--seed N] [--set key=value ...]
//                  [--sweep key=v1,v2,...]
// Exit status: 0 success, 1 usage error, 2 domain, configuration or I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qkdsim/commands.hpp"
#include "qkdsim/errors.hpp"
#include "qkdsim/scenario.hpp"
#include "qkdsim/version.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::pair<std::string, std::string> split_assignment(const std::string& text, const char* flag) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw UsageError(std::string(flag) + " expects key=value, got '" + text + "'");
    }
    return {text.substr(0, eq), text.substr(eq + 1)};
}

std::vector<std::string> split_values(const std::string& text) {
    std::vector<std::string> values;
    std::size_t start = 0;
    while (start < text.size()) {
        const auto comma = text.find(',', start);
        values.push_back(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Satellite QKD link and key-rate simulator"};
    app.set_version_flag("--version", std::string(qkdsim::kVersion));

    std::string command;
    std::string scenario_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
    std::string sweep;

    std::string command_help = "one of:";
    for (const auto& name : qkdsim::command_names()) {
        command_help += " " + name;
    }
    app.add_option("command", command, command_help)->required();
    app.add_option("--scenario", scenario_path, "scenario file (defaults apply when omitted)");
    app.add_option("--out", out_dir, "output directory")->required();
    app.add_option("--seed", seed, "RNG seed, overrides sim.rng_seed");
    app.add_option("--set", sets, "override a scenario key, key=value")->take_all();
    app.add_option("--sweep", sweep, "run once per value, key=v1,v2,...");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (!qkdsim::is_command(command)) {
            throw UsageError("unknown command '" + command + "'");
        }
        qkdsim::LoadedScenario scenario;
        if (!scenario_path.empty()) {
            scenario = qkdsim::load_scenario(scenario_path);
        }
        std::vector<qkdsim::Override> cli_overrides;
        for (const auto& s : sets) {
            const auto [key, value] = split_assignment(s, "--set");
            cli_overrides.push_back({key, value, 0});
        }
        qkdsim::apply_overrides(scenario.config, cli_overrides);
        scenario.overrides.insert(scenario.overrides.end(), cli_overrides.begin(), cli_overrides.end());
        if (seed) {
            scenario.config.sim.rng_seed = *seed;
        }

        std::vector<std::filesystem::path> written;
        if (sweep.empty()) {
            written = qkdsim::run_command(command, scenario, out_dir);
        } else {
            const auto [key, values] = split_assignment(sweep, "--sweep");
            written = qkdsim::run_sweep(command, key, split_values(values), scenario, out_dir);
        }
        for (const auto& path : written) {
            std::cout << path.string() << "\n";
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "qkdsim: " << e.what() << "\n" << app.help();
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "qkdsim: " << e.what() << "\n";
        return kExitDomain;
    }
}
