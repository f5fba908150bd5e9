// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qkdsim/scenario.hpp"

namespace qkdsim {

/// Command names in help order.
const std::vector<std::string>& command_names();
bool is_command(std::string_view name);

/// Numeric CSV cell: scientific notation, 9 significant digits.
std::string format_number(double value);

/// Run one command and write its CSV file(s) into out_dir, named after stem
/// (default: the command name). Returns the paths written, in order.
/// Throws std::invalid_argument for an unknown command and ResourceError on
/// I/O failure; domain errors propagate unchanged.
std::vector<std::filesystem::path> run_command(std::string_view command, const LoadedScenario& scenario,
                                               const std::filesystem::path& out_dir, std::string stem = {});

/// Run command once per value of key, writing "<command>__<key>-<index>.csv".
/// The base scenario is not modified. An empty value list writes nothing.
std::vector<std::filesystem::path> run_sweep(std::string_view command, std::string_view key,
                                             const std::vector<std::string>& values, const LoadedScenario& base,
                                             const std::filesystem::path& out_dir);

}  // namespace qkdsim
