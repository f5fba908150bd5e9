// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qkdsim {

/// Input outside the mathematical domain of a model (e.g. zenith >= 90 deg).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Simulation would exceed the configured event budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent time-tag stream.
class CodecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario file problem; line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace qkdsim
