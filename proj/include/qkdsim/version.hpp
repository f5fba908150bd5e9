// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace qkdsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qkdsim
