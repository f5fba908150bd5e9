// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <numbers>

namespace qkdsim {

inline constexpr double kEarthRadiusKm = 6378.137;
inline constexpr double kEarthGmKm3S2 = 398600.4418;
inline constexpr double kSpeedOfLightKmS = 299792.458;

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace qkdsim
