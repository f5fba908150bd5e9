// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace qkdsim {

/// Circular orbit seen from one ground station. The ground track is a great
/// circle passing ground_track_offset_km (arc length) from the station.
struct OrbitSpec {
    double altitude_km = 550.0;
    double ground_track_offset_km = 0.0;

    /// Throws DomainError if altitude <= 0 or offset < 0.
    void validate() const;
};

struct Kinematics {
    double orbital_speed_km_s = 0.0;
    double period_s = 0.0;
    double orbital_angular_rate_rad_s = 0.0;
};

/// Geometry at time t_s relative to closest approach.
struct PassSample {
    double t_s = 0.0;
    double slant_range_km = 0.0;
    double zenith_rad = 0.0;
    double elevation_rad = 0.0;
    double central_angle_rad = 0.0;

    bool above_horizon() const { return elevation_rad >= 0.0; }
};

struct SlewRates {
    double ogs_rate_rad_s = 0.0;
    double sat_rate_rad_s = 0.0;
};

struct PointAhead {
    double light_time_s = 0.0;
    double angle_rad = 0.0;
};

Kinematics orbit_kinematics(const OrbitSpec& orbit);

/// Spherical, non-rotating Earth. Negative elevation is reported, not rejected.
PassSample pass_sample(const OrbitSpec& orbit, double t_s);

/// Half-width (s) of the interval around closest approach with elevation
/// >= min_elevation_rad; 0 when the satellite never gets that high.
double visibility_half_window_s(const OrbitSpec& orbit, double min_elevation_rad);

/// Samples at t = k*dt_s, symmetric about 0, clipped to the visibility window.
/// Empty when the pass never reaches min_elevation_rad.
std::vector<PassSample> pass_profile(const OrbitSpec& orbit, double dt_s, double min_elevation_rad);

/// Angular rates of the line of sight: in the ground frame (OGS telescope) and
/// relative to a satellite body frame co-rotating with the orbit.
SlewRates slew_rates(const OrbitSpec& orbit, double t_s);

PointAhead point_ahead(const OrbitSpec& orbit, double t_s);

/// Small-angle footprint diameter in metres.
double footprint_diameter_m(double fov_rad, double slant_range_km);

}  // namespace qkdsim
