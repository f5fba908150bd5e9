// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qkdsim/orbit_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qkdsim/constants.hpp"
#include "qkdsim/errors.hpp"

namespace qkdsim {

namespace {

using Vec3 = std::array<double, 3>;

constexpr double kSlewStepS = 0.1;

Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Orbit in the x-y plane, station displaced out of plane by the offset arc.
Vec3 satellite_position(const OrbitSpec& orbit, double angular_rate, double t_s) {
    const double r = kEarthRadiusKm + orbit.altitude_km;
    const double phase = angular_rate * t_s;
    return {r * std::cos(phase), r * std::sin(phase), 0.0};
}

Vec3 station_position(const OrbitSpec& orbit) {
    const double beta = orbit.ground_track_offset_km / kEarthRadiusKm;
    return {kEarthRadiusKm * std::cos(beta), 0.0, kEarthRadiusKm * std::sin(beta)};
}

Vec3 line_of_sight(const OrbitSpec& orbit, double angular_rate, double t_s) {
    const Vec3 los = satellite_position(orbit, angular_rate, t_s) - station_position(orbit);
    return (1.0 / norm(los)) * los;
}

}  // namespace

void OrbitSpec::validate() const {
    if (!(altitude_km > 0.0)) {
        throw DomainError("orbit altitude must be positive");
    }
    if (!(ground_track_offset_km >= 0.0)) {
        throw DomainError("ground track offset must be non-negative");
    }
}

Kinematics orbit_kinematics(const OrbitSpec& orbit) {
    orbit.validate();
    const double radius = kEarthRadiusKm + orbit.altitude_km;
    Kinematics k;
    k.orbital_speed_km_s = std::sqrt(kEarthGmKm3S2 / radius);
    k.period_s = 2.0 * kPi * radius / k.orbital_speed_km_s;
    k.orbital_angular_rate_rad_s = k.orbital_speed_km_s / radius;
    return k;
}

PassSample pass_sample(const OrbitSpec& orbit, double t_s) {
    const Kinematics kin = orbit_kinematics(orbit);
    const double re = kEarthRadiusKm;
    const double rs = re + orbit.altitude_km;
    const double beta = orbit.ground_track_offset_km / re;
    const double phase = kin.orbital_angular_rate_rad_s * t_s;

    // cos(gamma) = cos(beta) cos(phase); haversine form keeps precision near 0.
    const double x = 2.0 * std::pow(std::sin(0.5 * beta), 2);
    const double y = 2.0 * std::pow(std::sin(0.5 * phase), 2);
    const double one_minus_cos_gamma = x + y - x * y;
    const double cos_gamma = 1.0 - one_minus_cos_gamma;
    const double hav = std::clamp(0.5 * one_minus_cos_gamma, 0.0, 1.0);

    PassSample s;
    s.t_s = t_s;
    s.central_angle_rad = 2.0 * std::asin(std::sqrt(hav));
    s.slant_range_km = std::sqrt((rs - re) * (rs - re) + 4.0 * re * rs * hav);
    const double cos_zenith = std::clamp((rs * cos_gamma - re) / s.slant_range_km, -1.0, 1.0);
    s.zenith_rad = std::acos(cos_zenith);
    s.elevation_rad = 0.5 * kPi - s.zenith_rad;
    return s;
}

double visibility_half_window_s(const OrbitSpec& orbit, double min_elevation_rad) {
    const Kinematics kin = orbit_kinematics(orbit);
    if (pass_sample(orbit, 0.0).elevation_rad < min_elevation_rad) {
        return 0.0;
    }
    // Elevation decreases monotonically over half an orbit.
    double lo = 0.0;
    double hi = 0.5 * kin.period_s;
    if (pass_sample(orbit, hi).elevation_rad >= min_elevation_rad) {
        return hi;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-9; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (pass_sample(orbit, mid).elevation_rad >= min_elevation_rad) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

std::vector<PassSample> pass_profile(const OrbitSpec& orbit, double dt_s, double min_elevation_rad) {
    if (!(dt_s > 0.0)) {
        throw DomainError("pass_profile: dt_s must be positive");
    }
    std::vector<PassSample> out;
    if (pass_sample(orbit, 0.0).elevation_rad < min_elevation_rad) {
        return out;
    }
    const double half = visibility_half_window_s(orbit, min_elevation_rad);
    const auto k_max = static_cast<long long>(std::floor(half / dt_s + 1e-9));
    out.reserve(static_cast<std::size_t>(2 * k_max + 1));
    for (long long k = -k_max; k <= k_max; ++k) {
        out.push_back(pass_sample(orbit, static_cast<double>(k) * dt_s));
    }
    return out;
}

SlewRates slew_rates(const OrbitSpec& orbit, double t_s) {
    const Kinematics kin = orbit_kinematics(orbit);
    const double w = kin.orbital_angular_rate_rad_s;
    const Vec3 u = line_of_sight(orbit, w, t_s);
    const Vec3 u_dot = (1.0 / (2.0 * kSlewStepS)) *
                       (line_of_sight(orbit, w, t_s + kSlewStepS) - line_of_sight(orbit, w, t_s - kSlewStepS));
    // Angular velocity of a unit vector: u x du/dt.
    const Vec3 omega_los = cross(u, u_dot);
    const Vec3 omega_orbit = {0.0, 0.0, w};

    SlewRates r;
    r.ogs_rate_rad_s = norm(omega_los);
    r.sat_rate_rad_s = norm(omega_los - omega_orbit);
    return r;
}

PointAhead point_ahead(const OrbitSpec& orbit, double t_s) {
    const PassSample s = pass_sample(orbit, t_s);
    PointAhead p;
    p.light_time_s = s.slant_range_km / kSpeedOfLightKmS;
    p.angle_rad = slew_rates(orbit, t_s).ogs_rate_rad_s * p.light_time_s;
    return p;
}

double footprint_diameter_m(double fov_rad, double slant_range_km) {
    if (!(fov_rad >= 0.0)) {
        throw DomainError("field of view must be non-negative");
    }
    return fov_rad * slant_range_km * 1000.0;
}

}  // namespace qkdsim
