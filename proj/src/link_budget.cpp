// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qkdsim/link_budget.hpp"

#include <algorithm>
#include <cmath>

#include "qkdsim/constants.hpp"
#include "qkdsim/errors.hpp"

namespace qkdsim {

namespace {

void require_zenith(double zenith_rad) {
    if (!(zenith_rad >= 0.0 && zenith_rad < 0.5 * kPi)) {
        throw DomainError("zenith angle must lie in [0, 90) deg");
    }
}

}  // namespace

void LinkParams::validate() const {
    if (!(wavelength_m > 0.0 && d_r_m > 0.0 && d_t_m > 0.0 && altitude_km > 0.0)) {
        throw DomainError("link lengths must be positive");
    }
    if (!(t_r > 0.0 && t_r <= 1.0 && t_t > 0.0 && t_t <= 1.0)) {
        throw DomainError("telescope transmissions must lie in (0, 1]");
    }
    if (!(l_p >= 0.0 && l_p < 1.0)) {
        throw DomainError("pointing loss must lie in [0, 1)");
    }
    if (!(a_atm0_db >= 0.0)) {
        throw DomainError("zenith atmospheric attenuation must be non-negative");
    }
}

void Atmosphere::validate() const {
    if (!(fried_r0_m > 0.0 && reference_wavelength_m > 0.0)) {
        throw DomainError("Fried parameter and reference wavelength must be positive");
    }
}

void BackgroundModel::validate() const {
    if (!(spectral_radiance_photons >= 0.0 && fov_rad >= 0.0)) {
        throw DomainError("background radiance and FOV must be non-negative");
    }
    if (!(pde >= 0.0 && pde <= 1.0)) {
        throw DomainError("PDE must lie in [0, 1]");
    }
}

double diffraction_divergence(const LinkParams& params) {
    if (!(params.d_t_m > 0.0)) {
        throw DomainError("transmitter diameter must be positive");
    }
    return 2.44 * params.wavelength_m / params.d_t_m;
}

double turbulence_divergence(double wavelength_m, double fried_r0_m) {
    if (!(fried_r0_m > 0.0)) {
        throw DomainError("Fried parameter must be positive");
    }
    return 2.1 * wavelength_m / fried_r0_m;
}

double fried_scale_wavelength(double r0_at_ref_m, double ref_wavelength_m, double target_wavelength_m) {
    if (!(r0_at_ref_m > 0.0 && ref_wavelength_m > 0.0 && target_wavelength_m > 0.0)) {
        throw DomainError("fried_scale_wavelength: arguments must be positive");
    }
    return r0_at_ref_m * std::pow(target_wavelength_m / ref_wavelength_m, 6.0 / 5.0);
}

double fried_scale_zenith(double r0_zenith_m, double zenith_rad) {
    require_zenith(zenith_rad);
    return r0_zenith_m * std::pow(std::cos(zenith_rad), 3.0 / 5.0);
}

double fried_scale_airmass(double r0_zenith_m, double airmass) {
    if (!(airmass >= 1.0)) {
        throw DomainError("airmass must be >= 1");
    }
    return r0_zenith_m * std::pow(airmass, -3.0 / 5.0);
}

double atmospheric_attenuation_db(double a_atm0_db, double zenith_rad) {
    require_zenith(zenith_rad);
    return a_atm0_db / std::cos(zenith_rad);
}

double airmass_factor(AirmassModel model, double slant_range_km, double altitude_km, double zenith_rad) {
    require_zenith(zenith_rad);
    switch (model) {
        case AirmassModel::secant:
            return 1.0 / std::cos(zenith_rad);
        case AirmassModel::slant_ratio:
            // Rounding can put L a hair below h at zenith.
            return std::max(1.0, slant_range_km / altitude_km);
    }
    return 1.0;
}

double link_attenuation_db(const LinkParams& params, const Atmosphere& atmosphere, double slant_range_km,
                           double zenith_rad, const LinkOptions& options) {
    params.validate();
    atmosphere.validate();
    if (!(slant_range_km > 0.0)) {
        throw DomainError("slant range must be positive");
    }
    const double airmass = airmass_factor(options.airmass, slant_range_km, params.altitude_km, zenith_rad);

    double r0 = fried_scale_wavelength(atmosphere.fried_r0_m, atmosphere.reference_wavelength_m, params.wavelength_m);
    if (options.zenith_scaling) {
        r0 = fried_scale_airmass(r0, airmass);
    }
    const double theta_t = diffraction_divergence(params);
    const double theta_atm = turbulence_divergence(params.wavelength_m, r0);
    const double a_atm_db = params.a_atm0_db * airmass;

    const double range_m = slant_range_km * 1000.0;
    const double geometric = range_m * range_m * (theta_t * theta_t + theta_atm * theta_atm) /
                             (params.d_r_m * params.d_r_m);
    const double optics = 1.0 / (params.t_t * (1.0 - params.l_p) * params.t_r);
    return 10.0 * std::log10(geometric * optics) + a_atm_db;
}

double background_count_rate(const BackgroundModel& model, const LinkParams& params, double zenith_rad) {
    model.validate();
    params.validate();
    const double area_m2 = kPi * params.d_r_m * params.d_r_m / 4.0;
    const double half_fov = 0.5 * model.fov_rad;
    const double solid_angle_sr = kPi * half_fov * half_fov;
    const double a_atm_db = atmospheric_attenuation_db(params.a_atm0_db, zenith_rad);
    return model.spectral_radiance_photons * area_m2 * solid_angle_sr * params.t_r * db_to_transmittance(a_atm_db) *
           model.pde;
}

double db_to_transmittance(double db) { return std::pow(10.0, -db / 10.0); }

}  // namespace qkdsim
