// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace qkdsim {

/// Uplink optics and atmosphere. Defaults: 808 nm channel, 1 m OGS
/// transmitter, 15 cm satellite receiver.
struct LinkParams {
    double wavelength_m = 808e-9;
    double a_atm0_db = 3.0;  ///< zenith atmospheric attenuation
    double d_r_m = 0.15;
    double d_t_m = 1.0;
    double t_r = 0.8;
    double t_t = 0.8;
    double l_p = 0.2;  ///< pointing loss fraction
    double altitude_km = 550.0;

    void validate() const;
};

/// Fried parameter at zenith, quoted at reference_wavelength_m.
struct Atmosphere {
    double fried_r0_m = 0.20;
    double reference_wavelength_m = 808e-9;

    void validate() const;
};

struct BackgroundModel {
    double spectral_radiance_photons = 2.5e11;  ///< s^-1 sr^-1 m^-2 within the bandpass
    double fov_rad = 215e-6;                    ///< full angle
    double pde = 0.4;

    void validate() const;
};

/// How the excess path through the atmosphere scales with the pointing angle.
enum class AirmassModel {
    secant,       ///< 1 / cos(zenith)
    slant_ratio,  ///< L / h
};

struct LinkOptions {
    bool zenith_scaling = true;  ///< shrink r0 along slanted paths
    AirmassModel airmass = AirmassModel::slant_ratio;
};

/// Full-cone diffraction divergence 2.44 lambda / D_T.
double diffraction_divergence(const LinkParams& params);

/// Full-cone turbulence divergence 2.1 lambda / r0.
double turbulence_divergence(double wavelength_m, double fried_r0_m);

/// r0 grows as lambda^(6/5).
double fried_scale_wavelength(double r0_at_ref_m, double ref_wavelength_m, double target_wavelength_m);

/// r0 * cos(zenith)^(3/5); throws DomainError for zenith >= 90 deg.
double fried_scale_zenith(double r0_zenith_m, double zenith_rad);

/// r0 * airmass^(-3/5) for an arbitrary path-length factor >= 1.
double fried_scale_airmass(double r0_zenith_m, double airmass);

/// A_atm,0 / cos(zenith); throws DomainError for zenith >= 90 deg.
double atmospheric_attenuation_db(double a_atm0_db, double zenith_rad);

/// Path-length factor for the chosen model.
double airmass_factor(AirmassModel model, double slant_range_km, double altitude_km, double zenith_rad);

/// Average uplink attenuation in dB (positive loss). Diffraction and
/// turbulence divergences add in quadrature; the turbulence term uses r0
/// scaled to the link wavelength and, when enabled, to the path airmass.
double link_attenuation_db(const LinkParams& params, const Atmosphere& atmosphere, double slant_range_km,
                           double zenith_rad, const LinkOptions& options = {});

/// Detected background counts/s: radiance x receiver area x FOV solid angle
/// x T_R x atmospheric transmission x PDE. Independent of slant range.
double background_count_rate(const BackgroundModel& model, const LinkParams& params, double zenith_rad);

/// 10^(-db/10)
double db_to_transmittance(double db);

}  // namespace qkdsim
