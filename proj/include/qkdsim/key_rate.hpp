// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qkdsim {

struct ScenarioConfig;

/// Sign of the joint eta_A eta_B mu / 2 term in the coincidence-probability
/// denominator. `minus` is the entangled-source model's result; `plus` is a
/// typeset variant kept for comparison (it goes negative at typical losses).
enum class JointTermSign { minus, plus };

/// Source and detector parameters of the entangled-photon key-rate model.
/// Pair rate is mu / tau_s.
struct SourceDetectorParams {
    double mu = 0.1;
    double tau_s = 1e-9;
    double q_sift = 0.5;
    double f_ec = 1.22;
    double d_a_cps = 100.0;
    double d_b_cps = 100.0;
    double b_cps = 400.0;
    int n_det = 4;
    double pde = 0.4;
    double eta_a = 0.6;
    double e0 = 0.5;
    double e_d = 0.01;
    JointTermSign joint_sign = JointTermSign::minus;

    double pair_rate_cps() const { return mu / tau_s; }
    void validate() const;
};

struct NoiseProbabilities {
    double y0a = 0.0;
    double y0b = 0.0;
};

struct KeyRateMetrics {
    double attenuation_db = 0.0;
    double eta_b = 0.0;
    double y0a = 0.0;
    double y0b = 0.0;
    double q_coinc = 0.0;
    double r_coinc_cps = 0.0;
    double qber = 0.0;
    double visibility = 0.0;
    double snr = 0.0;
    double r_dist = 0.0;
    double r_secure_cps = 0.0;
};

/// (r0 at reference wavelength, days per year) bins.
struct FriedBin {
    double r0_m = 0.0;
    double days_per_year = 0.0;
};

struct FriedHistogram {
    std::vector<FriedBin> bins;
    double reference_wavelength_m = 810e-9;

    /// r0 strictly increasing and positive, days non-negative.
    void validate() const;
};

/// Bob-side detection efficiency PDE * 10^(-A/10).
double eta_b_from_attenuation(double pde, double attenuation_db);

NoiseProbabilities noise_probabilities(const SourceDetectorParams& p);

/// Probability of a coincidence per source time slot (window tau).
double coincidence_probability(const SourceDetectorParams& p, double eta_b);

/// Q / tau.
double coincidence_rate(const SourceDetectorParams& p, double q_coinc);

/// Rate of uncorrelated coincidences N_t * N_r * tau with N_t = eta_a * R.
double accidental_rate(double pair_rate_cps, double eta_a, double receiver_singles_cps, double tau_s);

/// Receiver singles eta * R * 10^(-A/10) + noise.
double receiver_singles_rate(double pair_rate_cps, double eta, double attenuation_db, double noise_cps);

double qber(const SourceDetectorParams& p, double eta_b);
double visibility(double qber);
double snr(double qber);

/// -x log2 x - (1-x) log2 (1-x); 0 at both endpoints.
double binary_entropy(double x);

/// q (1 - f H2 - H2), floored at zero.
double distillation_fraction(double qber, double q_sift, double f_ec);

/// All metrics at one link attenuation.
KeyRateMetrics evaluate_key_rate(const SourceDetectorParams& p, double attenuation_db);

double secure_key_rate(const SourceDetectorParams& p, double attenuation_db);

/// Seconds to collect n_required coincidences.
double bell_test_time(const SourceDetectorParams& p, double attenuation_db, double n_required = 1000.0);

/// Attenuation (dB) in [lo_db, hi_db] where qber first reaches target; NaN if
/// it never does.
double qber_crossing_db(const SourceDetectorParams& p, double target_qber, double lo_db = 0.0, double hi_db = 80.0);

/// Smallest QBER at which the distillation fraction reaches zero.
double distillation_cutoff_qber(double f_ec);

struct PassKeySample {
    double t_s = 0.0;
    double slant_range_km = 0.0;
    double elevation_rad = 0.0;
    double attenuation_db = 0.0;
    double r_secure_cps = 0.0;
    double cumulative_bits = 0.0;
    bool usable = false;
};

struct PassKeyResult {
    std::vector<PassKeySample> samples;
    double total_bits = 0.0;
};

/// Trapezoidal integral of the secure key rate across one pass. Samples
/// outside the elevation mask, above the loss cutoff, or outside the capped
/// window contribute zero.
PassKeyResult key_per_pass(const ScenarioConfig& scenario);

/// passes_per_year * sum_i share_i * key(r0_i), with share_i = days_i / sum days.
double annual_yield(const FriedHistogram& hist, double passes_per_year,
                    const std::function<double(double r0_m)>& key_for_r0);

/// Same, with key_per_pass evaluated on the scenario at each bin's r0.
double annual_yield(const FriedHistogram& hist, double passes_per_year, const ScenarioConfig& scenario);

}  // namespace qkdsim
