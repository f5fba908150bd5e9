// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qkdsim/key_rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qkdsim/errors.hpp"
#include "qkdsim/link_budget.hpp"
#include "qkdsim/orbit_geometry.hpp"
#include "qkdsim/scenario.hpp"

namespace qkdsim {

void SourceDetectorParams::validate() const {
    if (!(mu > 0.0 && mu < 1.0)) {
        throw DomainError("mu must lie in (0, 1)");
    }
    if (!(tau_s > 0.0)) {
        throw DomainError("coincidence window must be positive");
    }
    if (!(q_sift > 0.0 && q_sift <= 1.0)) {
        throw DomainError("sifting factor must lie in (0, 1]");
    }
    if (!(f_ec >= 1.0)) {
        throw DomainError("error-correction efficiency must be >= 1");
    }
    if (!(d_a_cps >= 0.0 && d_b_cps >= 0.0 && b_cps >= 0.0)) {
        throw DomainError("dark and background rates must be non-negative");
    }
    if (n_det < 1) {
        throw DomainError("need at least one detector per side");
    }
    if (!(pde >= 0.0 && pde <= 1.0 && eta_a >= 0.0 && eta_a <= 1.0)) {
        throw DomainError("efficiencies must lie in [0, 1]");
    }
    if (!(e0 >= 0.0 && e0 <= 0.5)) {
        throw DomainError("e0 must lie in [0, 0.5]");
    }
    if (!(e_d >= 0.0 && e_d < 0.5)) {
        throw DomainError("e_d must lie in [0, 0.5)");
    }
}

void FriedHistogram::validate() const {
    double previous = 0.0;
    for (const FriedBin& bin : bins) {
        if (!(bin.r0_m > previous)) {
            throw DomainError("histogram r0 bins must be positive and strictly increasing");
        }
        if (!(bin.days_per_year >= 0.0)) {
            throw DomainError("histogram days must be non-negative");
        }
        previous = bin.r0_m;
    }
}

double eta_b_from_attenuation(double pde, double attenuation_db) { return pde * db_to_transmittance(attenuation_db); }

NoiseProbabilities noise_probabilities(const SourceDetectorParams& p) {
    NoiseProbabilities n;
    n.y0a = p.n_det * p.d_a_cps * p.tau_s;
    n.y0b = (p.n_det * p.d_b_cps + p.b_cps) * p.tau_s;
    return n;
}

double coincidence_probability(const SourceDetectorParams& p, double eta_b) {
    const NoiseProbabilities n = noise_probabilities(p);
    const double half_mu = 0.5 * p.mu;
    const double a = 1.0 + p.eta_a * half_mu;
    const double b = 1.0 + eta_b * half_mu;
    const double sign = p.joint_sign == JointTermSign::minus ? -1.0 : 1.0;
    const double joint = 1.0 + p.eta_a * half_mu + eta_b * half_mu + sign * p.eta_a * eta_b * half_mu;
    return 1.0 - (1.0 - n.y0a) / (a * a) - (1.0 - n.y0b) / (b * b) + (1.0 - n.y0a) * (1.0 - n.y0b) / (joint * joint);
}

double coincidence_rate(const SourceDetectorParams& p, double q_coinc) { return q_coinc / p.tau_s; }

double accidental_rate(double pair_rate_cps, double eta_a, double receiver_singles_cps, double tau_s) {
    return eta_a * pair_rate_cps * receiver_singles_cps * tau_s;
}

double receiver_singles_rate(double pair_rate_cps, double eta, double attenuation_db, double noise_cps) {
    return eta * pair_rate_cps * db_to_transmittance(attenuation_db) + noise_cps;
}

double qber(const SourceDetectorParams& p, double eta_b) {
    const double q = coincidence_probability(p, eta_b);
    if (!(q > 0.0)) {
        return p.e0;
    }
    const double half_mu = 0.5 * p.mu;
    const double sign = p.joint_sign == JointTermSign::minus ? -1.0 : 1.0;
    const double signal = (p.e0 - p.e_d) * p.eta_a * eta_b * p.mu * (1.0 + half_mu) /
                          ((1.0 + p.eta_a * half_mu) * (1.0 + eta_b * half_mu) *
                           (1.0 + p.eta_a * half_mu + eta_b * half_mu + sign * p.eta_a * eta_b * half_mu));
    return p.e0 - signal / q;
}

double visibility(double qber) { return (1.0 - qber) / (1.0 + qber); }

double snr(double qber) { return 1.0 / qber - 1.0; }

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("binary_entropy: argument must lie in [0, 1]");
    }
    if (x == 0.0 || x == 1.0) {
        return 0.0;
    }
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double distillation_fraction(double qber, double q_sift, double f_ec) {
    const double h = binary_entropy(qber);
    return std::max(0.0, q_sift * (1.0 - f_ec * h - h));
}

KeyRateMetrics evaluate_key_rate(const SourceDetectorParams& p, double attenuation_db) {
    p.validate();
    KeyRateMetrics m;
    m.attenuation_db = attenuation_db;
    m.eta_b = eta_b_from_attenuation(p.pde, attenuation_db);
    const NoiseProbabilities n = noise_probabilities(p);
    m.y0a = n.y0a;
    m.y0b = n.y0b;
    m.q_coinc = coincidence_probability(p, m.eta_b);
    m.r_coinc_cps = coincidence_rate(p, m.q_coinc);
    m.qber = qber(p, m.eta_b);
    m.visibility = visibility(m.qber);
    m.snr = snr(m.qber);
    // Above one half the model has left its domain (non-physical Q); no key.
    m.r_dist = (m.qber >= 0.0 && m.qber <= 0.5) ? distillation_fraction(m.qber, p.q_sift, p.f_ec) : 0.0;
    m.r_secure_cps = m.r_coinc_cps > 0.0 ? m.r_coinc_cps * m.r_dist : 0.0;
    return m;
}

double secure_key_rate(const SourceDetectorParams& p, double attenuation_db) {
    return evaluate_key_rate(p, attenuation_db).r_secure_cps;
}

double bell_test_time(const SourceDetectorParams& p, double attenuation_db, double n_required) {
    const double rate = evaluate_key_rate(p, attenuation_db).r_coinc_cps;
    if (!(rate > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return n_required / rate;
}

double qber_crossing_db(const SourceDetectorParams& p, double target_qber, double lo_db, double hi_db) {
    auto excess = [&](double a_db) { return qber(p, eta_b_from_attenuation(p.pde, a_db)) - target_qber; };
    if (excess(lo_db) >= 0.0) {
        return lo_db;
    }
    if (excess(hi_db) < 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double lo = lo_db;
    double hi = hi_db;
    for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double distillation_cutoff_qber(double f_ec) {
    // 1 - (1 + f) H2(x) is decreasing on (0, 1/2].
    double lo = 1e-12;
    double hi = 0.5;
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        (1.0 - (1.0 + f_ec) * binary_entropy(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

PassKeyResult key_per_pass(const ScenarioConfig& scenario) {
    scenario.validate();
    const IntegrationSettings& cfg = scenario.integration;
    if (!(cfg.dt_s > 0.0)) {
        throw DomainError("integration step must be positive");
    }
    PassKeyResult result;
    if (pass_sample(scenario.orbit, 0.0).elevation_rad < cfg.min_elevation_rad) {
        return result;
    }
    const double half_visible = visibility_half_window_s(scenario.orbit, cfg.min_elevation_rad);
    const double half = std::min(half_visible, 0.5 * cfg.max_window_s);
    const auto k_max = static_cast<long long>(std::floor(half / cfg.dt_s + 1e-9));

    LinkParams link = scenario.link;
    link.altitude_km = scenario.orbit.altitude_km;
    double previous_rate = 0.0;
    for (long long k = -k_max; k <= k_max; ++k) {
        const double t = static_cast<double>(k) * cfg.dt_s;
        const PassSample geo = pass_sample(scenario.orbit, t);
        PassKeySample s;
        s.t_s = t;
        s.slant_range_km = geo.slant_range_km;
        s.elevation_rad = geo.elevation_rad;
        s.attenuation_db =
            link_attenuation_db(link, scenario.atmosphere, geo.slant_range_km, geo.zenith_rad, scenario.link_options);
        s.usable = geo.elevation_rad >= cfg.min_elevation_rad && s.attenuation_db <= cfg.loss_cutoff_db;
        s.r_secure_cps = s.usable ? secure_key_rate(scenario.source, s.attenuation_db) : 0.0;
        if (!result.samples.empty()) {
            result.total_bits += 0.5 * (previous_rate + s.r_secure_cps) * cfg.dt_s;
        }
        s.cumulative_bits = result.total_bits;
        previous_rate = s.r_secure_cps;
        result.samples.push_back(s);
    }
    return result;
}

double annual_yield(const FriedHistogram& hist, double passes_per_year,
                    const std::function<double(double r0_m)>& key_for_r0) {
    hist.validate();
    if (!(passes_per_year >= 0.0)) {
        throw DomainError("passes per year must be non-negative");
    }
    double total_days = 0.0;
    for (const FriedBin& bin : hist.bins) {
        total_days += bin.days_per_year;
    }
    if (total_days <= 0.0) {
        return 0.0;
    }
    double sum = 0.0;
    for (const FriedBin& bin : hist.bins) {
        if (bin.days_per_year > 0.0) {
            sum += bin.days_per_year / total_days * key_for_r0(bin.r0_m);
        }
    }
    return passes_per_year * sum;
}

double annual_yield(const FriedHistogram& hist, double passes_per_year, const ScenarioConfig& scenario) {
    return annual_yield(hist, passes_per_year, [&](double r0_m) {
        ScenarioConfig s = scenario;
        s.atmosphere.fried_r0_m = r0_m;
        s.atmosphere.reference_wavelength_m = hist.reference_wavelength_m;
        return key_per_pass(s).total_bits;
    });
}

}  // namespace qkdsim
