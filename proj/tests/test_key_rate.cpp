// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "qkdsim/errors.hpp"
#include "qkdsim/key_rate.hpp"
#include "qkdsim/scenario.hpp"

using namespace qkdsim;

namespace {

// No-click probability summed over the thermal pair-number distribution
// P(n) = (n+1) l^n / (1+l)^(n+2), l = mu/2, each pair lost with probability x.
double no_click_series(double lambda, double x) {
    double sum = 0.0;
    double term = 1.0 / ((1.0 + lambda) * (1.0 + lambda));
    const double ratio = lambda * x / (1.0 + lambda);
    for (int n = 0; n < 2000; ++n) {
        sum += (n + 1) * term;
        term *= ratio;
    }
    return sum;
}

double coincidence_oracle(const SourceDetectorParams& p, double eta_b) {
    const double l = 0.5 * p.mu;
    const double y0a = 4 * p.d_a_cps * p.tau_s;
    const double y0b = (4 * p.d_b_cps + p.b_cps) * p.tau_s;
    const double no_a = no_click_series(l, 1.0 - p.eta_a);
    const double no_b = no_click_series(l, 1.0 - eta_b);
    const double no_ab = no_click_series(l, (1.0 - p.eta_a) * (1.0 - eta_b));
    return 1.0 - (1.0 - y0a) * no_a - (1.0 - y0b) * no_b + (1.0 - y0a) * (1.0 - y0b) * no_ab;
}

double h2(double x) { return -x * std::log2(x) - (1 - x) * std::log2(1 - x); }

}  // namespace

TEST_CASE("noise probabilities") {
    const NoiseProbabilities n = noise_probabilities({});
    CHECK(n.y0a == doctest::Approx(4e-7));
    CHECK(n.y0b == doctest::Approx(8e-7));
}

TEST_CASE("coincidence probability agrees with the thermal series") {
    SourceDetectorParams p;
    for (double a : {20.0, 35.0, 45.0, 55.0}) {
        const double eta_b = eta_b_from_attenuation(p.pde, a);
        CAPTURE(a);
        CHECK(coincidence_probability(p, eta_b) == doctest::Approx(coincidence_oracle(p, eta_b)).epsilon(1e-8));
    }
    p.mu = 0.3;
    p.d_b_cps = 1000.0;
    const double eta_b = eta_b_from_attenuation(p.pde, 30.0);
    CHECK(coincidence_probability(p, eta_b) == doctest::Approx(coincidence_oracle(p, eta_b)).epsilon(1e-8));
}

TEST_CASE("plus sign on the joint term gives a negative coincidence probability") {
    SourceDetectorParams p;
    p.joint_sign = JointTermSign::plus;
    CHECK(coincidence_probability(p, eta_b_from_attenuation(p.pde, 40.0)) < 0.0);
}

TEST_CASE("coincidence rate is Q over tau") {
    SourceDetectorParams p;
    CHECK(coincidence_rate(p, 1e-6) == doctest::Approx(1000.0));
}

TEST_CASE("qber limits") {
    SourceDetectorParams p;
    CHECK(qber(p, 1.0) == doctest::Approx(p.e_d).epsilon(0.05));
    CHECK(qber(p, 1e-12) == doctest::Approx(p.e0).epsilon(1e-2));
    p.d_a_cps = p.d_b_cps = p.b_cps = 0.0;
    // Without noise only multi-pair emission adds errors, and that vanishes with mu.
    CHECK(qber(p, 1e-3) > p.e_d);
    p.mu = 1e-6;
    CHECK(qber(p, 1e-3) == doctest::Approx(p.e_d).epsilon(1e-3));
}

TEST_CASE("qber is monotone in attenuation") {
    SourceDetectorParams p;
    double previous = 0.0;
    for (double a = 20.0; a <= 60.0; a += 2.0) {
        const double e = qber(p, eta_b_from_attenuation(p.pde, a));
        CHECK(e > previous);
        previous = e;
    }
}

TEST_CASE("visibility and snr") {
    CHECK(visibility(0.0) == 1.0);
    CHECK(visibility(1.0 / 3.0) == doctest::Approx(0.5));
    CHECK(snr(0.1) == doctest::Approx(9.0));
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.05) == doctest::Approx(h2(0.05)));
    CHECK(binary_entropy(0.05) == doctest::Approx(0.286397).epsilon(1e-6));
    CHECK(binary_entropy(0.2) == doctest::Approx(binary_entropy(0.8)));
    CHECK_THROWS_AS(binary_entropy(1.5), DomainError);
}

TEST_CASE("distillation fraction and its cutoff") {
    CHECK(distillation_fraction(0.05, 0.5, 1.22) == doctest::Approx(0.5 * (1 - 2.22 * h2(0.05))));
    CHECK(distillation_fraction(0.2, 0.5, 1.22) == 0.0);
    CHECK(distillation_cutoff_qber(1.0) == doctest::Approx(0.110028).epsilon(1e-5));
    CHECK(distillation_cutoff_qber(1.22) == doctest::Approx(0.094235).epsilon(1e-5));
    const double x = distillation_cutoff_qber(1.22);
    CHECK(1.0 - 2.22 * h2(x) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("evaluate_key_rate assembles the pieces") {
    const SourceDetectorParams p;
    const KeyRateMetrics m = evaluate_key_rate(p, 40.0);
    CHECK(m.eta_b == doctest::Approx(0.4e-4));
    CHECK(m.r_coinc_cps == doctest::Approx(m.q_coinc / p.tau_s));
    CHECK(m.visibility == doctest::Approx((1 - m.qber) / (1 + m.qber)));
    CHECK(m.r_secure_cps == doctest::Approx(m.r_coinc_cps * distillation_fraction(m.qber, 0.5, 1.22)));
    CHECK(secure_key_rate(p, 60.0) == 0.0);

    SourceDetectorParams bad;
    bad.d_b_cps = -1.0;
    CHECK_THROWS_AS(evaluate_key_rate(bad, 40.0), DomainError);
}

TEST_CASE("qber threshold crossings") {
    SourceDetectorParams p;
    p.d_b_cps = 100.0;
    CHECK(qber_crossing_db(p, 0.094) == doctest::Approx(48.578).epsilon(1e-4));
    p.d_b_cps = 1000.0;
    CHECK(qber_crossing_db(p, 0.094) == doctest::Approx(41.175).epsilon(1e-4));
    CHECK(std::isnan(qber_crossing_db(p, 0.6)));
}

TEST_CASE("bell test time") {
    const SourceDetectorParams p;
    CHECK(bell_test_time(p, 40.0) == doctest::Approx(0.387).epsilon(2e-3));
    CHECK(bell_test_time(p, 50.0) == doctest::Approx(3.34).epsilon(2e-3));
    CHECK(bell_test_time(p, 40.0, 2000.0) == doctest::Approx(2.0 * bell_test_time(p, 40.0)));
}

TEST_CASE("accidental rate") {
    const double nr = receiver_singles_rate(1e8, 0.32, 50.0, 0.0);
    CHECK(nr == doctest::Approx(320.0));
    CHECK(accidental_rate(1e8, 0.32, nr, 1e-9) == doctest::Approx(10.24));
}

TEST_CASE("key per pass integrates the sampled rate") {
    ScenarioConfig s;
    const PassKeyResult r = key_per_pass(s);
    REQUIRE(r.samples.size() > 2);
    double trapezoid = 0.0;
    for (std::size_t i = 1; i < r.samples.size(); ++i) {
        trapezoid += 0.5 * (r.samples[i - 1].r_secure_cps + r.samples[i].r_secure_cps) *
                     (r.samples[i].t_s - r.samples[i - 1].t_s);
        CHECK(r.samples[i].cumulative_bits >= r.samples[i - 1].cumulative_bits);
    }
    CHECK(r.total_bits == doctest::Approx(trapezoid));
    CHECK(r.samples.back().cumulative_bits == doctest::Approx(r.total_bits));
    for (const auto& k : r.samples) {
        if (!k.usable) {
            CHECK(k.r_secure_cps == 0.0);
        } else {
            CHECK(k.attenuation_db <= s.integration.loss_cutoff_db);
        }
    }
}

TEST_CASE("key per pass respects the window cap and the elevation mask") {
    ScenarioConfig s;
    s.integration.max_window_s = 100.0;
    const PassKeyResult r = key_per_pass(s);
    CHECK(r.samples.front().t_s == -50.0);
    CHECK(r.samples.back().t_s == 50.0);

    s.orbit.ground_track_offset_km = 3000.0;
    CHECK(key_per_pass(s).total_bits == 0.0);
    CHECK(key_per_pass(s).samples.empty());
}

TEST_CASE("annual yield weights bins by their share of days") {
    FriedHistogram h;
    CHECK(annual_yield(h, 100.0, [](double) { return 1.0; }) == 0.0);
    h.bins = {{0.1, 100.0}, {0.2, 300.0}};
    const double y = annual_yield(h, 100.0, [](double r0) { return r0 < 0.15 ? 1000.0 : 2000.0; });
    CHECK(y == doctest::Approx(100.0 * (0.25 * 1000.0 + 0.75 * 2000.0)));

    FriedHistogram single;
    single.bins = {{0.2, 365.0}};
    CHECK(annual_yield(single, 100.0, [](double) { return 2e5; }) == 2e7);

    FriedHistogram unsorted;
    unsorted.bins = {{0.2, 1.0}, {0.1, 1.0}};
    CHECK_THROWS_AS(annual_yield(unsorted, 100.0, [](double) { return 1.0; }), DomainError);
}

TEST_CASE("annual yield from a scenario uses the histogram wavelength") {
    ScenarioConfig s;
    FriedHistogram h;
    h.bins = {{0.2, 1.0}};
    h.reference_wavelength_m = s.atmosphere.reference_wavelength_m;
    CHECK(annual_yield(h, 10.0, s) == doctest::Approx(10.0 * key_per_pass(s).total_bits));
}
