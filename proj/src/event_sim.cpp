// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qkdsim/event_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "qkdsim/errors.hpp"

namespace qkdsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(splitmix64(block)), static_cast<std::uint32_t>(block)};
    return std::mt19937_64(seq);
}

bool by_time(const DetectionEvent& a, const DetectionEvent& b) {
    if (a.tag.time_s != b.tag.time_s) {
        return a.tag.time_s < b.tag.time_s;
    }
    return a.pair_id < b.pair_id;
}

class BlockGenerator {
public:
    BlockGenerator(const SimConfig& cfg, std::uint64_t block, double start_s, double length_s)
        : cfg_(cfg), rng_(block_engine(cfg.rng_seed, block)), start_(start_s), length_(length_s),
          pair_base_(block << 40) {}

    void run(SimulatedStreams& out) {
        const std::uint64_t pairs = poisson(cfg_.pair_rate_cps * length_);
        for (std::uint64_t i = 0; i < pairs; ++i) {
            emit_pair(out, pair_base_ + i);
        }
        emit_noise(out.alice, Channel::alice, Origin::dark, cfg_.n_det * cfg_.d_a_cps);
        emit_noise(out.bob, Channel::bob, Origin::dark, cfg_.n_det * cfg_.d_b_cps);
        emit_noise(out.bob, Channel::bob, Origin::background, cfg_.b_cps);
    }

private:
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) {
            return 0;
        }
        std::poisson_distribution<std::uint64_t> dist(mean);
        return dist(rng_);
    }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
    bool coin(double p) { return uniform() < p; }
    std::uint8_t bit() { return static_cast<std::uint8_t>(rng_() >> 63); }

    double jitter() {
        if (cfg_.jitter_sigma_s <= 0.0) {
            return 0.0;
        }
        return std::normal_distribution<double>(0.0, cfg_.jitter_sigma_s)(rng_);
    }

    double bob_clock(double t) const { return (1.0 + cfg_.clock_drift_ppb * 1e-9) * t + cfg_.clock_offset_s; }

    static void push(std::vector<DetectionEvent>& v, DetectionEvent e) {
        if (e.tag.time_s >= 0.0) {
            v.push_back(e);
        }
    }

    void emit_pair(SimulatedStreams& out, std::uint64_t pair_id) {
        const double t = start_ + length_ * uniform();
        const bool at_alice = coin(cfg_.eta_a);
        const bool at_bob = coin(cfg_.eta_b);
        const auto basis_a = static_cast<Basis>(bit());
        const auto basis_b = static_cast<Basis>(bit());
        const std::uint8_t outcome_a = bit();
        std::uint8_t outcome_b = bit();
        if (at_alice && basis_a == basis_b) {
            outcome_b = outcome_a;
            if (coin(cfg_.e_d)) {
                outcome_b ^= 1U;
            }
        }
        if (at_alice) {
            push(out.alice, {{t + jitter(), basis_a, outcome_a}, Channel::alice, Origin::signal, pair_id});
        }
        if (at_bob) {
            push(out.bob, {{bob_clock(t + jitter()), basis_b, outcome_b}, Channel::bob, Origin::signal, pair_id});
        }
    }

    void emit_noise(std::vector<DetectionEvent>& v, Channel channel, Origin origin, double rate) {
        const std::uint64_t n = poisson(rate * length_);
        for (std::uint64_t i = 0; i < n; ++i) {
            double t = start_ + length_ * uniform();
            if (channel == Channel::bob) {
                t = bob_clock(t);
            }
            const auto basis = static_cast<Basis>(bit());
            push(v, {{t, basis, bit()}, channel, origin, 0});
        }
    }

    const SimConfig& cfg_;
    std::mt19937_64 rng_;
    double start_;
    double length_;
    std::uint64_t pair_base_;
};

void require_sorted(std::span<const TimeTag> tags, const char* name) {
    const bool sorted =
        std::is_sorted(tags.begin(), tags.end(), [](const TimeTag& a, const TimeTag& b) { return a.time_s < b.time_s; });
    if (!sorted) {
        throw std::invalid_argument(std::string(name) + " stream is not time-sorted");
    }
}

}  // namespace

void SimConfig::validate() const {
    if (!(duration_s > 0.0)) {
        throw DomainError("simulation duration must be positive");
    }
    if (!(pair_rate_cps >= 0.0 && d_a_cps >= 0.0 && d_b_cps >= 0.0 && b_cps >= 0.0)) {
        throw DomainError("simulation rates must be non-negative");
    }
    if (!(eta_a >= 0.0 && eta_a <= 1.0 && eta_b >= 0.0 && eta_b <= 1.0)) {
        throw DomainError("detection efficiencies must lie in [0, 1]");
    }
    if (!(e_d >= 0.0 && e_d <= 0.5)) {
        throw DomainError("e_d must lie in [0, 0.5]");
    }
    if (n_det < 0) {
        throw DomainError("detector count must be non-negative");
    }
    if (!(jitter_sigma_s >= 0.0)) {
        throw DomainError("jitter must be non-negative");
    }
}

double SimConfig::expected_events() const {
    const double per_second =
        pair_rate_cps * (eta_a + eta_b) + n_det * (d_a_cps + d_b_cps) + b_cps;
    return per_second * duration_s;
}

SimulatedStreams simulate_streams(const SimConfig& cfg) {
    cfg.validate();
    if (cfg.expected_events() > kMaxSimulatedEvents) {
        throw ResourceError("simulation would generate ~" + std::to_string(cfg.expected_events()) +
                            " events, above the budget of " + std::to_string(kMaxSimulatedEvents));
    }
    SimulatedStreams out;
    out.alice.reserve(static_cast<std::size_t>(cfg.duration_s * (cfg.pair_rate_cps * cfg.eta_a + cfg.n_det * cfg.d_a_cps) * 1.01 + 16));
    out.bob.reserve(static_cast<std::size_t>(
        cfg.duration_s * (cfg.pair_rate_cps * cfg.eta_b + cfg.n_det * cfg.d_b_cps + cfg.b_cps) * 1.01 + 16));

    const auto blocks = static_cast<std::uint64_t>(std::ceil(cfg.duration_s / kGenerationBlockS - 1e-12));
    for (std::uint64_t b = 0; b < blocks; ++b) {
        const double start = static_cast<double>(b) * kGenerationBlockS;
        const double length = std::min(kGenerationBlockS, cfg.duration_s - start);
        BlockGenerator(cfg, b, start, length).run(out);
    }
    std::sort(out.alice.begin(), out.alice.end(), by_time);
    std::sort(out.bob.begin(), out.bob.end(), by_time);
    return out;
}

std::vector<TimeTag> time_tags(std::span<const DetectionEvent> events) {
    std::vector<TimeTag> tags;
    tags.reserve(events.size());
    for (const DetectionEvent& e : events) {
        tags.push_back(e.tag);
    }
    return tags;
}

std::vector<Coincidence> match_coincidences(std::span<const TimeTag> alice, std::span<const TimeTag> bob,
                                            double tau_s, double offset_s) {
    require_sorted(alice, "alice");
    require_sorted(bob, "bob");
    const double half = 0.5 * tau_s;

    struct Candidate {
        double distance;
        std::size_t a;
        std::size_t b;
    };
    std::vector<Candidate> candidates;
    std::size_t first = 0;
    for (std::size_t i = 0; i < alice.size(); ++i) {
        const double t = alice[i].time_s;
        while (first < bob.size() && bob[first].time_s - offset_s < t - half) {
            ++first;
        }
        for (std::size_t j = first; j < bob.size() && bob[j].time_s - offset_s <= t + half; ++j) {
            candidates.push_back({std::abs(t - (bob[j].time_s - offset_s)), i, j});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
        if (x.distance != y.distance) {
            return x.distance < y.distance;
        }
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });

    std::vector<bool> used_a(alice.size(), false);
    std::vector<bool> used_b(bob.size(), false);
    std::vector<Coincidence> matches;
    for (const Candidate& c : candidates) {
        if (!used_a[c.a] && !used_b[c.b]) {
            used_a[c.a] = true;
            used_b[c.b] = true;
            matches.push_back({c.a, c.b});
        }
    }
    std::sort(matches.begin(), matches.end(),
              [](const Coincidence& x, const Coincidence& y) { return x.alice_idx < y.alice_idx; });
    return matches;
}

MeasuredMetrics estimate_metrics(std::span<const Coincidence> matches, std::span<const TimeTag> alice,
                                 std::span<const TimeTag> bob, double duration_s) {
    if (!(duration_s > 0.0)) {
        throw DomainError("estimate_metrics: duration must be positive");
    }
    MeasuredMetrics m;
    m.coincidences = matches.size();
    for (const Coincidence& c : matches) {
        const TimeTag& a = alice[c.alice_idx];
        const TimeTag& b = bob[c.bob_idx];
        if (a.basis != b.basis) {
            continue;
        }
        ++m.sifted;
        if (a.outcome != b.outcome) {
            ++m.errors;
        }
    }
    const auto n = static_cast<double>(m.coincidences);
    m.coincidence_rate_cps = n / duration_s;
    m.coincidence_rate_sigma = std::sqrt(n) / duration_s;
    if (m.sifted > 0) {
        const auto s = static_cast<double>(m.sifted);
        const double e = static_cast<double>(m.errors) / s;
        m.qber = e;
        m.qber_sigma = std::sqrt(std::max(e * (1.0 - e), 1.0 / s) / s);
        m.visibility = (1.0 - e) / (1.0 + e);
        m.visibility_sigma = 2.0 * m.qber_sigma / ((1.0 + e) * (1.0 + e));
    }
    return m;
}

std::vector<BlockOffset> recover_clock_offset(std::span<const TimeTag> alice, std::span<const TimeTag> bob,
                                              const ClockRecoveryOptions& options) {
    if (!(options.bin_s > 0.0 && options.block_s > 0.0 && options.max_offset_s > 0.0)) {
        throw DomainError("clock recovery: bin, block and search range must be positive");
    }
    require_sorted(alice, "alice");
    require_sorted(bob, "bob");
    std::vector<BlockOffset> out;
    if (alice.empty()) {
        return out;
    }

    const auto max_lag = static_cast<long long>(std::ceil(options.max_offset_s / options.bin_s));
    const std::size_t width = static_cast<std::size_t>(2 * max_lag + 1);
    std::vector<double> hist(width);
    const double reach = static_cast<double>(max_lag + 1) * options.bin_s;
    const auto bin_of = [&](double t) { return static_cast<long long>(std::floor(t / options.bin_s)); };

    const double t_end = alice.back().time_s;
    std::size_t a_begin = 0;
    std::size_t b_first = 0;
    for (long long block = 0;; ++block) {
        const double block_start = static_cast<double>(block) * options.block_s;
        if (block_start > t_end) {
            break;
        }
        const double block_stop = block_start + options.block_s;
        std::fill(hist.begin(), hist.end(), 0.0);

        std::size_t a = a_begin;
        for (; a < alice.size() && alice[a].time_s < block_stop; ++a) {
            const double ta = alice[a].time_s;
            while (b_first < bob.size() && bob[b_first].time_s < ta - reach) {
                ++b_first;
            }
            const long long ka = bin_of(ta);
            for (std::size_t j = b_first; j < bob.size() && bob[j].time_s <= ta + reach; ++j) {
                const long long lag = bin_of(bob[j].time_s) - ka;
                if (lag >= -max_lag && lag <= max_lag) {
                    hist[static_cast<std::size_t>(lag + max_lag)] += 1.0;
                }
            }
        }
        a_begin = a;

        BlockOffset result;
        result.block_start_s = block_start;
        const auto peak_it = std::max_element(hist.begin(), hist.end());
        const auto peak = static_cast<std::size_t>(peak_it - hist.begin());
        result.peak_counts = *peak_it;

        // Noise floor from bins away from the peak.
        double sum = 0.0;
        double sum_sq = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < width; ++i) {
            if (i + 2 >= peak && i <= peak + 2) {
                continue;
            }
            sum += hist[i];
            sum_sq += hist[i] * hist[i];
            ++count;
        }
        const double mean = count > 0 ? sum / static_cast<double>(count) : 0.0;
        const double var = count > 1 ? std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean) : 0.0;
        const double sigma = std::max({std::sqrt(var), std::sqrt(mean), 1.0});
        result.significance = (result.peak_counts - mean) / sigma;
        result.locked = result.significance >= options.min_significance;

        double delta = 0.0;
        if (peak > 0 && peak + 1 < width) {
            const double ym = hist[peak - 1];
            const double y0 = hist[peak];
            const double yp = hist[peak + 1];
            const double denom = ym - 2.0 * y0 + yp;
            if (denom != 0.0) {
                delta = std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
            }
        }
        const double lag = static_cast<double>(static_cast<long long>(peak) - max_lag) + delta;
        result.offset_s = lag * options.bin_s;
        out.push_back(result);
    }
    return out;
}

}  // namespace qkdsim
