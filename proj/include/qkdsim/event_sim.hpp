// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qkdsim {

enum class Channel : std::uint8_t { alice, bob };
enum class Basis : std::uint8_t { hv = 0, da = 1 };
enum class Origin : std::uint8_t { signal, dark, background };

/// What a time tagger records. Estimators only ever see these.
struct TimeTag {
    double time_s = 0.0;
    Basis basis = Basis::hv;
    std::uint8_t outcome = 0;
};

/// A simulated click plus ground truth. origin and pair_id are diagnostics
/// for tests; estimation entry points take spans of TimeTag.
struct DetectionEvent {
    TimeTag tag;
    Channel channel = Channel::alice;
    Origin origin = Origin::signal;
    std::uint64_t pair_id = 0;  ///< meaningful only for Origin::signal
};

struct SimConfig {
    double pair_rate_cps = 1e6;
    double duration_s = 2.0;
    double eta_a = 0.6;
    double eta_b = 1e-2;
    int n_det = 4;
    double d_a_cps = 100.0;
    double d_b_cps = 100.0;
    double b_cps = 400.0;
    double jitter_sigma_s = 70.71067811865476e-12;  ///< per side; 100 ps combined
    double e_d = 0.01;
    double clock_offset_s = 0.0;
    double clock_drift_ppb = 0.0;
    std::uint64_t rng_seed = 1;

    void validate() const;
    /// Expected number of generated clicks on both sides.
    double expected_events() const;
};

inline constexpr double kMaxSimulatedEvents = 1e8;
inline constexpr double kGenerationBlockS = 0.1;

struct SimulatedStreams {
    std::vector<DetectionEvent> alice;
    std::vector<DetectionEvent> bob;
};

/// Poisson pair source, independent detection at each side, uniform basis
/// choice, polarization errors with probability e_d, Poisson dark and
/// background clicks, Gaussian jitter, Bob clock t -> (1 + drift) t + offset.
/// Each generation block draws from an RNG seeded by (seed, block index).
/// Throws ResourceError when the expected event count exceeds the budget.
SimulatedStreams simulate_streams(const SimConfig& cfg);

/// Strip ground truth.
std::vector<TimeTag> time_tags(std::span<const DetectionEvent> events);

struct Coincidence {
    std::size_t alice_idx = 0;
    std::size_t bob_idx = 0;
};

/// Greedy nearest-neighbour pairing of clicks with |t_A - (t_B - offset)| <=
/// tau/2, each click used at most once. Result ordered by alice_idx.
/// Throws std::invalid_argument if either stream is not time-sorted.
std::vector<Coincidence> match_coincidences(std::span<const TimeTag> alice, std::span<const TimeTag> bob,
                                            double tau_s, double offset_s);

struct MeasuredMetrics {
    std::size_t coincidences = 0;
    std::size_t sifted = 0;
    std::size_t errors = 0;
    double coincidence_rate_cps = 0.0;
    double coincidence_rate_sigma = 0.0;
    std::optional<double> qber;  ///< empty when nothing survives sifting
    double qber_sigma = 0.0;
    std::optional<double> visibility;
    double visibility_sigma = 0.0;
};

MeasuredMetrics estimate_metrics(std::span<const Coincidence> matches, std::span<const TimeTag> alice,
                                 std::span<const TimeTag> bob, double duration_s);

struct ClockRecoveryOptions {
    double bin_s = 1e-9;
    double block_s = 0.1;
    double max_offset_s = 50e-6;  ///< lag search range (+/-)
    double min_significance = 10.0;  ///< floor sigmas; the peak is a maximum over many lags
};

struct BlockOffset {
    double block_start_s = 0.0;
    double offset_s = 0.0;
    double peak_counts = 0.0;
    double significance = 0.0;  ///< (peak - floor mean) / floor sigma
    bool locked = false;
};

/// Per block of Alice time, the Bob-minus-Alice offset at the peak of the
/// cross-correlation of the two binned streams, refined by a three-point
/// parabola. locked is false when the peak is below min_significance.
std::vector<BlockOffset> recover_clock_offset(std::span<const TimeTag> alice, std::span<const TimeTag> bob,
                                              const ClockRecoveryOptions& options = {});

}  // namespace qkdsim
