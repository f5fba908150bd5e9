// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qkdsim/event_sim.hpp"

namespace qkdsim {

struct BitsPerEvent {
    double exact = 0.0;     ///< log2(horizon / dt) + 2
    int byte_aligned = 0;   ///< exact rounded up to a multiple of 8
};

/// Requires horizon_s >= delta_t_s > 0.
BitsPerEvent bits_per_event(double horizon_s, double delta_t_s);

/// Bytes per second for a stream of fixed-size event records.
double stream_rate_bytes(double event_rate_cps, double bits_per_event);

struct PassVolume {
    double per_experiment_bytes = 0.0;
    double per_day_bytes = 0.0;
};

PassVolume pass_volume(double duration_s, double rate_bytes_s, double passes_per_day);

double housekeeping_volume(int n_channels, int bytes_per_value, double sample_rate_hz, double duration_s);

/// One quantized event. ticks counts delta_t from the stream epoch.
struct TimeTagRecord {
    std::uint64_t ticks = 0;
    std::uint8_t basis = 0;
    std::uint8_t outcome = 0;

    friend bool operator==(const TimeTagRecord&, const TimeTagRecord&) = default;
};

enum class StampMode : std::uint8_t { absolute = 0, relative = 1 };

// File layout, little-endian throughout:
//   header (16 bytes): "NQTT" | u16 version | u64 delta_t in fs | u8 mode | u8 pad
//   absolute record (8 bytes): ticks << 2 | basis << 1 | outcome, ticks < 2^62
//   relative record (6 bytes): delta << 2 | basis << 1 | outcome, delta < 2^46 - 1
//   escape: a relative record with every bit set, then one absolute record
// In relative mode the first event is an absolute record; each later one is
// stamped against the previous event.
inline constexpr std::uint16_t kTimeTagFormatVersion = 1;
inline constexpr std::size_t kTimeTagHeaderBytes = 16;
inline constexpr int kAbsoluteTickBits = 62;
inline constexpr int kRelativeDeltaBits = 46;

struct EncodeOptions {
    /// When false, a gap that does not fit the delta field is a CodecError.
    bool escape_on_overflow = true;
};

/// Round each timestamp to the nearest tick. Throws CodecError on negative
/// times or tick counts beyond 62 bits.
std::vector<TimeTagRecord> quantize(std::span<const TimeTag> tags, double delta_t_s);

/// Inverse of quantize up to one half tick.
std::vector<TimeTag> dequantize(std::span<const TimeTagRecord> records, double delta_t_s);

/// Records must be sorted by ticks. An empty input encodes to an empty buffer.
std::vector<std::uint8_t> encode_stream(std::span<const TimeTagRecord> records, double delta_t_s, StampMode mode,
                                        const EncodeOptions& options = {});

struct DecodedStream {
    double delta_t_s = 0.0;
    StampMode mode = StampMode::absolute;
    std::vector<TimeTagRecord> records;
};

/// Throws CodecError on a bad header or truncated payload.
DecodedStream decode_stream(std::span<const std::uint8_t> bytes);

void write_time_tag_file(const std::string& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_time_tag_file(const std::string& path);

}  // namespace qkdsim
