// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qkdsim/data_budget.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "qkdsim/errors.hpp"

namespace qkdsim {

namespace {

constexpr std::uint64_t kTickLimit = std::uint64_t{1} << kAbsoluteTickBits;
constexpr std::uint64_t kDeltaEscape = (std::uint64_t{1} << kRelativeDeltaBits) - 1;
constexpr std::uint64_t kRelativeAllOnes = (std::uint64_t{1} << 48) - 1;
constexpr char kMagic[4] = {'N', 'Q', 'T', 'T'};

void put_le(std::vector<std::uint8_t>& out, std::uint64_t value, int bytes) {
    for (int i = 0; i < bytes; ++i) {
        out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
    }
}

std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t pos, int bytes) {
    std::uint64_t value = 0;
    for (int i = 0; i < bytes; ++i) {
        value |= std::uint64_t{in[pos + static_cast<std::size_t>(i)]} << (8 * i);
    }
    return value;
}

std::uint64_t flags(const TimeTagRecord& r) {
    return (std::uint64_t{r.basis & 1U} << 1) | std::uint64_t{r.outcome & 1U};
}

TimeTagRecord unpack(std::uint64_t word, std::uint64_t ticks) {
    return {ticks, static_cast<std::uint8_t>((word >> 1) & 1U), static_cast<std::uint8_t>(word & 1U)};
}

std::uint64_t delta_t_fs(double delta_t_s) {
    const double fs = std::round(delta_t_s * 1e15);
    if (!(fs >= 1.0 && fs < 1.8e19)) {
        throw CodecError("time resolution must be between 1 fs and ~5 h");
    }
    return static_cast<std::uint64_t>(fs);
}

}  // namespace

BitsPerEvent bits_per_event(double horizon_s, double delta_t_s) {
    if (!(delta_t_s > 0.0 && horizon_s >= delta_t_s)) {
        throw DomainError("bits_per_event requires horizon >= delta_t > 0");
    }
    BitsPerEvent b;
    b.exact = std::log2(horizon_s / delta_t_s) + 2.0;
    b.byte_aligned = static_cast<int>(std::ceil(b.exact / 8.0 - 1e-12)) * 8;
    return b;
}

double stream_rate_bytes(double event_rate_cps, double bits_per_event) { return event_rate_cps * bits_per_event / 8.0; }

PassVolume pass_volume(double duration_s, double rate_bytes_s, double passes_per_day) {
    PassVolume v;
    v.per_experiment_bytes = duration_s * rate_bytes_s;
    v.per_day_bytes = v.per_experiment_bytes * passes_per_day;
    return v;
}

double housekeeping_volume(int n_channels, int bytes_per_value, double sample_rate_hz, double duration_s) {
    return static_cast<double>(n_channels) * bytes_per_value * sample_rate_hz * duration_s;
}

std::vector<TimeTagRecord> quantize(std::span<const TimeTag> tags, double delta_t_s) {
    if (!(delta_t_s > 0.0)) {
        throw CodecError("time resolution must be positive");
    }
    std::vector<TimeTagRecord> out;
    out.reserve(tags.size());
    for (const TimeTag& t : tags) {
        const double ticks = std::round(t.time_s / delta_t_s);
        if (!(ticks >= 0.0) || ticks >= static_cast<double>(kTickLimit)) {
            throw CodecError("timestamp " + std::to_string(t.time_s) + " s does not fit a 62-bit tick count");
        }
        out.push_back({static_cast<std::uint64_t>(ticks), static_cast<std::uint8_t>(t.basis), t.outcome});
    }
    return out;
}

std::vector<TimeTag> dequantize(std::span<const TimeTagRecord> records, double delta_t_s) {
    std::vector<TimeTag> out;
    out.reserve(records.size());
    for (const TimeTagRecord& r : records) {
        out.push_back({static_cast<double>(r.ticks) * delta_t_s, static_cast<Basis>(r.basis & 1U), r.outcome});
    }
    return out;
}

std::vector<std::uint8_t> encode_stream(std::span<const TimeTagRecord> records, double delta_t_s, StampMode mode,
                                        const EncodeOptions& options) {
    std::vector<std::uint8_t> out;
    if (records.empty()) {
        return out;
    }
    const std::uint64_t fs = delta_t_fs(delta_t_s);
    out.reserve(kTimeTagHeaderBytes + records.size() * (mode == StampMode::absolute ? 8 : 6));
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    put_le(out, kTimeTagFormatVersion, 2);
    put_le(out, fs, 8);
    out.push_back(static_cast<std::uint8_t>(mode));
    out.push_back(0);

    auto put_absolute = [&](const TimeTagRecord& r) {
        if (r.ticks >= kTickLimit) {
            throw CodecError("tick count " + std::to_string(r.ticks) + " does not fit 62 bits");
        }
        put_le(out, (r.ticks << 2) | flags(r), 8);
    };

    std::uint64_t previous = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const TimeTagRecord& r = records[i];
        if (i > 0 && r.ticks < previous) {
            throw CodecError("records are not sorted at index " + std::to_string(i));
        }
        if (mode == StampMode::absolute || i == 0) {
            put_absolute(r);
        } else {
            const std::uint64_t gap = r.ticks - previous;
            if (gap < kDeltaEscape) {
                put_le(out, (gap << 2) | flags(r), 6);
            } else if (options.escape_on_overflow) {
                put_le(out, kRelativeAllOnes, 6);
                put_absolute(r);
            } else {
                throw CodecError("gap of " + std::to_string(gap) + " ticks before record " + std::to_string(i) +
                                 " overflows the 46-bit delta field");
            }
        }
        previous = r.ticks;
    }
    return out;
}

DecodedStream decode_stream(std::span<const std::uint8_t> bytes) {
    DecodedStream d;
    if (bytes.empty()) {
        return d;
    }
    if (bytes.size() < kTimeTagHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw CodecError("missing NQTT header");
    }
    const auto version = static_cast<std::uint16_t>(get_le(bytes, 4, 2));
    if (version != kTimeTagFormatVersion) {
        throw CodecError("unsupported time-tag format version " + std::to_string(version));
    }
    const std::uint64_t fs = get_le(bytes, 6, 8);
    if (fs == 0) {
        throw CodecError("zero time resolution in header");
    }
    d.delta_t_s = static_cast<double>(fs) * 1e-15;
    const std::uint8_t mode = bytes[14];
    if (mode > 1) {
        throw CodecError("unknown stamp mode " + std::to_string(mode));
    }
    d.mode = static_cast<StampMode>(mode);

    std::size_t pos = kTimeTagHeaderBytes;
    auto need = [&](std::size_t n) {
        if (pos + n > bytes.size()) {
            throw CodecError("truncated record at byte " + std::to_string(pos));
        }
    };
    auto read_absolute = [&] {
        need(8);
        const std::uint64_t word = get_le(bytes, pos, 8);
        pos += 8;
        return unpack(word, word >> 2);
    };

    std::uint64_t previous = 0;
    while (pos < bytes.size()) {
        TimeTagRecord r;
        if (d.mode == StampMode::absolute || d.records.empty()) {
            r = read_absolute();
        } else {
            need(6);
            const std::uint64_t word = get_le(bytes, pos, 6);
            pos += 6;
            if (word == kRelativeAllOnes) {
                r = read_absolute();
            } else {
                r = unpack(word, previous + (word >> 2));
            }
        }
        previous = r.ticks;
        d.records.push_back(r);
    }
    return d;
}

void write_time_tag_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) {
        throw std::runtime_error("write failed: " + path);
    }
}

std::vector<std::uint8_t> read_time_tag_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open " + path);
    }
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace qkdsim
