// Copyright 2026 The qkdsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "qkdsim/data_budget.hpp"
#include "qkdsim/errors.hpp"

using namespace qkdsim;

namespace {

std::vector<TimeTagRecord> random_records(std::size_t n, std::uint64_t seed, std::uint64_t max_gap) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> gap(0, max_gap);
    std::vector<TimeTagRecord> out(n);
    std::uint64_t t = gap(rng);
    for (auto& r : out) {
        t += gap(rng);
        r.ticks = t;
        r.basis = static_cast<std::uint8_t>(rng() & 1U);
        r.outcome = static_cast<std::uint8_t>((rng() >> 1) & 1U);
    }
    return out;
}

}  // namespace

TEST_CASE("bits per event") {
    const BitsPerEvent b = bits_per_event(0.5 * 365.25 * 86400.0, 25e-12);
    CHECK(b.exact == doctest::Approx(std::log2(0.5 * 365.25 * 86400.0 / 25e-12) + 2.0));
    CHECK(b.exact == doctest::Approx(61.13).epsilon(1e-4));
    CHECK(b.byte_aligned == 64);
    // h equal to delta_t leaves only the two flag bits.
    CHECK(bits_per_event(1e-9, 1e-9).exact == 2.0);
    CHECK(bits_per_event(1e-9, 1e-9).byte_aligned == 8);
    CHECK(bits_per_event(64.0, 1.0).byte_aligned == 8);
    CHECK_THROWS_AS(bits_per_event(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(bits_per_event(1e-12, 1e-9), DomainError);
}

TEST_CASE("volumes") {
    const double rate = stream_rate_bytes(1e4, 64);
    CHECK(rate == 8e4);
    const PassVolume v = pass_volume(300.0, rate, 3.0);
    CHECK(v.per_experiment_bytes == 2.4e7);
    CHECK(v.per_day_bytes == 7.2e7);
    CHECK(housekeeping_volume(64, 2, 1.0, 86400.0) == 11059200.0);
}

TEST_CASE("quantize rounds to the nearest tick") {
    const std::vector<TimeTag> tags = {{0.0, Basis::hv, 0}, {1.26e-9, Basis::da, 1}, {1.24e-9, Basis::hv, 1}};
    const auto r = quantize(tags, 25e-12);
    CHECK(r[0].ticks == 0);
    CHECK(r[1].ticks == 50);
    CHECK(r[1].basis == 1);
    CHECK(r[1].outcome == 1);
    CHECK(r[2].ticks == 50);
    const auto back = dequantize(r, 25e-12);
    CHECK(std::abs(back[1].time_s - 1.26e-9) <= 12.5e-12);

    const std::vector<TimeTag> negative = {{-1.0, Basis::hv, 0}};
    CHECK_THROWS_AS(quantize(negative, 25e-12), CodecError);
    const std::vector<TimeTag> huge = {{1e9, Basis::hv, 0}};
    CHECK_THROWS_AS(quantize(huge, 1e-12), CodecError);
}

TEST_CASE("header layout") {
    const std::vector<TimeTagRecord> r = {{5, 1, 0}};
    const auto bytes = encode_stream(r, 25e-12, StampMode::relative);
    REQUIRE(bytes.size() == kTimeTagHeaderBytes + 8);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "NQTT");
    CHECK(bytes[4] == 1);
    CHECK(bytes[5] == 0);
    CHECK(bytes[6] == (25000 & 0xff));
    CHECK(bytes[7] == (25000 >> 8));
    CHECK(bytes[14] == 1);
    // ticks << 2 | basis << 1 | outcome, little-endian
    CHECK(bytes[16] == ((5 << 2) | 2));
}

TEST_CASE("round trip of a million random events in both modes") {
    const auto records = random_records(1000000, 7, 40000);
    for (StampMode mode : {StampMode::absolute, StampMode::relative}) {
        const auto bytes = encode_stream(records, 25e-12, mode);
        const DecodedStream d = decode_stream(bytes);
        CHECK(d.mode == mode);
        CHECK(d.delta_t_s == doctest::Approx(25e-12));
        CHECK(d.records == records);
    }
}

TEST_CASE("relative stamps are a quarter smaller") {
    const auto records = random_records(100000, 11, 1u << 20);
    const auto abs_bytes = encode_stream(records, 25e-12, StampMode::absolute).size();
    const auto rel_bytes = encode_stream(records, 25e-12, StampMode::relative).size();
    CHECK(abs_bytes == kTimeTagHeaderBytes + 8 * records.size());
    CHECK(rel_bytes == kTimeTagHeaderBytes + 8 + 6 * (records.size() - 1));
    const double payload_saving = 1.0 - static_cast<double>(rel_bytes - kTimeTagHeaderBytes) /
                                            static_cast<double>(abs_bytes - kTimeTagHeaderBytes);
    CHECK(payload_saving == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("oversized gaps escape to an absolute record") {
    const std::uint64_t big = std::uint64_t{1} << 50;
    const std::vector<TimeTagRecord> r = {{1, 0, 1}, {2, 1, 1}, {2 + big, 1, 0}, {3 + big, 0, 0}};
    const auto bytes = encode_stream(r, 1e-12, StampMode::relative);
    CHECK(bytes.size() == kTimeTagHeaderBytes + 8 + 6 + (6 + 8) + 6);
    CHECK(decode_stream(bytes).records == r);

    EncodeOptions strict;
    strict.escape_on_overflow = false;
    CHECK_THROWS_AS(encode_stream(r, 1e-12, StampMode::relative, strict), CodecError);
}

TEST_CASE("largest plain delta does not collide with the escape word") {
    const std::uint64_t max_delta = (std::uint64_t{1} << kRelativeDeltaBits) - 2;
    const std::vector<TimeTagRecord> r = {{0, 1, 1}, {max_delta, 1, 1}};
    const auto bytes = encode_stream(r, 1e-12, StampMode::relative);
    CHECK(bytes.size() == kTimeTagHeaderBytes + 8 + 6);
    CHECK(decode_stream(bytes).records == r);
}

TEST_CASE("empty and malformed input") {
    CHECK(encode_stream({}, 25e-12, StampMode::relative).empty());
    CHECK(decode_stream({}).records.empty());

    const std::vector<TimeTagRecord> r = {{1, 0, 0}, {2, 0, 0}};
    auto bytes = encode_stream(r, 25e-12, StampMode::relative);
    auto truncated = bytes;
    truncated.pop_back();
    CHECK_THROWS_AS(decode_stream(truncated), CodecError);
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(decode_stream(bad_magic), CodecError);
    auto bad_version = bytes;
    bad_version[4] = 9;
    CHECK_THROWS_AS(decode_stream(bad_version), CodecError);
    auto bad_mode = bytes;
    bad_mode[14] = 7;
    CHECK_THROWS_AS(decode_stream(bad_mode), CodecError);

    const std::vector<TimeTagRecord> unsorted = {{5, 0, 0}, {4, 0, 0}};
    CHECK_THROWS_AS(encode_stream(unsorted, 25e-12, StampMode::absolute), CodecError);
}

TEST_CASE("file round trip") {
    const auto records = random_records(1000, 3, 100);
    const auto bytes = encode_stream(records, 25e-12, StampMode::relative);
    const auto path = std::filesystem::temp_directory_path() / "qkdsim_test_tags.nqtt";
    write_time_tag_file(path.string(), bytes);
    CHECK(read_time_tag_file(path.string()) == bytes);
    std::filesystem::remove(path);
    CHECK_THROWS(read_time_tag_file((path.parent_path() / "missing_dir" / "x.nqtt").string()));
}
