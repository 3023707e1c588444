#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttkit/errors.hpp"
#include "ttkit/geo_time.hpp"

namespace ttkit {

enum class Ov2Kind : std::uint8_t {
    Deleted = 0,
    Skipper = 1,
    SimplePoi = 2,
    ExtendedPoi = 3,
};

std::string_view to_string(Ov2Kind kind) noexcept;

/// One ov2 record. Which fields are meaningful depends on kind:
///   Deleted      total_len + payload (dead bytes carried verbatim)
///   Skipper      total_len (span length over the skippable block, kept
///                verbatim) + bbox; the record itself is 21 bytes on disk
///   SimplePoi    total_len + pos + name
///   ExtendedPoi  total_len + payload (no published instance; kept opaque)
struct Ov2Record {
    Ov2Kind kind = Ov2Kind::SimplePoi;
    std::uint32_t total_len = 0;

    GeoPoint pos;                       // SimplePoi
    std::string name;                   // SimplePoi, raw bytes without the disk NUL

    GeoPoint bbox_min;                  // Skipper west / south
    GeoPoint bbox_max;                  // Skipper east / north

    std::vector<std::uint8_t> payload;  // Deleted / ExtendedPoi body after type + length

    friend bool operator==(const Ov2Record&, const Ov2Record&) = default;
};

/// Bytes the parser could not decode in tolerant mode, kept for lossless
/// re-emission.
struct Ov2Gap {
    std::uint64_t offset = 0;
    std::vector<std::uint8_t> bytes;

    friend bool operator==(const Ov2Gap&, const Ov2Gap&) = default;
};

struct Ov2File {
    std::vector<std::uint8_t> header;          // leading model-specific bytes, may be empty
    std::vector<Ov2Record> records;
    std::vector<std::uint64_t> source_offsets; // parallel to records
    std::vector<Ov2Gap> gaps;                  // tolerant mode only

    friend bool operator==(const Ov2File&, const Ov2File&) = default;
};

struct Ov2ParseOptions {
    Strictness strictness = Strictness::Strict;
    // Candidate header lengths per device profile, tried in order when offset
    // 0 does not start a valid record. The on-disk magic differs per model and
    // is not decodable, so only the length is configurable.
    std::vector<std::uint32_t> header_profiles;
};

/// Parses a whole ov2 stream. Strict mode requires every byte to belong to the
/// header or a record; tolerant mode turns undecodable runs into gaps and
/// resynchronizes at the next parseable record.
/// Throws EmptyInput on empty input and ParseError (with offset and
/// expected/actual) on the first malformed byte in strict mode.
Ov2File parse_ov2(std::span<const std::uint8_t> bytes, const Ov2ParseOptions& options = {});

/// Serializes one record. Throws ValidationError (with record_index and field)
/// on an invariant violation; `record_index` is the index reported.
std::vector<std::uint8_t> serialize_record(const Ov2Record& record, std::size_t record_index = 0);

/// Re-emits header, records, and gaps. For a file parsed without gaps the
/// result is byte-identical to the original input.
std::vector<std::uint8_t> serialize_ov2(const Ov2File& file);

struct PoiVerdict {
    bool valid = false;
    std::string_view reason;  // empty when valid
    std::uint32_t total_len = 0;
};

/// Structural check the carver applies to a raw byte window: type byte 0x02,
/// plausible total length, coordinate ranges, printable name bytes (ASCII
/// 0x20..0x7E plus >= 0x80 for non-ASCII text), trailing NUL.
PoiVerdict validate_simple_poi(std::span<const std::uint8_t> window,
                               std::uint32_t max_total_len = 1024);

/// Builds a SimplePoi with the total length computed from the name. Throws
/// ValidationError when the record could not survive a serialize/parse round
/// trip (coordinate out of range, NUL inside the name).
Ov2Record make_simple_poi(std::int32_t lon, std::int32_t lat, std::string name);

}  // namespace ttkit
