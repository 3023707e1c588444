#include "ttkit/ov2.hpp"

#include <algorithm>
#include <cstdio>

#include "ttkit/endian.hpp"

namespace ttkit {
namespace {

constexpr std::size_t kSimplePoiMin = 14;   // type + len + lon + lat + NUL
constexpr std::size_t kSkipperSize = 21;    // type + len + 4 bbox coordinates
constexpr std::size_t kOpaqueMin = 5;       // type + len

std::string hex_byte(std::uint8_t b) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "0x%02X", b);
    return buf;
}

struct RecordParse {
    Ov2Record record;
    std::size_t consumed = 0;
};

void check_axis(std::int64_t value, Axis axis, std::uint64_t offset) {
    if (!CoordinateE5::in_range(value, axis)) {
        const std::int32_t limit = axis == Axis::Lon ? CoordinateE5::kLonLimit
                                                     : CoordinateE5::kLatLimit;
        throw ParseError(std::string(to_string(axis)) + " out of range", offset,
                         "value in [-" + std::to_string(limit) + ", " + std::to_string(limit) + "]",
                         std::to_string(value));
    }
}

// Parses one record starting at `offset`. Throws ParseError on any malformed
// byte; never reads past bytes.size().
RecordParse parse_record_at(std::span<const std::uint8_t> bytes, std::size_t offset) {
    const std::size_t remaining = bytes.size() - offset;
    if (remaining < kOpaqueMin) {
        throw ParseError("record header truncated", offset,
                         "at least 5 bytes", std::to_string(remaining) + " bytes left");
    }
    const std::uint8_t type = bytes[offset];
    const std::uint32_t total_len = load_u32le(bytes.data() + offset + 1);

    Ov2Record rec;
    rec.total_len = total_len;
    switch (type) {
        case 0x00:
        case 0x03: {
            rec.kind = type == 0x00 ? Ov2Kind::Deleted : Ov2Kind::ExtendedPoi;
            if (total_len < kOpaqueMin) {
                throw ParseError("record length below minimum", offset + 1,
                                 "total length >= 5", std::to_string(total_len));
            }
            if (total_len > remaining) {
                throw ParseError("record runs past end of input", offset + 1,
                                 "total length <= " + std::to_string(remaining),
                                 std::to_string(total_len));
            }
            rec.payload.assign(bytes.begin() + offset + kOpaqueMin,
                               bytes.begin() + offset + total_len);
            return {std::move(rec), total_len};
        }
        case 0x01: {
            // The length field of a skipper spans the block it covers; the
            // record itself is always 21 bytes.
            rec.kind = Ov2Kind::Skipper;
            if (remaining < kSkipperSize) {
                throw ParseError("skipper truncated", offset,
                                 "21 bytes", std::to_string(remaining) + " bytes left");
            }
            if (total_len < kSkipperSize) {
                throw ParseError("skipper span below record size", offset + 1,
                                 "span >= 21", std::to_string(total_len));
            }
            const std::uint8_t* p = bytes.data() + offset + 5;
            rec.bbox_min.lon.value = load_i32le(p);
            rec.bbox_min.lat.value = load_i32le(p + 4);
            rec.bbox_max.lon.value = load_i32le(p + 8);
            rec.bbox_max.lat.value = load_i32le(p + 12);
            check_axis(rec.bbox_min.lon.value, Axis::Lon, offset + 5);
            check_axis(rec.bbox_min.lat.value, Axis::Lat, offset + 9);
            check_axis(rec.bbox_max.lon.value, Axis::Lon, offset + 13);
            check_axis(rec.bbox_max.lat.value, Axis::Lat, offset + 17);
            return {std::move(rec), kSkipperSize};
        }
        case 0x02: {
            rec.kind = Ov2Kind::SimplePoi;
            if (remaining < kSimplePoiMin) {
                throw ParseError("record truncated", offset,
                                 "at least 14 bytes", std::to_string(remaining) + " bytes left");
            }
            if (total_len < kSimplePoiMin) {
                throw ParseError("record length below minimum", offset + 1,
                                 "total length >= 14", std::to_string(total_len));
            }
            if (total_len > remaining) {
                throw ParseError("record runs past end of input", offset + 1,
                                 "total length <= " + std::to_string(remaining),
                                 std::to_string(total_len));
            }
            const std::uint8_t* p = bytes.data() + offset + 5;
            rec.pos.lon.value = load_i32le(p);
            rec.pos.lat.value = load_i32le(p + 4);
            check_axis(rec.pos.lon.value, Axis::Lon, offset + 5);
            check_axis(rec.pos.lat.value, Axis::Lat, offset + 9);
            const std::size_t name_end = offset + total_len - 1;
            for (std::size_t i = offset + 13; i < name_end; ++i) {
                if (bytes[i] == 0x00) {
                    throw ParseError("NUL inside name", i, "non-NUL name byte", "0x00");
                }
            }
            if (bytes[name_end] != 0x00) {
                throw ParseError("missing name terminator", name_end,
                                 "0x00", hex_byte(bytes[name_end]));
            }
            rec.name.assign(bytes.begin() + offset + 13, bytes.begin() + name_end);
            return {std::move(rec), total_len};
        }
        default:
            throw ParseError("unknown record type", offset, "type byte 0x00..0x03",
                             hex_byte(type));
    }
}

bool starts_valid_record(std::span<const std::uint8_t> bytes, std::size_t offset) noexcept {
    try {
        parse_record_at(bytes, offset);
        return true;
    } catch (const ParseError&) {
        return false;
    }
}

void validate_record(const Ov2Record& rec, std::size_t index) {
    auto axis_ok = [](const CoordinateE5& c, Axis axis) {
        return CoordinateE5::in_range(c.value, axis);
    };
    switch (rec.kind) {
        case Ov2Kind::Deleted:
        case Ov2Kind::ExtendedPoi:
            if (rec.total_len != kOpaqueMin + rec.payload.size()) {
                throw ValidationError("total length does not cover the payload",
                                      index, "total_len");
            }
            return;
        case Ov2Kind::Skipper:
            if (rec.total_len < kSkipperSize) {
                throw ValidationError("skipper span below record size", index, "total_len");
            }
            if (!axis_ok(rec.bbox_min.lon, Axis::Lon) || !axis_ok(rec.bbox_max.lon, Axis::Lon)) {
                throw ValidationError("bounding box longitude out of range", index, "bbox");
            }
            if (!axis_ok(rec.bbox_min.lat, Axis::Lat) || !axis_ok(rec.bbox_max.lat, Axis::Lat)) {
                throw ValidationError("bounding box latitude out of range", index, "bbox");
            }
            return;
        case Ov2Kind::SimplePoi: {
            if (rec.name.find('\0') != std::string::npos) {
                throw ValidationError("NUL inside name", index, "name");
            }
            if (rec.total_len != 13 + rec.name.size() + 1) {
                throw ValidationError("total length does not match name", index, "total_len");
            }
            if (!axis_ok(rec.pos.lon, Axis::Lon)) {
                throw ValidationError("longitude out of range", index, "pos.lon");
            }
            if (!axis_ok(rec.pos.lat, Axis::Lat)) {
                throw ValidationError("latitude out of range", index, "pos.lat");
            }
            return;
        }
    }
    throw ValidationError("unknown record kind", index, "kind");
}

}  // namespace

std::string_view to_string(Ov2Kind kind) noexcept {
    switch (kind) {
        case Ov2Kind::Deleted: return "deleted";
        case Ov2Kind::Skipper: return "skipper";
        case Ov2Kind::SimplePoi: return "simple_poi";
        case Ov2Kind::ExtendedPoi: return "extended_poi";
    }
    return "unknown";
}

Ov2File parse_ov2(std::span<const std::uint8_t> bytes, const Ov2ParseOptions& options) {
    if (bytes.empty()) {
        throw EmptyInput();
    }

    Ov2File out;
    std::size_t pos = 0;
    if (!starts_valid_record(bytes, 0)) {
        for (const std::uint32_t len : options.header_profiles) {
            if (len > 0 && len < bytes.size() && starts_valid_record(bytes, len)) {
                out.header.assign(bytes.begin(), bytes.begin() + len);
                pos = len;
                break;
            }
        }
    }

    std::size_t gap_start = 0;
    bool in_gap = false;
    while (pos < bytes.size()) {
        try {
            RecordParse parsed = parse_record_at(bytes, pos);
            if (in_gap) {
                out.gaps.push_back({gap_start,
                                    {bytes.begin() + gap_start, bytes.begin() + pos}});
                in_gap = false;
            }
            out.source_offsets.push_back(pos);
            out.records.push_back(std::move(parsed.record));
            pos += parsed.consumed;
        } catch (const ParseError&) {
            if (options.strictness == Strictness::Strict) {
                throw;
            }
            if (!in_gap) {
                gap_start = pos;
                in_gap = true;
            }
            ++pos;
        }
    }
    if (in_gap) {
        out.gaps.push_back({gap_start, {bytes.begin() + gap_start, bytes.end()}});
    }
    return out;
}

std::vector<std::uint8_t> serialize_record(const Ov2Record& record, std::size_t record_index) {
    validate_record(record, record_index);
    std::vector<std::uint8_t> out;
    out.reserve(record.kind == Ov2Kind::Skipper ? kSkipperSize : record.total_len);
    out.push_back(static_cast<std::uint8_t>(record.kind));
    store_u32le(out, record.total_len);
    switch (record.kind) {
        case Ov2Kind::Deleted:
        case Ov2Kind::ExtendedPoi:
            out.insert(out.end(), record.payload.begin(), record.payload.end());
            break;
        case Ov2Kind::Skipper:
            store_i32le(out, record.bbox_min.lon.value);
            store_i32le(out, record.bbox_min.lat.value);
            store_i32le(out, record.bbox_max.lon.value);
            store_i32le(out, record.bbox_max.lat.value);
            break;
        case Ov2Kind::SimplePoi:
            store_i32le(out, record.pos.lon.value);
            store_i32le(out, record.pos.lat.value);
            out.insert(out.end(), record.name.begin(), record.name.end());
            out.push_back(0x00);
            break;
    }
    return out;
}

std::vector<std::uint8_t> serialize_ov2(const Ov2File& file) {
    struct Span {
        std::uint64_t offset;
        std::uint64_t seq;
        std::vector<std::uint8_t> bytes;
    };
    std::vector<Span> spans;
    spans.reserve(file.records.size() + file.gaps.size());
    std::uint64_t seq = 0;
    for (std::size_t i = 0; i < file.records.size(); ++i) {
        const std::uint64_t offset =
            i < file.source_offsets.size() ? file.source_offsets[i] : 0;
        spans.push_back({offset, seq++, serialize_record(file.records[i], i)});
    }
    for (const Ov2Gap& gap : file.gaps) {
        spans.push_back({gap.offset, seq++, gap.bytes});
    }
    std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
        return a.offset != b.offset ? a.offset < b.offset : a.seq < b.seq;
    });

    std::vector<std::uint8_t> out = file.header;
    for (const Span& span : spans) {
        out.insert(out.end(), span.bytes.begin(), span.bytes.end());
    }
    return out;
}

PoiVerdict validate_simple_poi(std::span<const std::uint8_t> window,
                               std::uint32_t max_total_len) {
    if (window.size() < kSimplePoiMin) {
        return {false, "window too short", 0};
    }
    if (window[0] != 0x02) {
        return {false, "type byte", 0};
    }
    const std::uint32_t total = load_u32le(window.data() + 1);
    if (total < kSimplePoiMin || total > max_total_len) {
        return {false, "total length", total};
    }
    if (total > window.size()) {
        return {false, "truncated", total};
    }
    if (!CoordinateE5::in_range(load_i32le(window.data() + 5), Axis::Lon)) {
        return {false, "longitude range", total};
    }
    if (!CoordinateE5::in_range(load_i32le(window.data() + 9), Axis::Lat)) {
        return {false, "latitude range", total};
    }
    for (std::uint32_t i = 13; i < total - 1; ++i) {
        const std::uint8_t b = window[i];
        if (b < 0x20 || b == 0x7F) {
            return {false, "name byte", total};
        }
    }
    if (window[total - 1] != 0x00) {
        return {false, "terminator", total};
    }
    return {true, {}, total};
}

Ov2Record make_simple_poi(std::int32_t lon, std::int32_t lat, std::string name) {
    Ov2Record rec;
    rec.kind = Ov2Kind::SimplePoi;
    rec.pos.lon.value = lon;
    rec.pos.lat.value = lat;
    rec.total_len = static_cast<std::uint32_t>(13 + name.size() + 1);
    rec.name = std::move(name);
    validate_record(rec, 0);
    return rec;
}

}  // namespace ttkit
