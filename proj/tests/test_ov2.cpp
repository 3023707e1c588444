#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "doctest.h"
#include "ttkit/ov2.hpp"

using namespace ttkit;

namespace {

// 53-byte favourite recovered from a real device: a simple POI in Gouda.
const std::vector<std::uint8_t> kGoudaRecord = [] {
    std::vector<std::uint8_t> bytes = {
        0x02,                          // simple POI
        0x35, 0x00, 0x00, 0x00,        // total length 53
        0xC2, 0x33, 0x07, 0x00,        // lon 472002
        0x4F, 0x60, 0x4F, 0x00,        // lat 5201999
    };
    const char* name = "Ridder Dirkstraat - Sophiastraat, Gouda";
    for (const char* p = name; *p != '\0'; ++p) bytes.push_back(static_cast<std::uint8_t>(*p));
    bytes.push_back(0x00);
    return bytes;
}();

std::string random_name(std::mt19937_64& rng) {
    static constexpr char kChars[] =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789 ,.-'";
    std::string name(1 + rng() % 40, ' ');
    for (char& c : name) c = kChars[rng() % (sizeof kChars - 1)];
    return name;
}

}  // namespace

TEST_CASE("the recovered favourite record parses field for field") {
    const Ov2File file = parse_ov2(kGoudaRecord);
    CHECK(file.header.empty());
    REQUIRE(file.records.size() == 1);
    const Ov2Record& rec = file.records[0];
    CHECK(rec.kind == Ov2Kind::SimplePoi);
    CHECK(rec.total_len == 53);
    CHECK(rec.pos.lon.value == 472002);
    CHECK(rec.pos.lat.value == 5201999);
    CHECK(rec.name == "Ridder Dirkstraat - Sophiastraat, Gouda");
    CHECK(file.source_offsets == std::vector<std::uint64_t>{0});

    CHECK(serialize_record(rec) == kGoudaRecord);
    CHECK(serialize_ov2(file) == kGoudaRecord);
}

TEST_CASE("the scale of the stored coordinates places the record in Gouda") {
    // Independent plausibility anchor: the named street exists in Gouda,
    // whose WGS84 box is roughly lon [4.6, 4.8], lat [51.9, 52.1]. Only the
    // 1e-5 degree scale puts the integers inside it.
    const Ov2File file = parse_ov2(kGoudaRecord);
    const double lon = file.records[0].pos.lon.value / 1e5;
    const double lat = file.records[0].pos.lat.value / 1e5;
    CHECK(lon > 4.6);
    CHECK(lon < 4.8);
    CHECK(lat > 51.9);
    CHECK(lat < 52.1);
}

TEST_CASE("total_len is 13 plus name plus terminator, minimum 14") {
    const Ov2Record poi = make_simple_poi(1, 2, "");
    CHECK(poi.total_len == 14);
    const Ov2Record named = make_simple_poi(1, 2, "abc");
    CHECK(named.total_len == 17);
    const std::vector<std::uint8_t> bytes = serialize_record(named);
    CHECK(bytes.size() == 17);
    CHECK(bytes[0] == 0x02);
    CHECK(bytes[1] == 17);
    CHECK(bytes.back() == 0x00);
}

TEST_CASE("round-trip holds for random record mixes") {
    std::mt19937_64 rng(20260816);
    for (int round = 0; round < 200; ++round) {
        Ov2File file;
        const std::size_t count = 1 + rng() % 12;
        for (std::size_t i = 0; i < count; ++i) {
            switch (rng() % 4) {
                case 0: {
                    Ov2Record skipper;
                    skipper.kind = Ov2Kind::Skipper;
                    skipper.total_len = 21 + rng() % 4096;  // span, kept verbatim
                    skipper.bbox_min = GeoPoint{{static_cast<std::int32_t>(rng() % 100000)},
                                                {static_cast<std::int32_t>(rng() % 100000)}};
                    skipper.bbox_max = GeoPoint{{static_cast<std::int32_t>(rng() % 100000)},
                                                {static_cast<std::int32_t>(rng() % 100000)}};
                    file.records.push_back(std::move(skipper));
                    break;
                }
                case 1: {
                    Ov2Record deleted;
                    deleted.kind = Ov2Kind::Deleted;
                    deleted.payload.resize(rng() % 32);
                    for (auto& b : deleted.payload) b = static_cast<std::uint8_t>(rng());
                    deleted.total_len = 5 + static_cast<std::uint32_t>(deleted.payload.size());
                    file.records.push_back(std::move(deleted));
                    break;
                }
                case 2: {
                    Ov2Record extended;
                    extended.kind = Ov2Kind::ExtendedPoi;
                    extended.payload.resize(rng() % 64);
                    for (auto& b : extended.payload) b = static_cast<std::uint8_t>(rng());
                    extended.total_len = 5 + static_cast<std::uint32_t>(extended.payload.size());
                    file.records.push_back(std::move(extended));
                    break;
                }
                default: {
                    const auto lon = static_cast<std::int32_t>(
                        static_cast<std::int64_t>(rng() % 36'000'001) - 18'000'000);
                    const auto lat = static_cast<std::int32_t>(
                        static_cast<std::int64_t>(rng() % 18'000'001) - 9'000'000);
                    file.records.push_back(make_simple_poi(lon, lat, random_name(rng)));
                    break;
                }
            }
        }
        const std::vector<std::uint8_t> bytes = serialize_ov2(file);
        const Ov2File parsed = parse_ov2(bytes);
        REQUIRE(parsed.records.size() == file.records.size());
        CHECK(parsed.records == file.records);
        CHECK(serialize_ov2(parsed) == bytes);
    }
}

TEST_CASE("strict parsing pins the failure offset") {
    CHECK_THROWS_AS(parse_ov2({}), EmptyInput);

    SUBCASE("truncated record") {
        std::vector<std::uint8_t> bytes = kGoudaRecord;
        bytes.resize(20);
        try {
            parse_ov2(bytes);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            // The offset names the field that failed: the length field at
            // byte 1 claims more data than the input holds.
            CHECK(e.offset() == 1);
        }
    }
    SUBCASE("record length below the minimum") {
        std::vector<std::uint8_t> bytes = {0x02, 0x05, 0x00, 0x00, 0x00};
        CHECK_THROWS_AS(parse_ov2(bytes), ParseError);
    }
    SUBCASE("trailing garbage after a valid record") {
        std::vector<std::uint8_t> bytes = kGoudaRecord;
        bytes.push_back(0xFF);
        try {
            parse_ov2(bytes);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.offset() == kGoudaRecord.size());
        }
    }
}

TEST_CASE("tolerant parsing resynchronizes and reports gaps") {
    std::vector<std::uint8_t> bytes = {0xDE, 0xAD, 0xBE};  // junk prefix
    const std::size_t junk = bytes.size();
    bytes.insert(bytes.end(), kGoudaRecord.begin(), kGoudaRecord.end());

    Ov2ParseOptions options;
    options.strictness = Strictness::Tolerant;
    const Ov2File file = parse_ov2(bytes, options);
    REQUIRE(file.records.size() == 1);
    CHECK(file.records[0].name == "Ridder Dirkstraat - Sophiastraat, Gouda");
    REQUIRE(file.gaps.size() == 1);
    CHECK(file.gaps[0].offset == 0);
    CHECK(file.gaps[0].bytes.size() == junk);
    CHECK(file.source_offsets == std::vector<std::uint64_t>{junk});
}

TEST_CASE("header profiles explain undecodable magic prefixes") {
    std::vector<std::uint8_t> bytes = {0xAA, 0xBB, 0xCC, 0xDD, 0xEE, 0xFF, 0x10, 0x20};
    const std::vector<std::uint8_t> header = bytes;
    bytes.insert(bytes.end(), kGoudaRecord.begin(), kGoudaRecord.end());

    Ov2ParseOptions options;
    options.header_profiles = {4, 8};  // second profile matches
    const Ov2File file = parse_ov2(bytes, options);
    CHECK(file.header == header);
    REQUIRE(file.records.size() == 1);
    CHECK(file.records[0].total_len == 53);
    CHECK(serialize_ov2(file) == bytes);
}

TEST_CASE("the structural validator accepts real records and rejects noise") {
    const PoiVerdict good = validate_simple_poi(kGoudaRecord);
    CHECK(good.valid);
    CHECK(good.total_len == 53);

    SUBCASE("wrong type byte") {
        std::vector<std::uint8_t> bytes = kGoudaRecord;
        bytes[0] = 0x03;
        CHECK_FALSE(validate_simple_poi(bytes).valid);
    }
    SUBCASE("length below minimum") {
        std::vector<std::uint8_t> bytes = kGoudaRecord;
        bytes[1] = 13;
        CHECK_FALSE(validate_simple_poi(bytes).valid);
    }
    SUBCASE("length beyond the cap") {
        std::vector<std::uint8_t> bytes = kGoudaRecord;
        CHECK_FALSE(validate_simple_poi(bytes, 52).valid);
    }
    SUBCASE("window shorter than the record") {
        CHECK_FALSE(
            validate_simple_poi(std::span(kGoudaRecord.data(), kGoudaRecord.size() - 1)).valid);
    }
    SUBCASE("coordinate out of range") {
        std::vector<std::uint8_t> bytes = serialize_record(make_simple_poi(0, 0, "x"));
        bytes[9] = 0xFF;  // lat low byte -> far out of range
        bytes[10] = 0xFF;
        bytes[11] = 0xFF;
        bytes[12] = 0x7F;
        CHECK_FALSE(validate_simple_poi(bytes).valid);
    }
    SUBCASE("control byte inside the name") {
        std::vector<std::uint8_t> bytes = kGoudaRecord;
        bytes[14] = 0x01;
        CHECK_FALSE(validate_simple_poi(bytes).valid);
    }
    SUBCASE("missing terminator") {
        std::vector<std::uint8_t> bytes = kGoudaRecord;
        bytes.back() = 'x';
        CHECK_FALSE(validate_simple_poi(bytes).valid);
    }
}

TEST_CASE("the builder rejects invalid favourites") {
    CHECK_THROWS_AS(make_simple_poi(18'000'001, 0, "x"), ValidationError);
    CHECK_THROWS_AS(make_simple_poi(0, -9'000'001, "x"), ValidationError);
    CHECK_THROWS_AS(make_simple_poi(0, 0, std::string("a\0b", 3)), ValidationError);
}
