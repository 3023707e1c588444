#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "store_vectors.hpp"
#include "ttkit/settings_xml.hpp"

using namespace ttkit;

TEST_CASE("key paths split into name and five-digit index per segment") {
    const KeyPath path = parse_key_path(
        "MapSettings*00000*/AddressRecents*00000*/AddressRecents_Address*00023*/"
        "Location_Line*00023*/LineRec_MaxSpeed*00023*");
    REQUIRE(path.segments.size() == 5);
    CHECK(path.root() == "MapSettings");
    CHECK(path.segments[0] == KeySegment{"MapSettings", 0});
    CHECK(path.segments[2] == KeySegment{"AddressRecents_Address", 23});
    CHECK(path.segments[4] == KeySegment{"LineRec_MaxSpeed", 23});

    const KeyPath scalar = parse_key_path("MapSettings*00000*/NeverAskedDefaultCountry*00000*");
    REQUIRE(scalar.segments.size() == 2);
    CHECK(scalar.segments[1].name == "NeverAskedDefaultCountry");
}

TEST_CASE("malformed key paths are rejected") {
    for (const char* bad : {
             "",
             "MapSettings",                       // no marker
             "MapSettings*0*",                    // marker too short
             "MapSettings*000000*",               // marker too long
             "MapSettings*0000a*",                // marker not decimal
             "MapSettings*00000*/",               // empty trailing segment
             "/MapSettings*00000*",               // empty leading segment
             "MapSettings*00000*x",               // garbage after marker
             "MapSettings*00000*/Leaf",           // unterminated leaf
             "*00000*",                           // empty name
         }) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_key_path(bad), ParseError);
    }
}

TEST_CASE("the recovered store lines parse and decode") {
    const StoreParse parsed = parse_store(testvec::store_text());
    CHECK(parsed.malformed.empty());
    REQUIRE(parsed.entries.size() == testvec::kStoreLines.size());
    for (std::size_t i = 0; i < parsed.entries.size(); ++i) {
        CAPTURE(i);
        CHECK(parsed.entries[i].raw_b64 == testvec::kStoreLines[i].b64);
        CHECK(parsed.entries[i].decoded == testvec::kStoreLines[i].decoded);
        // Shell occupies the first two lines; entries are 1-based.
        CHECK(parsed.entries[i].source_line == i + 3);
    }
}

TEST_CASE("malformed elements are isolated, strict mode throws") {
    std::string text = "<Settings>\n";
    text += "  <string name=\"MapSettings*00000*/Ok*00000*\">MA==</string>\n";
    text += "  <string name=\"MapSettings*00000*/Bad*00000*\">@@@@</string>\n";
    text += "  <string name=\"MapSettings*broken\">MA==</string>\n";
    text += "  <string name=\"MapSettings*00000*/AlsoOk*00000*\">NTEy</string>\n";
    text += "</Settings>\n";

    const StoreParse tolerant = parse_store(text);
    REQUIRE(tolerant.entries.size() == 2);
    CHECK(tolerant.entries[0].decoded == "0");
    CHECK(tolerant.entries[1].decoded == "512");
    REQUIRE(tolerant.malformed.size() == 2);
    CHECK(tolerant.malformed[0].source_line == 3);
    CHECK_FALSE(tolerant.malformed[0].reason.empty());
    CHECK(tolerant.malformed[1].source_line == 4);

    CHECK_THROWS_AS(parse_store(text, Strictness::Strict), ParseError);
}

TEST_CASE("fragments parse without a surrounding document") {
    const StoreParse parsed = parse_store(
        "<string name=\"MapSettings*00000*/NeverAskedDefaultCountry*00000*\">ZmFsc2U=</string>");
    REQUIRE(parsed.entries.size() == 1);
    CHECK(parsed.entries[0].decoded == "false");
}

TEST_CASE("grouping separates the recovered records by index") {
    const StoreParse parsed = parse_store(testvec::store_text());
    const std::vector<RecordGroup> groups = group_records(parsed.entries);

    std::set<std::uint32_t> address_indices;
    for (const RecordGroup& group : groups) {
        if (group.collection == "AddressRecents_Address") {
            address_indices.insert(group.record_index);
        }
    }
    CHECK(address_indices == std::set<std::uint32_t>{2, 13, 21, 23, 25});
    CHECK(address_indices.count(21) == 1);
    CHECK(address_indices.count(23) == 1);
    CHECK(address_indices.count(25) == 1);

    // Every line of the store belongs to exactly one group.
    std::size_t total_fields = 0;
    for (const RecordGroup& group : groups) total_fields += group.fields.size();
    CHECK(total_fields == parsed.entries.size());

    for (const RecordGroup& group : groups) {
        if (group.collection == "AddressRecents_Address" && group.record_index == 23) {
            REQUIRE(group.fields.size() == 1);
            CHECK(group.fields[0].subpath == "Location_Line/LineRec_MaxSpeed");
            CHECK(group.fields[0].value == "0");
        }
        if (group.collection == "NeverAskedDefaultCountry") {
            CHECK(group.value_of("NeverAskedDefaultCountry") == "false");
        }
        if (group.collection == "SafetyCameraWarnings_Warning") {
            CHECK(group.record_index == 7);
            CHECK(group.value_of("SafetyCameraWarnings_Warning_WarningDistance") == "5000");
        }
    }
}

TEST_CASE("grouping is invariant under line permutation") {
    // One 40-field record scattered over the store in random order.
    std::vector<SettingsEntry> entries;
    for (int i = 0; i < 40; ++i) {
        SettingsEntry entry;
        entry.path = parse_key_path(
            "MapSettings*00000*/AddressRecents*00000*/AddressRecents_Address*00005*/"
            "Field" + std::to_string(i) + "*00005*");
        entry.decoded = "value" + std::to_string(i);
        entry.source_line = static_cast<std::size_t>(i) + 1;
        entries.push_back(std::move(entry));
    }

    const std::vector<RecordGroup> reference = group_records(entries);
    REQUIRE(reference.size() == 1);
    CHECK(reference[0].fields.size() == 40);
    CHECK(reference[0].record_index == 5);

    std::mt19937_64 rng(123);
    for (int round = 0; round < 120; ++round) {
        for (std::size_t i = entries.size(); i > 1; --i) {
            std::swap(entries[i - 1], entries[rng() % i]);
        }
        const std::vector<RecordGroup> shuffled = group_records(entries);
        REQUIRE(shuffled.size() == 1);
        CHECK(shuffled[0].fields == reference[0].fields);
        CHECK(shuffled[0].collection == reference[0].collection);
        CHECK(shuffled[0].record_index == reference[0].record_index);
    }
}

TEST_CASE("index disagreement inside one path is flagged, leaf index wins") {
    const StoreParse parsed = parse_store(
        "<string name=\"MapSettings*00000*/AddressRecents*00000*/"
        "AddressRecents_Address*00023*/Location_Line*00024*/LineRec_MaxSpeed*00023*\">"
        "MA==</string>");
    REQUIRE(parsed.entries.size() == 1);
    const std::vector<RecordGroup> groups = group_records(parsed.entries);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].record_index == 23);
    CHECK(has_caveat(groups[0].caveats, caveat::kIndexDisagreement));
}

TEST_CASE("duplicate leaves are kept, flagged, and deterministic") {
    std::vector<SettingsEntry> entries;
    for (int i = 0; i < 2; ++i) {
        SettingsEntry entry;
        entry.path = parse_key_path(
            "MapSettings*00000*/AddressRecents*00000*/AddressRecents_Address*00001*/"
            "Location_LocName*00001*");
        entry.decoded = i == 0 ? "first" : "second";
        entry.source_line = static_cast<std::size_t>(i) + 1;
        entries.push_back(std::move(entry));
    }
    const std::vector<RecordGroup> groups = group_records(entries);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].fields.size() == 2);
    CHECK(has_caveat(groups[0].caveats, caveat::kDuplicateLeaf));
}

TEST_CASE("position pairs parse by shape, with and without the closing mark") {
    CHECK(parse_position_pair("(471308; 5201816") ==
          std::pair<std::int64_t, std::int64_t>{471308, 5201816});
    CHECK(parse_position_pair("(471308; 5201816)") ==
          std::pair<std::int64_t, std::int64_t>{471308, 5201816});
    CHECK(parse_position_pair("(-100; -200)") ==
          std::pair<std::int64_t, std::int64_t>{-100, -200});

    for (const char* bad :
         {"471308; 5201816", "(471308 5201816", "(a; b", "(; )", "", "(1;", "(1; 2x"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_position_pair(bad), FormatError);
    }

    const GeoPoint point = parse_position_string("(471308; 5201816");
    CHECK(point.lon.value == 471308);
    CHECK(point.lat.value == 5201816);
    // Doubled POI coordinates overflow the latitude range; the shape parser
    // must accept them, the range-checked variant must not.
    CHECK(parse_position_pair("(942616; 10403998)") ==
          std::pair<std::int64_t, std::int64_t>{942616, 10403998});
    CHECK_THROWS_AS(parse_position_string("(942616; 10403998)"), FormatError);
}

TEST_CASE("model ids come from the map store filename") {
    REQUIRE(extract_model_id("Benelux_AF7DE92B.xml").has_value());
    CHECK(*extract_model_id("Benelux_AF7DE92B.xml") == "AF7DE92B");
    CHECK(extract_model_id("Iberia_00FF00FF.xml").has_value());
    CHECK_FALSE(extract_model_id("Benelux_af7de92b.xml").has_value());  // lowercase hex
    CHECK_FALSE(extract_model_id("Benelux_AF7DE92.xml").has_value());   // 7 digits
    CHECK_FALSE(extract_model_id("Benelux_AF7DE92B1.xml").has_value()); // 9 digits
    CHECK_FALSE(extract_model_id("123_AF7DE92B.xml").has_value());      // digit prefix
    CHECK_FALSE(extract_model_id("NavkitSettings.xml").has_value());
    CHECK_FALSE(extract_model_id("Benelux_AF7DE92B.ov2").has_value());
}
