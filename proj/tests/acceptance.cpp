// Acceptance gate for the toolkit. Eight end-to-end checks, each printing one
// [PASS]/[FAIL] line; the exit status is the number of failures. Timing
// budgets are pinned as constants next to the checks that use them.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"
#include "store_vectors.hpp"
#include "ttkit/base64.hpp"
#include "ttkit/carver.hpp"
#include "ttkit/caveats.hpp"
#include "ttkit/detect.hpp"
#include "ttkit/fixture.hpp"
#include "ttkit/geo_time.hpp"
#include "ttkit/ov2.hpp"
#include "ttkit/pipeline.hpp"
#include "ttkit/report.hpp"
#include "ttkit/settings_xml.hpp"

namespace fs = std::filesystem;
using namespace ttkit;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------- harness --

struct Criterion {
    bool ok = true;
    std::string detail;  // first failure only; one line is enough to act on

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

int run_criterion(int number, const char* description, Criterion (*fn)()) {
    Criterion result;
    try {
        result = fn();
    } catch (const std::exception& error) {
        result.ok = false;
        result.detail = std::string("unexpected exception: ") + error.what();
    }
    std::printf("[%s] %d. %s\n", result.ok ? "PASS" : "FAIL", number, description);
    if (!result.ok) {
        std::printf("       %s\n", result.detail.c_str());
    }
    return result.ok ? 0 : 1;
}

struct CliRun {
    int exit_code = -1;
    std::string out;
};

CliRun run_cli(const std::string& args) {
    const std::string cmd = std::string(TTKIT_CLI_PATH) + " " + args + " 2>/dev/null";
    CliRun result;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return result;
    char buf[8192];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
        result.out.append(buf, got);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

bool has(const json& caveats, std::string_view text) {
    for (const auto& c : caveats) {
        if (c == std::string(text)) return true;
    }
    return false;
}

// ------------------------------------------------- 1: golden ov2 record ----

constexpr std::int64_t kGoldenBudgetNanos = 1'000'000;  // 1 ms

Criterion golden_ov2_record() {
    Criterion c;

    const unsigned char head[13] = {0x02, 0x35, 0x00, 0x00, 0x00, 0xC2, 0x33,
                                    0x07, 0x00, 0x4F, 0x60, 0x4F, 0x00};
    const std::string name = "Ridder Dirkstraat - Sophiastraat, Gouda";
    std::vector<std::uint8_t> bytes(head, head + sizeof head);
    bytes.insert(bytes.end(), name.begin(), name.end());
    bytes.push_back(0x00);
    c.expect(bytes.size() == 53, "golden record must be 53 bytes");

    // Warm-up run, then the timed one.
    (void)serialize_ov2(parse_ov2(bytes));
    const auto t0 = std::chrono::steady_clock::now();
    const Ov2File file = parse_ov2(bytes);
    const std::vector<std::uint8_t> out = serialize_ov2(file);
    const auto t1 = std::chrono::steady_clock::now();

    c.expect(file.records.size() == 1, "expected exactly one record");
    if (file.records.size() == 1) {
        const Ov2Record& rec = file.records[0];
        c.expect(rec.kind == Ov2Kind::SimplePoi, "kind must be the simple POI type");
        c.expect(rec.total_len == 53, "total length must be 53");
        c.expect(rec.pos.lon.value == 472002,
                 "lon raw " + std::to_string(rec.pos.lon.value) + " != 472002");
        c.expect(rec.pos.lat.value == 5201999,
                 "lat raw " + std::to_string(rec.pos.lat.value) + " != 5201999");
        c.expect(rec.name == name, "name mismatch: " + rec.name);
        c.expect(render_degrees(rec.pos.lon.value) == "4.72002",
                 "lon degrees " + render_degrees(rec.pos.lon.value));
        c.expect(render_degrees(rec.pos.lat.value) == "52.01999",
                 "lat degrees " + render_degrees(rec.pos.lat.value));
    }
    c.expect(out == bytes, "re-serialization is not byte-identical");

    const auto nanos =
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    c.expect(nanos < kGoldenBudgetNanos,
             "decode+serialize took " + std::to_string(nanos) + " ns, budget " +
                 std::to_string(kGoldenBudgetNanos));
    return c;
}

// -------------------------------------- 2: store vectors via the oracle ----

Criterion store_vectors_via_oracle() {
    Criterion c;

    for (const testvec::StoreLine& line : testvec::kStoreLines) {
        const std::optional<std::string> reference =
            oracle::base64_decode(std::string(line.b64));
        c.expect(reference.has_value(), "oracle rejected " + std::string(line.b64));
        c.expect(reference == std::optional<std::string>(line.decoded),
                 "oracle decoded " + std::string(line.b64) + " to '" +
                     reference.value_or("<none>") + "'");

        const Base64Decode lib = base64_decode(line.b64);
        c.expect(lib.ok, "library rejected " + std::string(line.b64));
        c.expect(reference.has_value() && lib.bytes == *reference,
                 "library and oracle disagree on " + std::string(line.b64));
    }

    // The same nine values must come through the full store parser.
    const StoreParse parsed = parse_store(testvec::store_text());
    c.expect(parsed.malformed.empty(), "store vectors produced malformed entries");
    c.expect(parsed.entries.size() == std::size(testvec::kStoreLines),
             "expected " + std::to_string(std::size(testvec::kStoreLines)) +
                 " entries, got " + std::to_string(parsed.entries.size()));
    for (std::size_t i = 0; i < parsed.entries.size(); ++i) {
        c.expect(parsed.entries[i].decoded == testvec::kStoreLines[i].decoded,
                 "entry " + std::to_string(i) + " decoded to '" +
                     parsed.entries[i].decoded + "'");
    }
    return c;
}

// ------------------------------ 3: grouping and permutation invariance -----

std::string group_signature(const std::vector<RecordGroup>& groups) {
    std::vector<std::string> parts;
    for (const RecordGroup& group : groups) {
        std::string part = group.root + "|" + group.collection + "|" +
                           std::to_string(group.record_index);
        for (const GroupField& field : group.fields) {
            part += "|" + field.subpath + "=" + field.value;
        }
        for (const std::string& caveat_text : group.caveats) {
            part += "|!" + caveat_text;
        }
        parts.push_back(std::move(part));
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const std::string& part : parts) {
        out += part;
        out += '\n';
    }
    return out;
}

Criterion grouping_by_record_index() {
    Criterion c;

    // The frozen store: address records keyed 23, 21, 25, 2, 13 in file order.
    const StoreParse parsed = parse_store(testvec::store_text());
    const std::vector<RecordGroup> groups = group_records(parsed.entries);

    std::set<std::uint32_t> address_indices;
    for (const RecordGroup& group : groups) {
        if (group.collection == "AddressRecents_Address") {
            address_indices.insert(group.record_index);
        }
    }
    c.expect(address_indices == std::set<std::uint32_t>({2, 13, 21, 23, 25}),
             "address record indices are not {2, 13, 21, 23, 25}");

    // A 40-field record must regroup identically under any line order.
    std::vector<std::string> lines;
    for (int i = 0; i < 40; ++i) {
        char leaf[16];
        std::snprintf(leaf, sizeof leaf, "Leaf%02d", i);
        const std::string key = "MapSettings*00000*/DemoRecents*00000*/"
                                "DemoRecents_Rec*00005*/" +
                                std::string(leaf) + "*00005*";
        lines.push_back("  <string name=\"" + key + "\">" +
                        base64_encode("value-" + std::to_string(i)) + "</string>");
    }
    const auto build = [](const std::vector<std::string>& body) {
        std::string text = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<Settings>\n";
        for (const std::string& line : body) {
            text += line;
            text += '\n';
        }
        text += "</Settings>\n";
        return text;
    };

    const std::vector<RecordGroup> base_groups =
        group_records(parse_store(build(lines)).entries);
    c.expect(base_groups.size() == 1, "the 40 fields must form exactly one group, got " +
                                          std::to_string(base_groups.size()));
    c.expect(base_groups.size() == 1 && base_groups[0].fields.size() == 40 &&
                 base_groups[0].collection == "DemoRecents_Rec" &&
                 base_groups[0].record_index == 5,
             "the synthetic group lost fields or its record index");
    const std::string baseline = group_signature(base_groups);

    std::mt19937_64 rng(999);
    for (int round = 0; round < 100; ++round) {
        for (std::size_t i = lines.size(); i > 1; --i) {
            std::swap(lines[i - 1], lines[rng() % i]);
        }
        const std::string shuffled =
            group_signature(group_records(parse_store(build(lines)).entries));
        if (shuffled != baseline) {
            c.expect(false, "grouping changed under permutation round " +
                                std::to_string(round));
            break;
        }
    }
    return c;
}

// ----------------------------------------------------- 4: time quirks ------

Criterion time_quirks() {
    Criterion c;

    c.expect(decode_user_time_offset(7259).rendering == "+02:00:59",
             "7259 s renders as " + decode_user_time_offset(7259).rendering);
    c.expect(decode_user_time_offset(-7259).rendering == "-02:00:59",
             "-7259 s rendering is wrong");

    std::mt19937_64 rng(20260816);
    for (int i = 0; i < 1000; ++i) {
        const std::int64_t minutes = static_cast<std::int64_t>(rng() % 35'000'000ull);
        const NormalizedTime normalized = normalize_timestamp(
            {minutes, TimeUnit::Minutes, TimeBasis::DeviceClock, false});
        if (normalized.seconds != minutes * 60) {
            c.expect(false, "minute epoch " + std::to_string(minutes) +
                                " normalized to " + std::to_string(normalized.seconds));
            break;
        }
        if (!has_caveat(normalized.caveats, caveat::kDeviceClock) ||
            !has_caveat(normalized.caveats, caveat::kEpochAssumed)) {
            c.expect(false, "device-clock caveats missing on minute epoch");
            break;
        }
    }

    const ArrivalTime sentinel = decode_arrival_time(86'401);
    c.expect(sentinel.unset() && sentinel.raw == 86'401 && sentinel.caveats.empty(),
             "86401 must decode to unset with the raw kept and no caveat");
    c.expect(!decode_arrival_time(86'400).unset(), "86400 is a valid arrival");
    c.expect(decode_arrival_time(90'000).unset() &&
                 has_caveat(decode_arrival_time(90'000).caveats,
                            caveat::kArrivalOutOfRange),
             "out-of-range arrival must be unset with a caveat");

    for (int i = 0; i < 1000; ++i) {
        const std::int32_t raw = static_cast<std::int32_t>(rng());
        const HalvedCoordinate halved = halve_poi_coordinate(raw);
        const std::int32_t floor_half =
            static_cast<std::int32_t>(std::floor(static_cast<double>(raw) / 2.0));
        if (halved.value != floor_half || halved.precision_loss != ((raw & 1) != 0)) {
            c.expect(false, "halving " + std::to_string(raw) + " gave " +
                                std::to_string(halved.value) + ", expected " +
                                std::to_string(floor_half));
            break;
        }
    }

    const NormalizedTime anomaly = normalize_timestamp(
        {1'275'000'000, TimeUnit::Seconds, TimeBasis::ServerClock, true});
    c.expect(anomaly.seconds == 1'275'000'000, "anomaly keeps the stored reading");
    c.expect(anomaly.anomaly_alternative.has_value() &&
                 *anomaly.anomaly_alternative ==
                     oracle::minus_one_month_one_day(1'275'000'000),
             "anomaly alternative disagrees with the calendar oracle");
    c.expect(has_caveat(anomaly.caveats, caveat::kServerAnomaly),
             "anomaly caveat missing");
    bool threw = false;
    try {
        normalize_timestamp({100, TimeUnit::Seconds, TimeBasis::DeviceClock, true});
    } catch (const Error&) {
        threw = true;
    }
    c.expect(threw, "anomaly flag outside the server basis must be an error");
    return c;
}

// --------------------------- 5: generated trees decode to their manifests --

constexpr int kManifestSeeds = 25;
constexpr std::int64_t kManifestBudgetSeconds = 30;

const json* find_by_index(const json& array, std::int64_t index) {
    for (const auto& entry : array) {
        if (entry["record_index"].get<std::int64_t>() == index) return &entry;
    }
    return nullptr;
}

const json* find_by_origin(const json& array, const std::string& origin) {
    for (const auto& entry : array) {
        if (entry["origin"] == origin) return &entry;
    }
    return nullptr;
}

void compare_position(Criterion& c, const std::string& tag, const json& position,
                      std::int64_t lon, std::int64_t lat) {
    if (position.is_null()) {
        c.expect(false, tag + ": position missing");
        return;
    }
    c.expect(position["lon"]["raw"].get<std::int64_t>() == lon,
             tag + ": lon " + position["lon"]["raw"].dump() + " != " +
                 std::to_string(lon));
    c.expect(position["lat"]["raw"].get<std::int64_t>() == lat,
             tag + ": lat " + position["lat"]["raw"].dump() + " != " +
                 std::to_string(lat));
}

void compare_tree(Criterion& c, const std::string& tag, const json& doc,
                  const json& manifest) {
    c.expect(doc["issues"].empty(), tag + ": decode raised issues: " +
                                        doc["issues"].dump());
    c.expect(doc["source"]["kind"] == manifest["source_kind"],
             tag + ": source kind " + doc["source"]["kind"].dump());
    c.expect(doc["source"]["model_id"] == manifest["model_id"],
             tag + ": model id " + doc["source"]["model_id"].dump());

    // Favourites arrive in file order with their record slots.
    c.expect(doc["favourites"].size() == manifest["favourites"].size(),
             tag + ": favourite count " + std::to_string(doc["favourites"].size()));
    for (std::size_t i = 0;
         i < std::min(doc["favourites"].size(), manifest["favourites"].size()); ++i) {
        const json& got = doc["favourites"][i];
        const json& want = manifest["favourites"][i];
        const std::string where = tag + ": favourite " + std::to_string(i);
        c.expect(got["name"] == want["name"], where + " name " + got["name"].dump());
        c.expect(got["record_index"] == want["index"],
                 where + " record index " + got["record_index"].dump());
        compare_position(c, where, got["position"], want["lon"].get<std::int64_t>(),
                         want["lat"].get<std::int64_t>());
        c.expect(got["position"]["lon"]["degrees"] == want["lon_degrees"],
                 where + " lon degrees " + got["position"]["lon"]["degrees"].dump());
        c.expect(got["position"]["lat"]["degrees"] == want["lat_degrees"],
                 where + " lat degrees " + got["position"]["lat"]["degrees"].dump());
    }

    // Recents and addresses come out of a line-shuffled store; match by index.
    c.expect(doc["recents"].size() == manifest["recents"].size(),
             tag + ": recent count " + std::to_string(doc["recents"].size()));
    for (const json& want : manifest["recents"]) {
        const std::int64_t index = want["index"].get<std::int64_t>();
        const std::string where = tag + ": recent " + std::to_string(index);
        const json* got = find_by_index(doc["recents"], index);
        if (got == nullptr) {
            c.expect(false, where + " missing");
            continue;
        }
        c.expect((*got)["loc_name"] == want["loc_name"], where + " loc name");
        c.expect(!(*got)["loc_type"].is_null() &&
                     (*got)["loc_type"]["raw"] == want["loc_type"],
                 where + " loc type");
        compare_position(c, where, (*got)["position"], want["lon"].get<std::int64_t>(),
                         want["lat"].get<std::int64_t>());
    }

    c.expect(doc["addresses"].size() == manifest["addresses"].size(),
             tag + ": address count " + std::to_string(doc["addresses"].size()));
    for (const json& want : manifest["addresses"]) {
        const std::int64_t index = want["index"].get<std::int64_t>();
        const std::string where = tag + ": address " + std::to_string(index);
        const json* got = find_by_index(doc["addresses"], index);
        if (got == nullptr) {
            c.expect(false, where + " missing");
            continue;
        }
        c.expect((*got)["loc_name"] == want["loc_name"], where + " loc name");
        c.expect((*got)["city"] == want["city"], where + " city");
        c.expect((*got)["house_number"] == want["house_number"], where + " house number");
        compare_position(c, where, (*got)["position"], want["lon"].get<std::int64_t>(),
                         want["lat"].get<std::int64_t>());
    }

    c.expect(doc["routes"].size() == manifest["routes"].size(),
             tag + ": route count " + std::to_string(doc["routes"].size()));
    for (const json& want : manifest["routes"]) {
        const std::int64_t index = want["index"].get<std::int64_t>();
        const std::string where = tag + ": route " + std::to_string(index);
        const json* got = find_by_index(doc["routes"], index);
        if (got == nullptr) {
            c.expect(false, where + " missing");
            continue;
        }
        c.expect((*got)["departure"]["loc_name"] == want["departure_name"],
                 where + " departure name");
        c.expect((*got)["departure"]["loc_type"]["raw"] == want["departure_loc_type"],
                 where + " departure loc type");
        compare_position(c, where + " departure", (*got)["departure"]["position"],
                         want["departure_lon"].get<std::int64_t>(),
                         want["departure_lat"].get<std::int64_t>());
        c.expect((*got)["destination"]["loc_name"] == want["destination_name"],
                 where + " destination name");
        compare_position(c, where + " destination", (*got)["destination"]["position"],
                         want["destination_lon"].get<std::int64_t>(),
                         want["destination_lat"].get<std::int64_t>());
        if (want["departure_time_raw"].is_null()) {
            c.expect((*got)["departure_time"].is_null(), where + " spurious time");
        } else {
            c.expect(!(*got)["departure_time"].is_null() &&
                         (*got)["departure_time"]["raw"] == want["departure_time_raw"],
                     where + " departure time raw");
            if (!(*got)["departure_time"].is_null()) {
                c.expect((*got)["departure_time"]["basis"] == "device_clock",
                         where + " departure time basis");
            }
        }
    }

    c.expect(doc["last_selected"].size() == manifest["last_selected"].size(),
             tag + ": holder count " + std::to_string(doc["last_selected"].size()));
    for (const json& want : manifest["last_selected"]) {
        const std::string origin = want["origin"].get<std::string>();
        const std::string where = tag + ": holder " + origin;
        const json* got = find_by_origin(doc["last_selected"], origin);
        if (got == nullptr) {
            c.expect(false, where + " missing");
            continue;
        }
        if (want.contains("loc_name")) {
            c.expect((*got)["loc_name"] == want["loc_name"], where + " loc name");
        }
        if (want.contains("lon")) {
            compare_position(c, where, (*got)["position"],
                             want["lon"].get<std::int64_t>(),
                             want["lat"].get<std::int64_t>());
        }
        if (want.contains("halved_odd")) {
            c.expect(has((*got)["caveats"], caveat::kHalvedOdd) ==
                         want["halved_odd"].get<bool>(),
                     where + " halving caveat");
        }
    }

    if (manifest["last_gps"].is_null()) {
        c.expect(doc["last_gps"].is_null(), tag + ": spurious last gps");
    } else {
        c.expect(!doc["last_gps"].is_null(), tag + ": last gps missing");
        if (!doc["last_gps"].is_null()) {
            c.expect(doc["last_gps"]["x"] == manifest["last_gps"]["x"],
                     tag + ": gps x " + doc["last_gps"]["x"].dump());
            c.expect(doc["last_gps"]["y"] == manifest["last_gps"]["y"],
                     tag + ": gps y " + doc["last_gps"]["y"].dump());
            compare_position(c, tag + ": last gps", doc["last_gps"]["position"],
                             manifest["last_gps"]["x"].get<std::int64_t>(),
                             manifest["last_gps"]["y"].get<std::int64_t>());
            c.expect(has(doc["last_gps"]["caveats"], caveat::kNoGpsTime),
                     tag + ": last gps must carry the no-time caveat");
        }
    }

    if (manifest["homes"].is_null()) {
        c.expect(doc["homes"]["current"].is_null() && doc["homes"]["history"].empty(),
                 tag + ": spurious home");
    } else {
        const json& want = manifest["homes"];
        const json& current = doc["homes"]["current"];
        c.expect(!current.is_null(), tag + ": current home missing");
        if (!current.is_null()) {
            c.expect(current["name"] == want["current_name"],
                     tag + ": home name " + current["name"].dump());
            c.expect(current["record_index"] == want["current_index"],
                     tag + ": home index " + current["record_index"].dump());
            compare_position(c, tag + ": home", current["position"],
                             want["current_lon"].get<std::int64_t>(),
                             want["current_lat"].get<std::int64_t>());
        }
        std::vector<std::int64_t> history;
        for (const auto& entry : doc["homes"]["history"]) {
            history.push_back(entry["record_index"].get<std::int64_t>());
        }
        std::vector<std::int64_t> want_history;
        for (const auto& idx : want["history_indices"]) {
            want_history.push_back(idx.get<std::int64_t>());
        }
        c.expect(history == want_history, tag + ": home history indices");
    }

    c.expect(doc["subscriptions"].size() == manifest["subscriptions"].size(),
             tag + ": subscription count");
    for (const json& want : manifest["subscriptions"]) {
        const std::int64_t index = want["index"].get<std::int64_t>();
        const std::string where = tag + ": subscription " + std::to_string(index);
        const json* got = find_by_index(doc["subscriptions"], index);
        if (got == nullptr) {
            c.expect(false, where + " missing");
            continue;
        }
        c.expect((*got)["service"] == want["service"], where + " service");
        c.expect((*got)["username"] == want["username"], where + " username");
        c.expect((*got)["password"] == want["password"],
                 where + " password (revealed run) " + (*got)["password"].dump());
        c.expect((*got)["start"]["raw"] == want["start_raw"], where + " start");
        c.expect((*got)["end"]["raw"] == want["end_raw"], where + " end");
        c.expect((*got)["last_valid"]["raw"] == want["last_valid_raw"],
                 where + " last valid");
        c.expect((*got)["last_valid"]["anomaly_flag"] == true,
                 where + " last valid must be anomaly-flagged");
        c.expect(!(*got)["last_valid"]["anomaly_alternative"].is_null(),
                 where + " last valid must offer the alternative reading");
        c.expect((*got)["last_connection"]["raw"] == want["last_connection_raw"],
                 where + " last connection");
        c.expect((*got)["account_date_last_update"]["raw"] == want["account_update_raw"],
                 where + " account update");
    }

    if (manifest["dock"].is_null()) {
        c.expect(doc["dock"].is_null(), tag + ": spurious dock");
    } else {
        c.expect(!doc["dock"].is_null(), tag + ": dock missing");
        if (!doc["dock"].is_null()) {
            compare_position(c, tag + ": dock", doc["dock"]["position"],
                             manifest["dock"]["x"].get<std::int64_t>(),
                             manifest["dock"]["y"].get<std::int64_t>());
            c.expect(doc["dock"]["time"]["raw"] == manifest["dock"]["time_raw_minutes"],
                     tag + ": dock raw minutes");
            c.expect(doc["dock"]["time"]["unit"] == "minutes", tag + ": dock unit");
            c.expect(doc["dock"]["time"]["seconds"] == manifest["dock"]["time_seconds"],
                     tag + ": dock seconds " + doc["dock"]["time"]["seconds"].dump());
        }
    }

    if (manifest["user_time_offset"].is_null()) {
        c.expect(doc["user_time_offset"].is_null(), tag + ": spurious offset");
    } else {
        c.expect(!doc["user_time_offset"].is_null() &&
                     doc["user_time_offset"]["raw_seconds"] ==
                         manifest["user_time_offset"]["raw"] &&
                     doc["user_time_offset"]["rendering"] ==
                         manifest["user_time_offset"]["rendering"],
                 tag + ": user time offset mismatch");
    }

    if (manifest["arrival_time"].is_null()) {
        c.expect(doc["arrival_time"].is_null(), tag + ": spurious arrival");
    } else {
        c.expect(!doc["arrival_time"].is_null(), tag + ": arrival missing");
        if (!doc["arrival_time"].is_null()) {
            c.expect(doc["arrival_time"]["raw"] == manifest["arrival_time"]["raw"],
                     tag + ": arrival raw");
            c.expect(doc["arrival_time"]["seconds_of_day"] ==
                         manifest["arrival_time"]["seconds_of_day"],
                     tag + ": arrival seconds of day");
        }
    }

    c.expect(doc["searches"]["terms"] == manifest["search_terms"],
             tag + ": search terms " + doc["searches"]["terms"].dump());
    c.expect(has(doc["searches"]["caveats"], caveat::kDuplicateSearchTerm) ==
                 manifest["search_duplicate_planted"].get<bool>(),
             tag + ": duplicate search term caveat");

    if (manifest["reminder"].is_null()) {
        c.expect(doc["reminder_dates"].empty(), tag + ": spurious reminder");
    } else {
        c.expect(doc["reminder_dates"].size() == 1, tag + ": reminder count");
        if (doc["reminder_dates"].size() == 1) {
            c.expect(doc["reminder_dates"][0]["key"] == manifest["reminder"]["key"] &&
                         doc["reminder_dates"][0]["value"] ==
                             manifest["reminder"]["value"],
                     tag + ": reminder mismatch");
        }
    }

    std::vector<std::string> unmapped;
    for (const auto& entry : doc["unmapped"]) {
        unmapped.push_back(entry["group"]["collection"].get<std::string>());
    }
    std::sort(unmapped.begin(), unmapped.end());
    std::vector<std::string> want_unmapped;
    for (const auto& name : manifest["unmapped_collections"]) {
        want_unmapped.push_back(name.get<std::string>());
    }
    c.expect(unmapped == want_unmapped,
             tag + ": unmapped collections " + json(unmapped).dump() + " != " +
                 json(want_unmapped).dump());
}

Criterion manifests_round_trip() {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();

    for (int seed = 1; seed <= kManifestSeeds; ++seed) {
        const std::string tag = "seed " + std::to_string(seed);
        const fs::path dir =
            fs::temp_directory_path() / ("ttkit_accept_" + std::to_string(seed));
        fs::remove_all(dir);

        const std::size_t records = static_cast<std::size_t>(seed % 9);
        const CliRun gen = run_cli("fixture --out " + dir.string() + " --seed " +
                                   std::to_string(seed) + " --records " +
                                   std::to_string(records));
        c.expect(gen.exit_code == 0, tag + ": fixture generation failed");
        if (gen.exit_code != 0) break;

        const CliRun decode = run_cli("decode " + dir.string() + " --reveal-credentials");
        c.expect(decode.exit_code == 0,
                 tag + ": decode exited " + std::to_string(decode.exit_code));
        if (decode.exit_code != 0) break;

        const json doc = json::parse(decode.out, nullptr, false);
        const json manifest =
            json::parse(read_file(dir / "manifest.json"), nullptr, false);
        c.expect(!doc.is_discarded(), tag + ": decode emitted invalid JSON");
        c.expect(!manifest.is_discarded(), tag + ": manifest unreadable");
        if (doc.is_discarded() || manifest.is_discarded()) break;

        compare_tree(c, tag, doc, manifest);
        fs::remove_all(dir);
        if (!c.ok) break;
    }

    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    c.expect(seconds < kManifestBudgetSeconds,
             "round trips took " + std::to_string(seconds) + " s, budget " +
                 std::to_string(kManifestBudgetSeconds));
    return c;
}

// ------------------------------------------ 6: noise-image carve recall ----

constexpr std::uint64_t kNoiseBytes = 16ull << 20;
constexpr std::size_t kNoisePlants = 50;
constexpr std::int64_t kNoiseBudgetSeconds = 10;

Criterion carve_recovers_all_plants() {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();

    const NoiseImage image = generate_noise_image(1306, kNoiseBytes, kNoisePlants, 0);
    c.expect(image.pois.size() == kNoisePlants, "generator planted the wrong count");

    const std::uint64_t chunk_sizes[] = {1ull << 16, 1ull << 20, 64ull << 20};
    for (const std::uint64_t chunk : chunk_sizes) {
        ScanOptions options;
        options.chunk_size = chunk;
        const ScanResult result = scan_image(image.bytes, options);

        const std::string where = "chunk size " + std::to_string(chunk);
        c.expect(result.gaps.empty(), where + ": scan produced gaps");
        if (result.hits.size() != kNoisePlants) {
            c.expect(false, where + ": " + std::to_string(result.hits.size()) +
                                " hits, expected " + std::to_string(kNoisePlants));
            break;
        }
        for (std::size_t i = 0; i < kNoisePlants; ++i) {
            const CarveHit& hit = result.hits[i];
            const PlantedPoi& want = image.pois[i];
            if (hit.offset != want.offset || hit.kind != HitKind::Ov2SimplePoi ||
                hit.confidence != Confidence::Structural ||
                hit.record.name != want.name || hit.record.pos.lon.value != want.lon ||
                hit.record.pos.lat.value != want.lat) {
                c.expect(false, where + ": hit " + std::to_string(i) +
                                    " diverges from the planted record at offset " +
                                    std::to_string(want.offset));
                break;
            }
        }
        if (!c.ok) break;
    }

    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    c.expect(seconds < kNoiseBudgetSeconds,
             "three scans took " + std::to_string(seconds) + " s, budget " +
                 std::to_string(kNoiseBudgetSeconds));
    return c;
}

// --------------------------------------- 7: classification worked rows -----

Criterion classification_worked_examples() {
    Criterion c;

    const SourceClass android = classify_tree({
        "tomtom/Favorites.ov2",
        "tomtom/NavkitSettings.xml",
        "tomtom/Benelux_AF7DE92B.xml",
    });
    c.expect(android.kind == SourceKind::AndroidApplication,
             "android tree classified as " + std::string(to_string(android.kind)));
    c.expect(android.model_id.has_value() && *android.model_id == "AF7DE92B",
             "android tree model id");

    const SourceClass first = classify_tree({"mapsettings.cfg"});
    c.expect(first.kind == SourceKind::PndFirstSeries,
             "mapsettings.cfg classified as " + std::string(to_string(first.kind)));

    const SourceClass unknown = classify_tree({});
    c.expect(unknown.kind == SourceKind::Unknown && unknown.candidates.empty(),
             "empty tree must be unknown without candidates");

    const SourceClass tie = classify_tree({"Favorites.ov2"});
    c.expect(tie.kind == SourceKind::Unknown && tie.candidates.size() == 2 &&
                 tie.candidates[0] == SourceKind::PndSecondSeries &&
                 tie.candidates[1] == SourceKind::AndroidApplication,
             "lone favourites file must tie the PND second series and the "
             "android application");

    // The full nine-row checklist, cell for cell.
    struct RowCells {
        const char* name;
        const char* first;
        const char* second;
        const char* android;
    };
    const RowCells rows[9] = {
        {"Triplogs", "Statdata folder", "Statdata folder", "Not Found"},
        {"Home Location", "mapsettings.cfg", "userpatch.dat", "NavkitSettings.xml"},
        {"Favourites", "mapsettings.cfg", "Favorites.ov2", "Favorites.ov2"},
        {"Recent Destinations", "mapsettings.cfg", "mapsettings.tlv",
         "Benelux_XXXXXXXXX.xml"},
        {"Entered locations", "mapsettings.cfg", "mapsettings.tlv",
         "Benelux_XXXXXXXXX.xml"},
        {"Journeys", "mapsettings.cfg", "mapsettings.tlv",
         "Benelux_XXXXXXXXX.xml with departure time"},
        {"Last docked", "mapsettings.cfg", "Userpatch.dat",
         "NavkitSettings.xml, with a time stamp"},
        {"Bluetooth coupled devices", "mapsettings.cfg", "Settings.tlv",
         "Handled by the Android OS, not by the TomTom Android Application"},
        {"Simcard data", "Not applicable for first generation PND", "mobility.sim",
         "Handled by the Android OS, not by the TomTom Android Application"},
    };

    const auto check_rows = [&](SourceKind kind, const char* RowCells::*cell,
                                const char* label) {
        const std::vector<ArtifactExpectation> expectations = expected_artifacts(kind);
        c.expect(expectations.size() == 9,
                 std::string(label) + ": checklist must have nine rows");
        for (std::size_t i = 0; i < expectations.size() && i < 9; ++i) {
            if (expectations[i].artifact_class != rows[i].name ||
                expectations[i].expected != rows[i].*cell) {
                c.expect(false, std::string(label) + " row " + rows[i].name +
                                    ": got '" + expectations[i].expected + "'");
                break;
            }
        }
    };
    check_rows(SourceKind::PndFirstSeries, &RowCells::first, "first series");
    check_rows(SourceKind::PndSecondSeries, &RowCells::second, "second series");
    check_rows(SourceKind::AndroidApplication, &RowCells::android, "android");

    bool threw = false;
    try {
        (void)expected_artifacts(SourceKind::Unknown);
    } catch (const Error&) {
        threw = true;
    }
    c.expect(threw, "the unknown class must refuse a checklist");
    return c;
}

// ------------------------------- 8: deterministic, schema-valid reports ----

Criterion deterministic_reports() {
    Criterion c;

    const fs::path dir = fs::temp_directory_path() / "ttkit_accept_determinism";
    fs::remove_all(dir);
    FixtureOptions options;
    options.seed = 808;
    options.records = 6;
    write_fixture(dir, options);

    const EvidenceReport first = decode_tree(dir);
    const EvidenceReport second = decode_tree(dir);

    const std::string json_a = emit_json(first);
    const std::string json_b = emit_json(second);
    c.expect(!json_a.empty() && json_a == json_b, "JSON differs between two runs");

    const std::string gpx_a = emit_gpx(first);
    const std::string gpx_b = emit_gpx(second);
    c.expect(gpx_a == gpx_b, "GPX differs between two runs");

    const oracle::GpxCheck check = oracle::validate_gpx(gpx_a);
    c.expect(check.ok, "GPX rejected by the independent checker: " + check.error);
    c.expect(check.waypoints > 0, "GPX carries no waypoints");

    const std::string csv_a = emit_timeline_csv(first);
    const std::string csv_b = emit_timeline_csv(second);
    c.expect(csv_a == csv_b, "timeline differs between two runs");
    c.expect(csv_a.rfind("timestamp_utc,timestamp_raw,time_basis,", 0) == 0,
             "timeline header missing");

    fs::remove_all(dir);
    return c;
}

}  // namespace

int main() {
    int failures = 0;
    failures += run_criterion(
        1, "golden ov2 favourite decodes and re-serializes byte-exactly within 1 ms",
        golden_ov2_record);
    failures += run_criterion(
        2, "settings store vectors decode identically via library and oracle",
        store_vectors_via_oracle);
    failures += run_criterion(
        3, "record grouping keys on the leading index and survives permutation",
        grouping_by_record_index);
    failures += run_criterion(
        4, "time quirks: offset rendering, minute epochs, arrival sentinel, halving",
        time_quirks);
    failures += run_criterion(
        5, "25 generated evidence trees decode back to their manifests within 30 s",
        manifests_round_trip);
    failures += run_criterion(
        6, "16 MiB noise image yields all 50 planted records at 3 chunk sizes within 10 s",
        carve_recovers_all_plants);
    failures += run_criterion(
        7, "source classification matches the worked examples with verbatim checklists",
        classification_worked_examples);
    failures += run_criterion(
        8, "reports are byte-deterministic and the GPX validates independently",
        deterministic_reports);
    return failures;
}
