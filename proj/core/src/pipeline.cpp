#include "ttkit/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include "ttkit/digest.hpp"
#include "ttkit/version.hpp"

namespace ttkit {
namespace {

namespace fs = std::filesystem;

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw Error("cannot read " + path.string());
    return bytes;
}

std::string_view as_text(std::span<const std::uint8_t> bytes) noexcept {
    return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

void add_issue(EvidenceReport& report, std::string source, std::string kind,
               std::string detail) {
    report.issues.push_back({std::move(source), std::move(kind), std::move(detail)});
}

// Non-POI ov2 records are not favourites but must not vanish; they surface as
// raw groups under the decoded file.
RecordGroup ov2_group(const Ov2Record& record, std::size_t index, std::uint64_t offset) {
    RecordGroup group;
    group.root = "Ov2";
    group.collection = std::string(to_string(record.kind));
    group.record_index = static_cast<std::uint32_t>(index);

    const auto field = [&group](std::string subpath, std::string value) {
        GroupField f;
        f.subpath = std::move(subpath);
        f.value = std::move(value);
        group.fields.push_back(std::move(f));
    };
    field("offset", std::to_string(offset));
    field("total_len", std::to_string(record.total_len));
    if (record.kind == Ov2Kind::Skipper) {
        field("west", std::to_string(record.bbox_min.lon.value));
        field("south", std::to_string(record.bbox_min.lat.value));
        field("east", std::to_string(record.bbox_max.lon.value));
        field("north", std::to_string(record.bbox_max.lat.value));
    } else {
        static const char* kHex = "0123456789abcdef";
        std::string hex;
        hex.reserve(record.payload.size() * 2);
        for (const std::uint8_t byte : record.payload) {
            hex += kHex[byte >> 4];
            hex += kHex[byte & 0xF];
        }
        field("payload_hex", std::move(hex));
    }
    return group;
}

void add_input_digest(EvidenceReport& report, const std::string& label,
                      std::span<const std::uint8_t> bytes) {
    report.tool.inputs.push_back({label, sha256_hex(bytes)});
}

struct MapStoreScalars {
    std::optional<std::string> gps_x;
    std::optional<std::string> gps_y;
};

void dispatch_map_group(EvidenceReport& report, const RecordGroup& group,
                        const std::string& source_label, MapStoreScalars& scalars) {
    const auto scalar = [&group]() -> std::optional<std::string> {
        return group.value_of(group.collection);
    };
    const auto push_location = [&](std::vector<LocationRecord>& into, Origin origin) {
        LocationRecord rec = assemble_location(group, origin);
        rec.source = source_label;
        into.push_back(std::move(rec));
    };

    const std::string& c = group.collection;
    if (c == "EngineRecents_Recent") {
        push_location(report.recents, Origin::EngineRecents);
    } else if (c == "AddressRecents_Address") {
        push_location(report.addresses, Origin::AddressRecents);
    } else if (c == "RouteStream_Route") {
        RouteStreamRecord route = assemble_route_stream(group);
        route.source = source_label;
        route.departure.source = source_label;
        route.destination.source = source_label;
        report.routes.push_back(std::move(route));
    } else if (c == "LastSelectedPoi") {
        push_location(report.last_selected, Origin::LastSelectedPoi);
    } else if (c == "LastSelectedPoiData") {
        push_location(report.last_selected, Origin::LastSelectedPoiData);
    } else if (c == "LastSelectedSearchItem") {
        push_location(report.last_selected, Origin::LastSelectedSearchItem);
    } else if (c == "RegularRouteLocHome") {
        push_location(report.last_selected, Origin::RegularRouteLocHome);
    } else if (c == "RegularRouteLocWork") {
        push_location(report.last_selected, Origin::RegularRouteLocWork);
    } else if (c == "LastKnownTrueGpsPosX") {
        scalars.gps_x = scalar();
    } else if (c == "LastKnownTrueGpsPosY") {
        scalars.gps_y = scalar();
    } else {
        report.unmapped.push_back({source_label, group});
    }
}

}  // namespace

void decode_ov2_favourites(EvidenceReport& report, std::span<const std::uint8_t> bytes,
                           const std::string& source_label, const DecodeOptions& options) {
    if (bytes.empty()) {
        return;  // a zero-length store is a valid store with no favourites
    }

    Ov2ParseOptions parse_options;
    parse_options.strictness = options.strictness;
    parse_options.header_profiles = options.ov2_header_profiles;
    const Ov2File file = parse_ov2(bytes, parse_options);

    for (std::size_t i = 0; i < file.records.size(); ++i) {
        const Ov2Record& record = file.records[i];
        const std::uint64_t offset = file.source_offsets[i];
        if (record.kind == Ov2Kind::SimplePoi) {
            LocationRecord rec;
            rec.origin = Origin::Ov2Favourite;
            rec.record_index = static_cast<std::int64_t>(i);
            rec.user_name = record.name;
            rec.pos = record.pos;
            add_caveat(rec.caveats, caveat::kDatumAssumed);
            add_caveat(rec.caveats, caveat::kEncodingAssumed);
            rec.raw_fields.emplace_back("offset", std::to_string(offset));
            rec.raw_fields.emplace_back("total_len", std::to_string(record.total_len));
            rec.raw_fields.emplace_back("lon", std::to_string(record.pos.lon.value));
            rec.raw_fields.emplace_back("lat", std::to_string(record.pos.lat.value));
            rec.raw_fields.emplace_back("name", record.name);
            rec.source = source_label;
            report.favourites.push_back(std::move(rec));
        } else {
            report.unmapped.push_back({source_label, ov2_group(record, i, offset)});
        }
    }

    for (const Ov2Gap& gap : file.gaps) {
        add_issue(report, source_label, "ov2_gap",
                  std::to_string(gap.bytes.size()) + " undecodable bytes at offset " +
                      std::to_string(gap.offset));
    }
}

void decode_map_store(EvidenceReport& report, std::string_view xml_text,
                      const std::string& source_label, const DecodeOptions& options) {
    const StoreParse parsed = parse_store(xml_text, options.strictness);
    for (const MalformedEntry& bad : parsed.malformed) {
        add_issue(report, source_label, "malformed_entry",
                  "line " + std::to_string(bad.source_line) + ": " + bad.reason);
    }

    MapStoreScalars scalars;
    for (const RecordGroup& group : group_records(parsed.entries)) {
        dispatch_map_group(report, group, source_label, scalars);
    }

    if (scalars.gps_x || scalars.gps_y) {
        report.last_gps = assemble_last_known_gps(scalars.gps_x, scalars.gps_y);
        if (report.last_gps) report.last_gps->source = source_label;
    }
}

void decode_navkit_store(EvidenceReport& report, std::string_view xml_text,
                         const std::string& source_label, const DecodeOptions& options) {
    const StoreParse parsed = parse_store(xml_text, options.strictness);
    for (const MalformedEntry& bad : parsed.malformed) {
        add_issue(report, source_label, "malformed_entry",
                  "line " + std::to_string(bad.source_line) + ": " + bad.reason);
    }

    NavkitSummary summary = assemble_navkit(group_records(parsed.entries));

    if (summary.homes.current) summary.homes.current->source = source_label;
    for (LocationRecord& home : summary.homes.history) home.source = source_label;
    for (SubscriptionRecord& sub : summary.subscriptions) sub.source = source_label;
    if (summary.dock) summary.dock->source = source_label;

    report.navkit_source = source_label;
    report.homes = std::move(summary.homes);
    for (SubscriptionRecord& sub : summary.subscriptions) {
        report.subscriptions.push_back(std::move(sub));
    }
    if (summary.dock) report.dock = std::move(summary.dock);
    if (summary.user_time_offset) report.user_time_offset = summary.user_time_offset;
    if (summary.arrival_time) report.arrival_time = summary.arrival_time;
    report.searches = std::move(summary.search_history);
    for (auto& reminder : summary.reminder_dates) {
        report.reminder_dates.push_back(std::move(reminder));
    }
    for (RecordGroup& group : summary.unmapped) {
        report.unmapped.push_back({source_label, std::move(group)});
    }
    // Summary-level caveats (unparseable scalars) go on the issues channel so
    // they stay visible without inventing a record to hang them on.
    for (const std::string& caveat_text : summary.caveats) {
        add_issue(report, source_label, "settings_caveat", caveat_text);
    }
}

EvidenceReport decode_tree(const fs::path& root, const DecodeOptions& options) {
    if (!fs::is_directory(root)) {
        throw Error("not a directory: " + root.string());
    }

    EvidenceReport report;
    report.tool.version = kVersion;
    report.tool.run_time = options.run_time;

    std::vector<std::string> rel_paths;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        rel_paths.push_back(entry.path().lexically_relative(root).generic_string());
    }
    std::sort(rel_paths.begin(), rel_paths.end());

    report.source = classify_tree(rel_paths);
    if (report.source.kind != SourceKind::Unknown) {
        report.checklist = expected_artifacts(report.source.kind, rel_paths);
    }

    for (const std::string& rel : rel_paths) {
        const fs::path full = root / fs::path(rel);
        const std::string name = full.filename().string();
        const std::string base = lower(name);
        const bool is_ov2 = base.size() > 4 && base.ends_with(".ov2");
        const bool is_navkit = base == "navkitsettings.xml";
        // Model ids are uppercase hex by contract; match on the original name.
        const bool is_map_store = extract_model_id(name).has_value();
        if (!is_ov2 && !is_navkit && !is_map_store) continue;

        std::vector<std::uint8_t> bytes;
        try {
            bytes = read_file(full);
        } catch (const Error& error) {
            if (options.strictness == Strictness::Strict) throw;
            add_issue(report, rel, "unreadable_file", error.what());
            continue;
        }
        add_input_digest(report, rel, bytes);

        if (is_ov2) {
            decode_ov2_favourites(report, bytes, rel, options);
        } else if (is_navkit) {
            decode_navkit_store(report, as_text(bytes), rel, options);
        } else {
            decode_map_store(report, as_text(bytes), rel, options);
        }
    }
    return report;
}

EvidenceReport decode_file(const fs::path& file, const DecodeOptions& options) {
    EvidenceReport report;
    report.tool.version = kVersion;
    report.tool.run_time = options.run_time;

    const std::string label = file.generic_string();
    const std::string name = file.filename().string();
    const std::string base = lower(name);
    const bool is_ov2 = base.size() > 4 && base.ends_with(".ov2");
    const bool is_navkit = base == "navkitsettings.xml";
    const bool is_map_store = extract_model_id(name).has_value();
    if (!is_ov2 && !is_navkit && !is_map_store) {
        throw Error("unrecognized store file: " + label);
    }

    const std::vector<std::uint8_t> bytes = read_file(file);
    add_input_digest(report, label, bytes);
    report.source = classify_tree({file.filename().string()});
    if (report.source.kind != SourceKind::Unknown) {
        report.checklist = expected_artifacts(report.source.kind, {file.filename().string()});
    }

    if (is_ov2) {
        decode_ov2_favourites(report, bytes, label, options);
    } else if (is_navkit) {
        decode_navkit_store(report, as_text(bytes), label, options);
    } else {
        decode_map_store(report, as_text(bytes), label, options);
    }
    return report;
}

}  // namespace ttkit
