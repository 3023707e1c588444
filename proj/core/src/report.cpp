#include "ttkit/report.hpp"

#include <algorithm>
#include <cctype>

#include "json.hpp"

namespace ttkit {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kRedactedPlaceholder = "[redacted]";

bool key_names_password(std::string_view key) {
    std::string low(key);
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return low.find("password") != std::string::npos;
}

ordered_json opt_str(const std::optional<std::string>& value) {
    if (!value) return nullptr;
    return *value;
}

ordered_json coord_json(const CoordinateE5& coord) {
    ordered_json out;
    out["raw"] = coord.value;
    out["degrees"] = render_degrees(coord.value);
    return out;
}

ordered_json point_json(const std::optional<GeoPoint>& pos) {
    if (!pos) return nullptr;
    ordered_json out;
    out["lon"] = coord_json(pos->lon);
    out["lat"] = coord_json(pos->lat);
    return out;
}

ordered_json raw_fields_json(const std::vector<std::pair<std::string, std::string>>& fields,
                             bool redact_passwords) {
    ordered_json out = ordered_json::array();
    for (const auto& [key, value] : fields) {
        ordered_json field;
        field["key"] = key;
        field["value"] = (redact_passwords && key_names_password(key))
                             ? std::string(kRedactedPlaceholder)
                             : value;
        out.push_back(std::move(field));
    }
    return out;
}

// Raw spec plus the normalized view. `normalized` may be absent when the
// stored value defeated conversion; the raw half still appears.
ordered_json time_json(const TimestampSpec& spec,
                       const std::optional<NormalizedTime>& normalized) {
    ordered_json out;
    out["raw"] = spec.raw;
    out["unit"] = to_string(spec.unit);
    out["basis"] = to_string(spec.basis);
    out["anomaly_flag"] = spec.anomaly_flag;
    if (normalized) {
        out["seconds"] = normalized->seconds;
        out["utc"] = format_utc(normalized->seconds);
        if (normalized->anomaly_alternative) {
            ordered_json alt;
            alt["seconds"] = *normalized->anomaly_alternative;
            alt["utc"] = format_utc(*normalized->anomaly_alternative);
            out["anomaly_alternative"] = std::move(alt);
        } else {
            out["anomaly_alternative"] = nullptr;
        }
        out["caveats"] = normalized->caveats;
    } else {
        out["seconds"] = nullptr;
        out["utc"] = nullptr;
        out["anomaly_alternative"] = nullptr;
        out["caveats"] = ordered_json::array();
    }
    return out;
}

std::optional<NormalizedTime> try_normalize(const TimestampSpec& spec) {
    try {
        return normalize_timestamp(spec);
    } catch (const Error&) {
        return std::nullopt;
    }
}

ordered_json opt_time_json(const std::optional<TimestampSpec>& spec) {
    if (!spec) return nullptr;
    return time_json(*spec, try_normalize(*spec));
}

ordered_json location_json(const LocationRecord& rec, bool redact_passwords) {
    ordered_json out;
    out["origin"] = to_string(rec.origin);
    out["record_index"] = rec.record_index;
    out["source"] = rec.source;
    out["name"] = opt_str(rec.user_name);
    out["loc_name"] = opt_str(rec.loc_name);
    out["city"] = opt_str(rec.city);
    out["house_number"] = opt_str(rec.house_number);
    if (rec.loc_type.raw.empty()) {
        out["loc_type"] = nullptr;
    } else {
        ordered_json lt;
        lt["kind"] = to_string(rec.loc_type.kind);
        lt["raw"] = rec.loc_type.raw;
        out["loc_type"] = std::move(lt);
    }
    out["position"] = point_json(rec.pos);
    out["caveats"] = rec.caveats;
    out["raw_fields"] = raw_fields_json(rec.raw_fields, redact_passwords);
    return out;
}

ordered_json location_list_json(const std::vector<LocationRecord>& records,
                                bool redact_passwords) {
    ordered_json out = ordered_json::array();
    for (const LocationRecord& rec : records) out.push_back(location_json(rec, redact_passwords));
    return out;
}

ordered_json route_json(const RouteStreamRecord& route, bool redact_passwords) {
    ordered_json out;
    out["record_index"] = route.record_index;
    out["source"] = route.source;
    out["departure"] = location_json(route.departure, redact_passwords);
    out["destination"] = location_json(route.destination, redact_passwords);
    out["departure_time"] = route.departure_time
                                ? time_json(*route.departure_time,
                                            route.departure_time_normalized)
                                : ordered_json(nullptr);
    out["caveats"] = route.caveats;
    out["raw_fields"] = raw_fields_json(route.raw_fields, redact_passwords);
    return out;
}

ordered_json subscription_json(const SubscriptionRecord& sub, bool redact_passwords) {
    ordered_json out;
    out["service"] = sub.service;
    out["record_index"] = sub.record_index;
    out["source"] = sub.source;
    out["username"] = opt_str(sub.username);
    if (!sub.password) {
        out["password"] = nullptr;
    } else if (redact_passwords) {
        out["password"] = std::string(kRedactedPlaceholder);
    } else {
        out["password"] = *sub.password;
    }
    out["start"] = opt_time_json(sub.start);
    out["end"] = opt_time_json(sub.end);
    out["last_valid"] = opt_time_json(sub.last_valid);
    out["last_connection"] = opt_time_json(sub.last_connection);
    out["account_date_last_update"] = opt_time_json(sub.account_date_last_update);
    CaveatSet caveats = sub.caveats;
    if (sub.password && redact_passwords) {
        add_caveat(caveats, caveat::kRedacted);
    }
    out["caveats"] = caveats;
    out["raw_fields"] = raw_fields_json(sub.raw_fields, redact_passwords);
    return out;
}

ordered_json group_json(const RecordGroup& group) {
    ordered_json out;
    out["root"] = group.root;
    out["collection"] = group.collection;
    out["record_index"] = group.record_index;
    ordered_json fields = ordered_json::array();
    for (const GroupField& field : group.fields) {
        ordered_json f;
        f["subpath"] = field.subpath;
        f["value"] = field.value;
        f["leaf_index"] = field.leaf_index;
        f["source_line"] = field.source_line;
        fields.push_back(std::move(f));
    }
    out["fields"] = std::move(fields);
    out["caveats"] = group.caveats;
    return out;
}

ordered_json carve_hit_json(const CarveHit& hit) {
    ordered_json out;
    out["offset"] = hit.offset;
    out["kind"] = to_string(hit.kind);
    out["confidence"] = to_string(hit.confidence);
    out["length"] = hit.length;
    if (hit.kind == HitKind::Ov2SimplePoi) {
        ordered_json rec;
        rec["name"] = hit.record.name;
        rec["total_len"] = hit.record.total_len;
        rec["position"] = point_json(hit.record.pos);
        out["record"] = std::move(rec);
        out["fragment"] = nullptr;
    } else {
        out["record"] = nullptr;
        out["fragment"] = hit.fragment;
    }
    out["note"] = hit.note;
    return out;
}

std::string join_caveats(const CaveatSet& caveats) {
    std::string out;
    for (const std::string& caveat : caveats) {
        if (!out.empty()) out += "; ";
        out += caveat;
    }
    return out;
}

// XML 1.0 text: escape markup characters and replace the control bytes the
// format cannot carry at all.
std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (const char ch : text) {
        const unsigned char byte = static_cast<unsigned char>(ch);
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default:
                if (byte < 0x20 && ch != '\t' && ch != '\n' && ch != '\r') {
                    out += "\xEF\xBF\xBD";  // U+FFFD
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

struct Waypoint {
    GeoPoint pos;
    std::optional<std::string> time;  // formatted UTC
    std::string name;
    std::string desc;
};

void append_location_waypoints(std::vector<Waypoint>& out,
                               const std::vector<LocationRecord>& records) {
    for (const LocationRecord& rec : records) {
        if (!rec.pos) continue;
        Waypoint wpt;
        wpt.pos = *rec.pos;
        if (rec.user_name && !rec.user_name->empty()) {
            wpt.name = *rec.user_name;
        } else if (rec.loc_name && !rec.loc_name->empty()) {
            wpt.name = *rec.loc_name;
        } else {
            wpt.name = std::string(to_string(rec.origin));
        }
        wpt.desc = join_caveats(rec.caveats);
        out.push_back(std::move(wpt));
    }
}

struct TimelineRow {
    std::int64_t seconds = 0;
    std::string timestamp_utc;
    std::string timestamp_raw;
    std::string time_basis;
    std::string anomaly_alternative;
    std::string event_type;
    std::string lat;
    std::string lon;
    std::string name;
    std::string source;
    std::string caveats;
};

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
    std::string out = "\"";
    for (const char ch : value) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

void add_timeline_row(std::vector<TimelineRow>& rows, const TimestampSpec& spec,
                      const NormalizedTime& normalized, std::string event_type,
                      const std::optional<GeoPoint>& pos, std::string name,
                      std::string source, const CaveatSet& record_caveats) {
    TimelineRow row;
    row.seconds = normalized.seconds;
    row.timestamp_utc = format_utc(normalized.seconds);
    row.timestamp_raw = std::to_string(spec.raw);
    row.time_basis = std::string(to_string(spec.basis));
    if (normalized.anomaly_alternative) {
        row.anomaly_alternative = format_utc(*normalized.anomaly_alternative);
    }
    row.event_type = std::move(event_type);
    if (pos) {
        row.lat = render_degrees(pos->lat.value);
        row.lon = render_degrees(pos->lon.value);
    }
    row.name = std::move(name);
    row.source = std::move(source);
    CaveatSet merged = record_caveats;
    merge_caveats(merged, normalized.caveats);
    row.caveats = join_caveats(merged);
    rows.push_back(std::move(row));
}

std::string location_display_name(const LocationRecord& rec) {
    if (rec.user_name && !rec.user_name->empty()) return *rec.user_name;
    if (rec.loc_name && !rec.loc_name->empty()) return *rec.loc_name;
    return {};
}

}  // namespace

std::string emit_json(const EvidenceReport& report, const ReportOptions& options) {
    const bool redact = !options.reveal_credentials;
    ordered_json doc;

    ordered_json tool;
    tool["name"] = "ttkit";
    tool["version"] = report.tool.version;
    if (report.tool.run_time) {
        tool["run_time"] = *report.tool.run_time;
    }
    doc["tool"] = std::move(tool);

    ordered_json inputs = ordered_json::array();
    for (const InputDigest& input : report.tool.inputs) {
        ordered_json entry;
        entry["path"] = input.path;
        entry["sha256"] = input.sha256;
        inputs.push_back(std::move(entry));
    }
    doc["inputs"] = std::move(inputs);

    ordered_json source;
    source["kind"] = to_string(report.source.kind);
    source["model_id"] = opt_str(report.source.model_id);
    ordered_json evidence = ordered_json::array();
    for (const EvidencePair& pair : report.source.evidence) {
        ordered_json e;
        e["artifact_class"] = pair.artifact_class;
        e["path"] = pair.path;
        evidence.push_back(std::move(e));
    }
    source["evidence"] = std::move(evidence);
    ordered_json candidates = ordered_json::array();
    for (const SourceKind kind : report.source.candidates) {
        candidates.push_back(std::string(to_string(kind)));
    }
    source["candidates"] = std::move(candidates);
    source["notes"] = report.source.notes;
    doc["source"] = std::move(source);

    ordered_json checklist = ordered_json::array();
    for (const ArtifactExpectation& row : report.checklist) {
        ordered_json entry;
        entry["artifact_class"] = row.artifact_class;
        entry["expected"] = row.expected;
        entry["found"] = row.found;
        entry["paths"] = row.matching_paths;
        checklist.push_back(std::move(entry));
    }
    doc["checklist"] = std::move(checklist);

    doc["favourites"] = location_list_json(report.favourites, redact);
    doc["recents"] = location_list_json(report.recents, redact);
    doc["addresses"] = location_list_json(report.addresses, redact);
    doc["last_selected"] = location_list_json(report.last_selected, redact);

    ordered_json routes = ordered_json::array();
    for (const RouteStreamRecord& route : report.routes) {
        routes.push_back(route_json(route, redact));
    }
    doc["routes"] = std::move(routes);

    ordered_json homes;
    homes["current"] = report.homes.current
                           ? location_json(*report.homes.current, redact)
                           : ordered_json(nullptr);
    homes["history"] = location_list_json(report.homes.history, redact);
    doc["homes"] = std::move(homes);

    ordered_json subscriptions = ordered_json::array();
    for (const SubscriptionRecord& sub : report.subscriptions) {
        subscriptions.push_back(subscription_json(sub, redact));
    }
    doc["subscriptions"] = std::move(subscriptions);

    if (report.dock) {
        ordered_json dock;
        dock["position"] = point_json(report.dock->pos);
        dock["time"] = report.dock->time
                           ? time_json(*report.dock->time, report.dock->time_normalized)
                           : ordered_json(nullptr);
        dock["caveats"] = report.dock->caveats;
        dock["source"] = report.dock->source;
        doc["dock"] = std::move(dock);
    } else {
        doc["dock"] = nullptr;
    }

    if (report.last_gps) {
        ordered_json gps;
        gps["x"] = report.last_gps->x ? ordered_json(*report.last_gps->x)
                                      : ordered_json(nullptr);
        gps["y"] = report.last_gps->y ? ordered_json(*report.last_gps->y)
                                      : ordered_json(nullptr);
        gps["position"] = point_json(report.last_gps->pos);
        gps["caveats"] = report.last_gps->caveats;
        gps["source"] = report.last_gps->source;
        doc["last_gps"] = std::move(gps);
    } else {
        doc["last_gps"] = nullptr;
    }

    ordered_json searches;
    searches["terms"] = report.searches.terms;
    searches["caveats"] = report.searches.caveats;
    searches["source"] = report.navkit_source;
    doc["searches"] = std::move(searches);

    if (report.user_time_offset) {
        ordered_json offset;
        offset["raw_seconds"] = report.user_time_offset->offset.seconds;
        offset["rendering"] = report.user_time_offset->rendering;
        offset["source"] = report.navkit_source;
        doc["user_time_offset"] = std::move(offset);
    } else {
        doc["user_time_offset"] = nullptr;
    }

    if (report.arrival_time) {
        ordered_json arrival;
        arrival["raw"] = report.arrival_time->raw;
        arrival["seconds_of_day"] =
            report.arrival_time->seconds_of_day
                ? ordered_json(*report.arrival_time->seconds_of_day)
                : ordered_json(nullptr);
        arrival["caveats"] = report.arrival_time->caveats;
        arrival["source"] = report.navkit_source;
        doc["arrival_time"] = std::move(arrival);
    } else {
        doc["arrival_time"] = nullptr;
    }

    ordered_json reminders = ordered_json::array();
    for (const auto& [key, value] : report.reminder_dates) {
        ordered_json entry;
        entry["key"] = key;
        entry["value"] = value;
        entry["source"] = report.navkit_source;
        reminders.push_back(std::move(entry));
    }
    doc["reminder_dates"] = std::move(reminders);

    ordered_json unmapped = ordered_json::array();
    for (const UnmappedGroup& group : report.unmapped) {
        ordered_json entry;
        entry["source"] = group.source;
        entry["group"] = group_json(group.group);
        unmapped.push_back(std::move(entry));
    }
    doc["unmapped"] = std::move(unmapped);

    ordered_json carve;
    ordered_json hits = ordered_json::array();
    for (const CarveHit& hit : report.carve_hits) hits.push_back(carve_hit_json(hit));
    carve["hits"] = std::move(hits);
    ordered_json gaps = ordered_json::array();
    for (const ScanGap& gap : report.carve_gaps) {
        ordered_json entry;
        entry["offset"] = gap.offset;
        entry["length"] = gap.length;
        entry["detail"] = gap.detail;
        gaps.push_back(std::move(entry));
    }
    carve["gaps"] = std::move(gaps);
    carve["published_pattern_offsets"] = report.published_pattern_hits;
    doc["carve"] = std::move(carve);

    ordered_json issues = ordered_json::array();
    for (const ParseIssue& issue : report.issues) {
        ordered_json entry;
        entry["source"] = issue.source;
        entry["kind"] = issue.kind;
        entry["detail"] = issue.detail;
        issues.push_back(std::move(entry));
    }
    doc["issues"] = std::move(issues);

    // Stored strings are bytes from evidence; anything that is not valid UTF-8
    // renders as U+FFFD instead of aborting the report.
    return doc.dump(2, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

std::string emit_gpx(const EvidenceReport& report) {
    std::vector<Waypoint> waypoints;

    append_location_waypoints(waypoints, report.favourites);
    append_location_waypoints(waypoints, report.recents);
    append_location_waypoints(waypoints, report.addresses);
    append_location_waypoints(waypoints, report.last_selected);
    if (report.homes.current) {
        append_location_waypoints(waypoints, {*report.homes.current});
    }
    append_location_waypoints(waypoints, report.homes.history);

    for (const RouteStreamRecord& route : report.routes) {
        const std::size_t before = waypoints.size();
        append_location_waypoints(waypoints, {route.departure});
        if (waypoints.size() > before && route.departure_time_normalized) {
            waypoints.back().time = format_utc(route.departure_time_normalized->seconds);
        }
        append_location_waypoints(waypoints, {route.destination});
    }

    if (report.dock && report.dock->pos) {
        Waypoint wpt;
        wpt.pos = *report.dock->pos;
        if (report.dock->time_normalized) {
            wpt.time = format_utc(report.dock->time_normalized->seconds);
        }
        wpt.name = "last_docked";
        CaveatSet merged = report.dock->caveats;
        if (report.dock->time_normalized) {
            merge_caveats(merged, report.dock->time_normalized->caveats);
        }
        wpt.desc = join_caveats(merged);
        waypoints.push_back(std::move(wpt));
    }

    if (report.last_gps && report.last_gps->pos) {
        Waypoint wpt;
        wpt.pos = *report.last_gps->pos;
        wpt.name = "last_known_gps";
        wpt.desc = join_caveats(report.last_gps->caveats);
        waypoints.push_back(std::move(wpt));
    }

    for (const CarveHit& hit : report.carve_hits) {
        if (hit.kind != HitKind::Ov2SimplePoi) continue;
        Waypoint wpt;
        wpt.pos = hit.record.pos;
        wpt.name = hit.record.name.empty() ? "carved_poi" : hit.record.name;
        wpt.desc = "carved at offset " + std::to_string(hit.offset);
        waypoints.push_back(std::move(wpt));
    }

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<gpx version=\"1.1\" creator=\"ttkit " + report.tool.version +
           "\" xmlns=\"http://www.topografix.com/GPX/1/1\">\n";
    for (const Waypoint& wpt : waypoints) {
        out += "  <wpt lat=\"" + render_degrees(wpt.pos.lat.value) + "\" lon=\"" +
               render_degrees(wpt.pos.lon.value) + "\">\n";
        if (wpt.time) {
            out += "    <time>" + *wpt.time + "</time>\n";
        }
        out += "    <name>" + xml_escape(wpt.name) + "</name>\n";
        if (!wpt.desc.empty()) {
            out += "    <desc>" + xml_escape(wpt.desc) + "</desc>\n";
        }
        out += "  </wpt>\n";
    }
    out += "</gpx>\n";
    return out;
}

std::string emit_timeline_csv(const EvidenceReport& report) {
    std::vector<TimelineRow> rows;

    for (const RouteStreamRecord& route : report.routes) {
        if (!route.departure_time || !route.departure_time_normalized) continue;
        add_timeline_row(rows, *route.departure_time, *route.departure_time_normalized,
                         "route_departure", route.departure.pos,
                         location_display_name(route.departure), route.source,
                         route.caveats);
    }

    if (report.dock && report.dock->time && report.dock->time_normalized) {
        add_timeline_row(rows, *report.dock->time, *report.dock->time_normalized, "dock",
                         report.dock->pos, "last_docked", report.dock->source,
                         report.dock->caveats);
    }

    for (const SubscriptionRecord& sub : report.subscriptions) {
        const std::pair<const std::optional<TimestampSpec>*, const char*> specs[] = {
            {&sub.start, "subscription_start"},
            {&sub.end, "subscription_end"},
            {&sub.last_valid, "subscription_last_valid"},
            {&sub.last_connection, "subscription_last_connection"},
            {&sub.account_date_last_update, "subscription_account_update"},
        };
        for (const auto& [spec, event_type] : specs) {
            if (!spec->has_value()) continue;
            const std::optional<NormalizedTime> normalized = try_normalize(**spec);
            if (!normalized) continue;
            add_timeline_row(rows, **spec, *normalized, event_type, std::nullopt,
                             sub.service, sub.source, sub.caveats);
        }
    }

    std::sort(rows.begin(), rows.end(), [](const TimelineRow& a, const TimelineRow& b) {
        if (a.seconds != b.seconds) return a.seconds < b.seconds;
        if (a.event_type != b.event_type) return a.event_type < b.event_type;
        return a.source < b.source;
    });

    std::string out =
        "timestamp_utc,timestamp_raw,time_basis,anomaly_alternative,event_type,"
        "lat,lon,name,source,caveats\n";
    for (const TimelineRow& row : rows) {
        out += csv_field(row.timestamp_utc);
        out += ',';
        out += csv_field(row.timestamp_raw);
        out += ',';
        out += csv_field(row.time_basis);
        out += ',';
        out += csv_field(row.anomaly_alternative);
        out += ',';
        out += csv_field(row.event_type);
        out += ',';
        out += csv_field(row.lat);
        out += ',';
        out += csv_field(row.lon);
        out += ',';
        out += csv_field(row.name);
        out += ',';
        out += csv_field(row.source);
        out += ',';
        out += csv_field(row.caveats);
        out += '\n';
    }
    return out;
}

}  // namespace ttkit
