#include "ttkit/records.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ttkit {
namespace {

std::optional<std::int64_t> parse_int(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t i = 0;
    bool negative = false;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        i = 1;
        if (i == text.size()) return std::nullopt;
    }
    std::int64_t value = 0;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c < '0' || c > '9') return std::nullopt;
        if (value > (INT64_MAX - (c - '0')) / 10) return std::nullopt;
        value = value * 10 + (c - '0');
    }
    return negative ? -value : value;
}

std::string_view last_component(std::string_view subpath) noexcept {
    const std::size_t slash = subpath.rfind('/');
    return slash == std::string_view::npos ? subpath : subpath.substr(slash + 1);
}

// Exact subpath match first, then first field whose final path component
// matches (covers leaves one container deeper than expected).
const GroupField* find_leaf(const RecordGroup& group, std::string_view name) {
    if (const GroupField* exact = group.find(name)) return exact;
    for (const GroupField& f : group.fields) {
        if (last_component(f.subpath) == name) return &f;
    }
    return nullptr;
}

std::optional<std::string> leaf_value(const RecordGroup& group, std::string_view name) {
    const GroupField* f = find_leaf(group, name);
    if (f == nullptr) return std::nullopt;
    return f->value;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
    const auto lower = [](char c) {
        return c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c;
    };
    if (needle.size() > haystack.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        std::size_t j = 0;
        while (j < needle.size() && lower(haystack[i + j]) == lower(needle[j])) ++j;
        if (j == needle.size()) return true;
    }
    return false;
}

// Halves one axis of a doubled LastSelectedPoiData coordinate.
std::optional<std::int32_t> halve_axis(std::int64_t raw, Axis axis, CaveatSet& caveats) {
    if (raw > INT32_MAX || raw < INT32_MIN) return std::nullopt;
    const HalvedCoordinate halved = halve_poi_coordinate(static_cast<std::int32_t>(raw));
    if (halved.precision_loss) add_caveat(caveats, caveat::kHalvedOdd);
    if (!CoordinateE5::in_range(halved.value, axis)) return std::nullopt;
    return halved.value;
}

void attach_position(LocationRecord& out, const RecordGroup& group, bool halve) {
    const auto finish = [&](std::int64_t x, std::int64_t y) {
        std::optional<std::int32_t> lon;
        std::optional<std::int32_t> lat;
        if (halve) {
            lon = halve_axis(x, Axis::Lon, out.caveats);
            lat = halve_axis(y, Axis::Lat, out.caveats);
        } else {
            if (CoordinateE5::in_range(x, Axis::Lon)) lon = static_cast<std::int32_t>(x);
            if (CoordinateE5::in_range(y, Axis::Lat)) lat = static_cast<std::int32_t>(y);
        }
        if (lon && lat) {
            out.pos = GeoPoint{{*lon}, {*lat}};
            add_caveat(out.caveats, caveat::kDatumAssumed);
        } else {
            add_caveat(out.caveats, caveat::kPositionUnparseable);
        }
    };

    if (const GroupField* pos = find_leaf(group, "Location_UserPos")) {
        try {
            const auto [x, y] = parse_position_pair(pos->value);
            finish(x, y);
        } catch (const FormatError&) {
            add_caveat(out.caveats, caveat::kPositionUnparseable);
        }
        return;
    }

    const GroupField* xf = find_leaf(group, "Location_UserPosX");
    const GroupField* yf = find_leaf(group, "Location_UserPosY");
    if (xf == nullptr && yf == nullptr) return;  // no position stored at all
    if (xf == nullptr || yf == nullptr) {
        add_caveat(out.caveats, caveat::kPartialPoint);
        return;
    }
    const auto x = parse_int(xf->value);
    const auto y = parse_int(yf->value);
    if (!x || !y) {
        add_caveat(out.caveats, caveat::kPositionUnparseable);
        return;
    }
    finish(*x, *y);
}

RecordGroup subgroup(const RecordGroup& group, std::string_view prefix) {
    RecordGroup out;
    out.root = group.root;
    out.collection = std::string(prefix);
    out.record_index = group.record_index;
    const std::string lead = std::string(prefix) + "/";
    for (const GroupField& f : group.fields) {
        if (f.subpath.starts_with(lead)) {
            GroupField stripped = f;
            stripped.subpath = f.subpath.substr(lead.size());
            out.fields.push_back(std::move(stripped));
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(LocTypeKind kind) noexcept {
    switch (kind) {
        case LocTypeKind::MapTick: return "map_tick";
        case LocTypeKind::Address: return "address";
        case LocTypeKind::Home: return "home";
        case LocTypeKind::Poi: return "poi";
        case LocTypeKind::Undefined: return "undefined";
        case LocTypeKind::Favourite: return "favourite";
        case LocTypeKind::Gps: return "gps";
        case LocTypeKind::Unknown: return "unknown";
    }
    return "unknown";
}

LocType parse_loc_type(std::string_view text) {
    // The on-disk vocabulary; note the lowercase tail of LOCTYP_undefined.
    if (text == "LOCTYP_MAPTICK") return {LocTypeKind::MapTick, std::string(text)};
    if (text == "LOCTYP_ADDRESS") return {LocTypeKind::Address, std::string(text)};
    if (text == "LOCTYP_HOME") return {LocTypeKind::Home, std::string(text)};
    if (text == "LOCTYP_POI") return {LocTypeKind::Poi, std::string(text)};
    if (text == "LOCTYP_undefined") return {LocTypeKind::Undefined, std::string(text)};
    if (text == "LOCTYP_FAVOURITE") return {LocTypeKind::Favourite, std::string(text)};
    if (text == "LOCTYP_GPS") return {LocTypeKind::Gps, std::string(text)};
    return {LocTypeKind::Unknown, std::string(text)};
}

std::string_view to_string(Origin origin) noexcept {
    switch (origin) {
        case Origin::EngineRecents: return "engine_recents";
        case Origin::AddressRecents: return "address_recents";
        case Origin::LastSelectedPoi: return "last_selected_poi";
        case Origin::LastSelectedPoiData: return "last_selected_poi_data";
        case Origin::LastSelectedSearchItem: return "last_selected_search_item";
        case Origin::RegularRouteLocHome: return "regular_route_home";
        case Origin::RegularRouteLocWork: return "regular_route_work";
        case Origin::HomeLocation: return "home_location";
        case Origin::RouteStreamEndpoint: return "route_stream_endpoint";
        case Origin::Ov2Favourite: return "ov2_favourite";
    }
    return "unknown";
}

LocationRecord assemble_location(const RecordGroup& group, Origin origin) {
    LocationRecord out;
    out.origin = origin;
    out.record_index = group.record_index;
    out.caveats = group.caveats;
    out.raw_fields.reserve(group.fields.size());
    for (const GroupField& f : group.fields) {
        out.raw_fields.emplace_back(f.subpath, f.value);
    }

    out.user_name = leaf_value(group, "Location_UserName");
    out.loc_name = leaf_value(group, "Location_LocName");
    out.city = leaf_value(group, "Location_CityName");
    out.house_number = leaf_value(group, "HouseNumber_Number");
    if (const auto type_text = leaf_value(group, "Location_LocType")) {
        out.loc_type = parse_loc_type(*type_text);
    }
    if (out.loc_type.kind == LocTypeKind::Gps) {
        add_caveat(out.caveats, caveat::kVisited);
    }
    if (origin == Origin::RegularRouteLocHome || origin == Origin::RegularRouteLocWork) {
        add_caveat(out.caveats, caveat::kExperimental);
    }

    attach_position(out, group, origin == Origin::LastSelectedPoiData);
    return out;
}

HomeSelection select_home_location(
    std::vector<std::pair<std::uint32_t, LocationRecord>> homes) {
    HomeSelection out;
    if (homes.empty()) return out;

    // Later file order wins on equal indices, hence >= while scanning forward.
    std::size_t best = 0;
    bool tie = false;
    for (std::size_t i = 1; i < homes.size(); ++i) {
        if (homes[i].first >= homes[best].first) {
            tie = homes[i].first == homes[best].first;
            best = i;
        }
    }
    out.current = std::move(homes[best].second);
    if (tie) add_caveat(out.current->caveats, caveat::kHomeIndexTie);

    std::vector<std::pair<std::uint32_t, LocationRecord>> rest;
    rest.reserve(homes.size() - 1);
    for (std::size_t i = 0; i < homes.size(); ++i) {
        if (i != best) rest.push_back(std::move(homes[i]));
    }
    std::stable_sort(rest.begin(), rest.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    out.history.reserve(rest.size());
    for (auto& [index, record] : rest) {
        out.history.push_back(std::move(record));
    }
    return out;
}

RouteStreamRecord assemble_route_stream(const RecordGroup& group) {
    RouteStreamRecord out;
    out.record_index = group.record_index;
    out.caveats = group.caveats;

    const RecordGroup departure = subgroup(group, "RouteStream_Departure");
    const RecordGroup destination = subgroup(group, "RouteStream_Destination");
    out.departure = assemble_location(departure, Origin::RouteStreamEndpoint);
    out.destination = assemble_location(destination, Origin::RouteStreamEndpoint);
    if (destination.fields.empty()) {
        add_caveat(out.caveats, caveat::kMissingDestination);
    }

    for (const GroupField& f : group.fields) {
        if (!f.subpath.starts_with("RouteStream_Departure/") &&
            !f.subpath.starts_with("RouteStream_Destination/")) {
            out.raw_fields.emplace_back(f.subpath, f.value);
        }
    }

    if (const auto raw = leaf_value(group, "RouteStream_DepartureTime")) {
        if (const auto seconds = parse_int(*raw)) {
            TimestampSpec spec;
            spec.raw = *seconds;
            spec.unit = TimeUnit::Seconds;
            spec.basis = TimeBasis::DeviceClock;
            out.departure_time = spec;
            out.departure_time_normalized = normalize_timestamp(spec);
            merge_caveats(out.caveats, out.departure_time_normalized->caveats);
        } else {
            add_caveat(out.caveats, caveat::kUnparseableTime);
        }
    } else {
        add_caveat(out.caveats, caveat::kNoDepartureTime);
    }

    if (out.departure.loc_type.kind == LocTypeKind::Gps) {
        add_caveat(out.caveats, caveat::kMaybeLastKnown);
    }
    return out;
}

SubscriptionRecord assemble_subscription(const RecordGroup& group) {
    SubscriptionRecord out;
    out.record_index = group.record_index;
    out.caveats = group.caveats;
    out.raw_fields.reserve(group.fields.size());
    for (const GroupField& f : group.fields) {
        out.raw_fields.emplace_back(f.subpath, f.value);
    }

    const auto time_spec = [&](const std::string& value, bool anomaly)
        -> std::optional<TimestampSpec> {
        const auto raw = parse_int(value);
        if (!raw) {
            add_caveat(out.caveats, caveat::kUnparseableTime);
            return std::nullopt;
        }
        TimestampSpec spec;
        spec.raw = *raw;
        spec.unit = TimeUnit::Seconds;
        spec.basis = TimeBasis::ServerClock;
        spec.anomaly_flag = anomaly;
        return spec;
    };

    for (const GroupField& f : group.fields) {
        const std::string_view leaf = last_component(f.subpath);
        // Only the three server-family keys have stable spellings across
        // observed stores; start/end/credential key names vary by firmware,
        // so those match by word heuristics.
        if (leaf == "ConnectionData_LastValidTime") {
            if (!out.last_valid) out.last_valid = time_spec(f.value, true);
        } else if (leaf == "ConnectionData_LastConnectionTime") {
            if (!out.last_connection) out.last_connection = time_spec(f.value, true);
        } else if (leaf == "AccountInfo_DatelastUpdate") {
            if (!out.account_date_last_update) {
                out.account_date_last_update = time_spec(f.value, true);
            }
        } else if (contains_ci(leaf, "username")) {
            if (!out.username) out.username = f.value;
        } else if (contains_ci(leaf, "password")) {
            if (!out.password) out.password = f.value;
        } else if (contains_ci(leaf, "service")) {
            if (out.service.empty()) out.service = f.value;
        } else if (contains_ci(leaf, "start")) {
            if (!out.start) out.start = time_spec(f.value, false);
        } else if (contains_ci(leaf, "end") || contains_ci(leaf, "expiry")) {
            if (!out.end) out.end = time_spec(f.value, false);
        }
    }
    return out;
}

std::optional<LastKnownGps> assemble_last_known_gps(
    const std::optional<std::string>& x_value,
    const std::optional<std::string>& y_value) {
    if (!x_value && !y_value) return std::nullopt;

    LastKnownGps out;
    add_caveat(out.caveats, caveat::kNoGpsTime);
    if (x_value) out.x = parse_int(*x_value);
    if (y_value) out.y = parse_int(*y_value);
    if (x_value && !out.x) add_caveat(out.caveats, caveat::kPositionUnparseable);
    if (y_value && !out.y) add_caveat(out.caveats, caveat::kPositionUnparseable);

    if (!x_value || !y_value) {
        add_caveat(out.caveats, caveat::kPartialPoint);
        return out;
    }
    if (out.x && out.y && CoordinateE5::in_range(*out.x, Axis::Lon) &&
        CoordinateE5::in_range(*out.y, Axis::Lat)) {
        out.pos = GeoPoint{{static_cast<std::int32_t>(*out.x)},
                           {static_cast<std::int32_t>(*out.y)}};
        add_caveat(out.caveats, caveat::kDatumAssumed);
    } else if (out.x && out.y) {
        add_caveat(out.caveats, caveat::kPositionUnparseable);
    }
    return out;
}

NavkitSummary assemble_navkit(const std::vector<RecordGroup>& groups) {
    static const std::set<std::string, std::less<>> kReminderKeys = {
        "MapUpdateLastReminderDate",
        "LastMapShareConnectionReminder",
        "LMGDisplayDate",
        "LastMapShareSubscriptionReminder",
        "LastTimeTempBTEnabled",
    };

    NavkitSummary out;
    std::vector<std::pair<std::uint32_t, LocationRecord>> homes;
    std::optional<std::string> dock_x;
    std::optional<std::string> dock_y;
    std::optional<std::string> dock_time;
    std::vector<std::pair<std::uint32_t, std::string>> search_terms;

    const auto scalar = [](const RecordGroup& g) -> std::optional<std::string> {
        return g.value_of(g.collection);
    };

    for (const RecordGroup& group : groups) {
        const std::string& c = group.collection;
        if (c == "UP_HomeLocations_Location") {
            homes.emplace_back(group.record_index,
                               assemble_location(group, Origin::HomeLocation));
        } else if (c == "TTPlusManager_Subscription") {
            out.subscriptions.push_back(assemble_subscription(group));
        } else if (c == "LastDockedPositionX") {
            dock_x = scalar(group);
        } else if (c == "LastDockedPositionY") {
            dock_y = scalar(group);
        } else if (c == "LastDockedTime") {
            dock_time = scalar(group);
        } else if (c == "UserTimeOffset") {
            const auto value = scalar(group);
            const auto raw = value ? parse_int(*value) : std::nullopt;
            bool decoded = false;
            if (raw) {
                try {
                    out.user_time_offset = decode_user_time_offset(*raw);
                    decoded = true;
                } catch (const RangeError&) {
                }
            }
            if (!decoded) {
                add_caveat(out.caveats, caveat::kUnparseableTime);
                out.unmapped.push_back(group);
            }
        } else if (c == "ArrivalTime") {
            const auto value = scalar(group);
            const auto raw = value ? parse_int(*value) : std::nullopt;
            if (raw) {
                out.arrival_time = decode_arrival_time(*raw);
            } else {
                add_caveat(out.caveats, caveat::kUnparseableTime);
                out.unmapped.push_back(group);
            }
        } else if (c == "LocalSearchService_Search") {
            if (const auto term = leaf_value(group, "Search_Term")) {
                search_terms.emplace_back(group.record_index, *term);
            } else {
                out.unmapped.push_back(group);
            }
        } else if (kReminderKeys.count(c) != 0) {
            out.reminder_dates.emplace_back(c, scalar(group).value_or(""));
        } else {
            out.unmapped.push_back(group);
        }
    }

    out.homes = select_home_location(std::move(homes));

    if (dock_x || dock_y || dock_time) {
        DockEvent dock;
        if (dock_x && dock_y) {
            const auto x = parse_int(*dock_x);
            const auto y = parse_int(*dock_y);
            if (x && y && CoordinateE5::in_range(*x, Axis::Lon) &&
                CoordinateE5::in_range(*y, Axis::Lat)) {
                dock.pos = GeoPoint{{static_cast<std::int32_t>(*x)},
                                    {static_cast<std::int32_t>(*y)}};
                add_caveat(dock.caveats, caveat::kDatumAssumed);
            } else {
                add_caveat(dock.caveats, caveat::kPositionUnparseable);
            }
        } else if (dock_x || dock_y) {
            add_caveat(dock.caveats, caveat::kPartialPoint);
        }
        if (dock_time) {
            if (const auto minutes = parse_int(*dock_time)) {
                TimestampSpec spec;
                spec.raw = *minutes;
                spec.unit = TimeUnit::Minutes;
                spec.basis = TimeBasis::DeviceClock;
                dock.time = spec;
                try {
                    dock.time_normalized = normalize_timestamp(spec);
                    merge_caveats(dock.caveats, dock.time_normalized->caveats);
                } catch (const RangeError&) {
                    add_caveat(dock.caveats, caveat::kUnparseableTime);
                }
            } else {
                add_caveat(dock.caveats, caveat::kUnparseableTime);
            }
        }
        out.dock = std::move(dock);
    }

    std::stable_sort(search_terms.begin(), search_terms.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::set<std::string> seen;
    for (auto& [index, term] : search_terms) {
        if (seen.insert(term).second) {
            out.search_history.terms.push_back(std::move(term));
        } else {
            add_caveat(out.search_history.caveats, caveat::kDuplicateSearchTerm);
        }
    }

    std::stable_sort(out.subscriptions.begin(), out.subscriptions.end(),
                     [](const SubscriptionRecord& a, const SubscriptionRecord& b) {
                         return a.record_index < b.record_index;
                     });
    return out;
}

}  // namespace ttkit
