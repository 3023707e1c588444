#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ttkit/caveats.hpp"
#include "ttkit/geo_time.hpp"
#include "ttkit/settings_xml.hpp"

namespace ttkit {

enum class LocTypeKind {
    MapTick,
    Address,
    Home,
    Poi,
    Undefined,
    Favourite,
    Gps,
    Unknown,
};

std::string_view to_string(LocTypeKind kind) noexcept;

/// Location type as stored. Unrecognized strings keep kind Unknown with the
/// original text preserved in raw.
struct LocType {
    LocTypeKind kind = LocTypeKind::Undefined;
    std::string raw;

    friend bool operator==(const LocType&, const LocType&) = default;
};

/// Parses the exact LOCTYP_* vocabulary (note LOCTYP_undefined is lowercase on
/// disk). Anything else becomes Unknown with the text carried along.
LocType parse_loc_type(std::string_view text);

enum class Origin {
    EngineRecents,
    AddressRecents,
    LastSelectedPoi,
    LastSelectedPoiData,
    LastSelectedSearchItem,
    RegularRouteLocHome,
    RegularRouteLocWork,
    HomeLocation,
    RouteStreamEndpoint,
    Ov2Favourite,
};

std::string_view to_string(Origin origin) noexcept;

struct LocationRecord {
    std::optional<std::string> user_name;    // Location_UserName
    std::optional<GeoPoint> pos;             // Location_UserPos (either shape)
    std::optional<std::string> loc_name;     // Location_LocName
    LocType loc_type;                        // Location_LocType
    std::optional<std::string> city;         // Location_CityName
    std::optional<std::string> house_number; // HouseNumber_Number
    Origin origin = Origin::EngineRecents;
    std::int64_t record_index = 0;
    CaveatSet caveats;
    // Every group leaf, preserved verbatim next to the typed interpretation.
    std::vector<std::pair<std::string, std::string>> raw_fields;
    std::string source;  // file path or image-offset label, set by the pipeline
};

/// Maps a record group onto the typed fields. Position strings that fail to
/// parse degrade to an absent position plus a caveat; the raw value stays in
/// raw_fields. For Origin::LastSelectedPoiData both axes are halved (stored
/// doubled) before range checks.
LocationRecord assemble_location(const RecordGroup& group, Origin origin);

struct HomeSelection {
    std::optional<LocationRecord> current;  // highest index; nullopt when no homes
    std::vector<LocationRecord> history;    // the rest, ascending index
};

/// The stored home with the highest index is the current one. Index ties are
/// broken toward later file order and flagged.
HomeSelection select_home_location(
    std::vector<std::pair<std::uint32_t, LocationRecord>> homes);

struct RouteStreamRecord {
    LocationRecord departure;
    LocationRecord destination;
    std::optional<TimestampSpec> departure_time;  // basis is always device_clock
    std::optional<NormalizedTime> departure_time_normalized;
    std::int64_t record_index = 0;
    CaveatSet caveats;
    // Route-level leaves that belong to neither endpoint.
    std::vector<std::pair<std::string, std::string>> raw_fields;
    std::string source;
};

/// Builds both endpoints and the departure time. A GPS-typed departure may be
/// the last known position rather than the true start; that caveat is
/// attached here.
RouteStreamRecord assemble_route_stream(const RecordGroup& group);

struct SubscriptionRecord {
    std::string service;
    std::optional<TimestampSpec> start;
    std::optional<TimestampSpec> end;
    std::optional<std::string> username;
    std::optional<std::string> password;
    // The server-time family, always anomaly-flagged.
    std::optional<TimestampSpec> last_valid;
    std::optional<TimestampSpec> last_connection;
    std::optional<TimestampSpec> account_date_last_update;
    std::int64_t record_index = 0;
    CaveatSet caveats;
    std::vector<std::pair<std::string, std::string>> raw_fields;
    std::string source;
};

SubscriptionRecord assemble_subscription(const RecordGroup& group);

struct DockEvent {
    std::optional<GeoPoint> pos;            // LastDockedPositionX / Y
    std::optional<TimestampSpec> time;      // LastDockedTime, unit = minutes
    std::optional<NormalizedTime> time_normalized;
    CaveatSet caveats;
    std::string source;
};

struct SearchHistory {
    std::vector<std::string> terms;  // unique, store order
    CaveatSet caveats;
};

struct LastKnownGps {
    std::optional<std::int64_t> x;  // raw axis values as stored
    std::optional<std::int64_t> y;
    std::optional<GeoPoint> pos;    // both axes present and in range
    CaveatSet caveats;              // always carries the no-GPS-time caveat
    std::string source;
};

/// Nothing stores a timestamp next to this position; the caveat says so.
/// Returns nullopt when both axes are absent.
std::optional<LastKnownGps> assemble_last_known_gps(
    const std::optional<std::string>& x_value,
    const std::optional<std::string>& y_value);

struct NavkitSummary {
    HomeSelection homes;
    std::vector<SubscriptionRecord> subscriptions;
    std::optional<DockEvent> dock;
    std::optional<UserTimeOffset> user_time_offset;
    std::optional<ArrivalTime> arrival_time;
    SearchHistory search_history;
    // Reminder keys the application never lets the user change; raw text.
    std::vector<std::pair<std::string, std::string>> reminder_dates;
    std::vector<RecordGroup> unmapped;  // unknown collections, preserved
    CaveatSet caveats;
};

/// Routes every group of a NavkitSettings store to its decoder. Unknown
/// collections land in `unmapped`, never on the floor.
NavkitSummary assemble_navkit(const std::vector<RecordGroup>& groups);

}  // namespace ttkit
