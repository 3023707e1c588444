#include "ttkit/fixture.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <set>

#include "json.hpp"
#include "ttkit/base64.hpp"

namespace ttkit {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<const char*, 10> kStreets = {
    "Hoofdstraat",  "Kerkstraat",       "Molenweg",     "Dorpsstraat",
    "Stationsweg",  "Schoolstraat",     "Julianastraat", "Beatrixstraat",
    "Oranjestraat", "Wilhelminastraat",
};
constexpr std::array<const char*, 10> kCities = {
    "Gouda",  "Utrecht", "Delft",  "Leiden",    "Haarlem",
    "Arnhem", "Breda",   "Zwolle", "Eindhoven", "Groningen",
};
// One entry carries non-ASCII UTF-8 so text paths get exercised end to end.
constexpr std::array<const char*, 4> kVenues = {
    "Caf\xC3\xA9 Centraal", "Bakker & Zn", "Museumplein", "Grote Markt",
};
constexpr std::array<const char*, 7> kLocTypes = {
    "LOCTYP_ADDRESS", "LOCTYP_GPS",  "LOCTYP_POI",       "LOCTYP_MAPTICK",
    "LOCTYP_FAVOURITE", "LOCTYP_HOME", "LOCTYP_undefined",
};
constexpr std::array<const char*, 6> kSearchPool = {
    "bakery", "fuel", "parking", "pharmacy", "station", "museum",
};
constexpr std::array<const char*, 4> kServices = {
    "SafetyCameras", "TrafficInfo", "WeatherService", "BuddiesService",
};
constexpr std::array<const char*, 4> kUserNames = {
    "jdevries", "mjanssen", "pbakker", "avisser",
};
constexpr std::array<const char*, 4> kPassWords = {
    "tulip2010", "w1ndm0len", "grachten99", "zeeland7",
};

// mt19937_64 output is pinned by the standard, so raw draws are portable.
// The bounded sampler is a plain modulo: the tiny bias is irrelevant for
// fixtures and the result never depends on library internals.
struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    std::uint64_t below(std::uint64_t n) { return engine() % n; }

    std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(
                        below(static_cast<std::uint64_t>(hi - lo) + 1));
    }
};

template <std::size_t N>
const char* pick(Rng& rng, const std::array<const char*, N>& pool) {
    return pool[rng.below(N)];
}

// Dutch coordinate box, E5 fixed point (lon 3.3..7.1, lat 50.7..53.3).
std::int32_t nl_lon(Rng& rng) { return static_cast<std::int32_t>(rng.range(330'000, 710'000)); }
std::int32_t nl_lat(Rng& rng) { return static_cast<std::int32_t>(rng.range(5'070'000, 5'330'000)); }

// Draw order is part of the fixture contract: street, house number, city.
std::string place_name(Rng& rng) {
    const char* street = pick(rng, kStreets);
    const std::int64_t number = rng.range(1, 150);
    const char* city = pick(rng, kCities);
    return std::string(street) + " " + std::to_string(number) + ", " + city;
}

// Independent of the library's coordinate renderer on purpose: the manifest
// is the oracle the decoder is judged against.
std::string degrees5(std::int32_t value) {
    const bool negative = value < 0;
    const std::int64_t magnitude = negative ? -static_cast<std::int64_t>(value) : value;
    std::string fraction = std::to_string(magnitude % 100'000);
    fraction.insert(0, 5 - fraction.size(), '0');
    return (negative ? "-" : "") + std::to_string(magnitude / 100'000) + "." + fraction;
}

std::string offset_rendering(std::int64_t seconds) {
    const char sign = seconds < 0 ? '-' : '+';
    const std::int64_t magnitude = seconds < 0 ? -seconds : seconds;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%c%02lld:%02lld:%02lld", sign,
                  static_cast<long long>(magnitude / 3600),
                  static_cast<long long>((magnitude % 3600) / 60),
                  static_cast<long long>(magnitude % 60));
    return buf;
}

std::string idx5(std::uint32_t index) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%05u", index);
    return buf;
}

std::string seg(const std::string& name, std::uint32_t index) {
    return name + "*" + idx5(index) + "*";
}

std::string store_line(const std::string& path, std::string_view decoded) {
    return "  <string name=\"" + path + "\">" + base64_encode(decoded) + "</string>";
}

std::string wrap_store(const std::vector<std::string>& lines) {
    std::string out = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<Settings>\n";
    for (const std::string& line : lines) {
        out += line;
        out += '\n';
    }
    out += "</Settings>\n";
    return out;
}

void shuffle_lines(std::vector<std::string>& lines, Rng& rng) {
    for (std::size_t i = lines.size(); i > 1; --i) {
        std::swap(lines[i - 1], lines[rng.below(i)]);
    }
}

// n distinct record indices drawn from a sparse range, ascending. Stores in
// the wild keep non-consecutive indices; the fixture bakes that in.
std::vector<std::uint32_t> sparse_indices(Rng& rng, std::size_t n) {
    std::set<std::uint32_t> out;
    const std::uint64_t space = 3 * static_cast<std::uint64_t>(n) + 5;
    while (out.size() < n) {
        out.insert(static_cast<std::uint32_t>(rng.below(space)));
    }
    return {out.begin(), out.end()};
}

std::vector<std::uint8_t> text_bytes(const std::string& text) {
    return {text.begin(), text.end()};
}

constexpr std::string_view kMapRoot = "MapSettings";
constexpr std::string_view kNavRoot = "NavkitSettings";

// root*00000*/container*00000*/collection*k*/leaf*k*
std::string collection_key(std::string_view root, const std::string& container,
                           const std::string& collection, std::uint32_t index,
                           const std::vector<std::string>& tail) {
    std::string path = seg(std::string(root), 0);
    if (!container.empty()) path += "/" + seg(container, 0);
    path += "/" + seg(collection, index);
    for (const std::string& part : tail) path += "/" + seg(part, index);
    return path;
}

std::string scalar_key(std::string_view root, const std::string& name) {
    return seg(std::string(root), 0) + "/" + seg(name, 0);
}

NoiseImage noise_image_impl(Rng& rng, std::uint64_t size, std::size_t records,
                            std::size_t fragments);

}  // namespace

Fixture generate_fixture(const FixtureOptions& options) {
    Rng rng(options.seed);
    const std::size_t n = options.records;

    Fixture out;
    ordered_json manifest;
    manifest["seed"] = options.seed;
    manifest["records"] = n;

    std::string model_id;
    for (int i = 0; i < 8; ++i) model_id += "0123456789ABCDEF"[rng.below(16)];
    manifest["model_id"] = model_id;

    const std::string fav_path = "tomtom/Favorites.ov2";
    const std::string map_path = "tomtom/Benelux_" + model_id + ".xml";
    const std::string nav_path = "tomtom/NavkitSettings.xml";
    {
        ordered_json files;
        files["favourites"] = fav_path;
        files["map_store"] = map_path;
        files["navkit_store"] = nav_path;
        manifest["files"] = std::move(files);
    }
    manifest["source_kind"] = "android_application";

    // ---- ov2 favourites ----
    const bool ov2_extras = n >= 3;  // one skipper up front, one deleted at the end
    Ov2File ov2;
    ordered_json fav_manifest = ordered_json::array();
    std::vector<Ov2Record> pois;
    pois.reserve(n);
    std::uint64_t poi_bytes = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string name = place_name(rng);
        const std::int32_t lon = nl_lon(rng);
        const std::int32_t lat = nl_lat(rng);
        Ov2Record poi = make_simple_poi(lon, lat, name);
        poi_bytes += poi.total_len;
        ordered_json entry;
        entry["index"] = ov2_extras ? i + 1 : i;
        entry["name"] = name;
        entry["lon"] = lon;
        entry["lat"] = lat;
        entry["lon_degrees"] = degrees5(lon);
        entry["lat_degrees"] = degrees5(lat);
        fav_manifest.push_back(std::move(entry));
        pois.push_back(std::move(poi));
    }
    if (ov2_extras) {
        Ov2Record skipper;
        skipper.kind = Ov2Kind::Skipper;
        skipper.total_len = 21 + static_cast<std::uint32_t>(poi_bytes);
        skipper.bbox_min = GeoPoint{{330'000}, {5'070'000}};
        skipper.bbox_max = GeoPoint{{710'000}, {5'330'000}};
        ov2.records.push_back(std::move(skipper));
    }
    for (Ov2Record& poi : pois) ov2.records.push_back(std::move(poi));
    if (ov2_extras) {
        Ov2Record deleted;
        deleted.kind = Ov2Kind::Deleted;
        deleted.payload.resize(6);
        for (std::uint8_t& byte : deleted.payload) {
            byte = static_cast<std::uint8_t>(rng.below(256));
        }
        deleted.total_len = 5 + static_cast<std::uint32_t>(deleted.payload.size());
        ov2.records.push_back(std::move(deleted));
    }
    manifest["favourites"] = std::move(fav_manifest);
    manifest["ov2_extra_kinds"] =
        ov2_extras ? ordered_json::array({"deleted", "skipper"}) : ordered_json::array();
    out.files.push_back({fav_path, serialize_ov2(ov2)});

    // ---- map-settings store ----
    std::vector<std::string> map_lines;
    const auto map_key = [](const std::string& container, const std::string& collection,
                            std::uint32_t index, const std::vector<std::string>& tail) {
        return collection_key(kMapRoot, container, collection, index, tail);
    };

    ordered_json recents_manifest = ordered_json::array();
    for (std::size_t i = 0; const std::uint32_t index : sparse_indices(rng, n)) {
        const std::string loc_name = place_name(rng);
        const char* loc_type = kLocTypes[i % kLocTypes.size()];
        const std::int32_t lon = nl_lon(rng);
        const std::int32_t lat = nl_lat(rng);
        std::string pos = "(" + std::to_string(lon) + "; " + std::to_string(lat);
        if (i % 3 == 2) pos += ")";  // the closing parenthesis is optional on disk
        map_lines.push_back(store_line(
            map_key("EngineRecents", "EngineRecents_Recent", index, {"Location_LocName"}),
            loc_name));
        map_lines.push_back(store_line(
            map_key("EngineRecents", "EngineRecents_Recent", index, {"Location_LocType"}),
            loc_type));
        map_lines.push_back(store_line(
            map_key("EngineRecents", "EngineRecents_Recent", index, {"Location_UserPos"}),
            pos));
        if (i % 2 == 0) {
            map_lines.push_back(store_line(
                map_key("EngineRecents", "EngineRecents_Recent", index,
                        {"Location_Line", "LineRec_MaxSpeed"}),
                std::to_string(rng.range(30, 130))));
        }
        ordered_json entry;
        entry["index"] = index;
        entry["loc_name"] = loc_name;
        entry["loc_type"] = loc_type;
        entry["lon"] = lon;
        entry["lat"] = lat;
        recents_manifest.push_back(std::move(entry));
        ++i;
    }
    manifest["recents"] = std::move(recents_manifest);

    ordered_json addresses_manifest = ordered_json::array();
    for (const std::uint32_t index : sparse_indices(rng, n)) {
        const std::string loc_name = place_name(rng);
        const char* city = pick(rng, kCities);
        const std::string house = std::to_string(rng.range(1, 200));
        const std::int32_t lon = nl_lon(rng);
        const std::int32_t lat = nl_lat(rng);
        map_lines.push_back(store_line(
            map_key("AddressRecents", "AddressRecents_Address", index, {"Location_LocName"}),
            loc_name));
        map_lines.push_back(store_line(
            map_key("AddressRecents", "AddressRecents_Address", index, {"Location_CityName"}),
            city));
        map_lines.push_back(store_line(
            map_key("AddressRecents", "AddressRecents_Address", index,
                    {"HouseNumber", "HouseNumber_Number"}),
            house));
        map_lines.push_back(store_line(
            map_key("AddressRecents", "AddressRecents_Address", index, {"Location_LocType"}),
            "LOCTYP_ADDRESS"));
        map_lines.push_back(store_line(
            map_key("AddressRecents", "AddressRecents_Address", index, {"Location_UserPosX"}),
            std::to_string(lon)));
        map_lines.push_back(store_line(
            map_key("AddressRecents", "AddressRecents_Address", index, {"Location_UserPosY"}),
            std::to_string(lat)));
        ordered_json entry;
        entry["index"] = index;
        entry["loc_name"] = loc_name;
        entry["city"] = city;
        entry["house_number"] = house;
        entry["lon"] = lon;
        entry["lat"] = lat;
        addresses_manifest.push_back(std::move(entry));
    }
    manifest["addresses"] = std::move(addresses_manifest);

    const std::size_t route_count = std::min<std::size_t>(n, 4);
    ordered_json routes_manifest = ordered_json::array();
    for (std::uint32_t k = 0; k < route_count; ++k) {
        const std::string dep_name = place_name(rng);
        const char* dep_type = k == 0 ? "LOCTYP_GPS" : "LOCTYP_ADDRESS";
        const std::int32_t dep_lon = nl_lon(rng);
        const std::int32_t dep_lat = nl_lat(rng);
        const std::string dst_name = place_name(rng);
        const std::int32_t dst_lon = nl_lon(rng);
        const std::int32_t dst_lat = nl_lat(rng);
        map_lines.push_back(store_line(
            map_key("RouteStream", "RouteStream_Route", k,
                    {"RouteStream_Departure", "Location_LocName"}),
            dep_name));
        map_lines.push_back(store_line(
            map_key("RouteStream", "RouteStream_Route", k,
                    {"RouteStream_Departure", "Location_LocType"}),
            dep_type));
        map_lines.push_back(store_line(
            map_key("RouteStream", "RouteStream_Route", k,
                    {"RouteStream_Departure", "Location_UserPos"}),
            "(" + std::to_string(dep_lon) + "; " + std::to_string(dep_lat)));
        map_lines.push_back(store_line(
            map_key("RouteStream", "RouteStream_Route", k,
                    {"RouteStream_Destination", "Location_LocName"}),
            dst_name));
        map_lines.push_back(store_line(
            map_key("RouteStream", "RouteStream_Route", k,
                    {"RouteStream_Destination", "Location_LocType"}),
            "LOCTYP_ADDRESS"));
        map_lines.push_back(store_line(
            map_key("RouteStream", "RouteStream_Route", k,
                    {"RouteStream_Destination", "Location_UserPos"}),
            "(" + std::to_string(dst_lon) + "; " + std::to_string(dst_lat)));

        ordered_json entry;
        entry["index"] = k;
        entry["departure_name"] = dep_name;
        entry["departure_loc_type"] = dep_type;
        entry["departure_lon"] = dep_lon;
        entry["departure_lat"] = dep_lat;
        entry["destination_name"] = dst_name;
        entry["destination_lon"] = dst_lon;
        entry["destination_lat"] = dst_lat;
        if (k == 1) {
            // One route without a stored departure time, as seen in practice.
            entry["departure_time_raw"] = nullptr;
        } else {
            const std::int64_t departed = rng.range(1'230'000'000, 1'410'000'000);
            map_lines.push_back(store_line(
                map_key("RouteStream", "RouteStream_Route", k, {"RouteStream_DepartureTime"}),
                std::to_string(departed)));
            entry["departure_time_raw"] = departed;
        }
        routes_manifest.push_back(std::move(entry));
    }
    manifest["routes"] = std::move(routes_manifest);

    ordered_json selected_manifest = ordered_json::array();
    ordered_json last_gps_manifest = nullptr;
    if (n >= 1) {
        const auto holder_key = [](const std::string& holder, const std::string& leaf) {
            return collection_key(kMapRoot, "", holder, 0, {leaf});
        };

        const std::string poi_name = std::string(pick(rng, kVenues)) + ", " + pick(rng, kCities);
        const std::string poi_type = std::to_string(rng.range(0, 9999));
        map_lines.push_back(store_line(holder_key("LastSelectedPoi", "Location_LocName"), poi_name));
        map_lines.push_back(store_line(holder_key("LastSelectedPoi", "Location_PoiType"), poi_type));
        {
            ordered_json entry;
            entry["origin"] = "last_selected_poi";
            entry["loc_name"] = poi_name;
            selected_manifest.push_back(std::move(entry));
        }

        // Stored doubled; odd parity bits exercise the halving caveat.
        const std::int32_t data_lon = nl_lon(rng);
        const std::int32_t data_lat = nl_lat(rng);
        const std::int64_t lon_parity = rng.range(0, 1);
        const std::int64_t lat_parity = rng.range(0, 1);
        map_lines.push_back(store_line(
            holder_key("LastSelectedPoiData", "Location_UserPosX"),
            std::to_string(2 * static_cast<std::int64_t>(data_lon) + lon_parity)));
        map_lines.push_back(store_line(
            holder_key("LastSelectedPoiData", "Location_UserPosY"),
            std::to_string(2 * static_cast<std::int64_t>(data_lat) + lat_parity)));
        {
            ordered_json entry;
            entry["origin"] = "last_selected_poi_data";
            entry["lon"] = data_lon;
            entry["lat"] = data_lat;
            entry["halved_odd"] = lon_parity == 1 || lat_parity == 1;
            selected_manifest.push_back(std::move(entry));
        }

        const std::string search_name = place_name(rng);
        map_lines.push_back(
            store_line(holder_key("LastSelectedSearchItem", "Location_LocName"), search_name));
        {
            ordered_json entry;
            entry["origin"] = "last_selected_search_item";
            entry["loc_name"] = search_name;
            selected_manifest.push_back(std::move(entry));
        }

        const std::int32_t reg_home_lon = nl_lon(rng);
        const std::int32_t reg_home_lat = nl_lat(rng);
        map_lines.push_back(store_line(
            holder_key("RegularRouteLocHome", "Location_UserPos"),
            "(" + std::to_string(reg_home_lon) + "; " + std::to_string(reg_home_lat) + ")"));
        {
            ordered_json entry;
            entry["origin"] = "regular_route_home";
            entry["lon"] = reg_home_lon;
            entry["lat"] = reg_home_lat;
            selected_manifest.push_back(std::move(entry));
        }

        const std::int32_t reg_work_lon = nl_lon(rng);
        const std::int32_t reg_work_lat = nl_lat(rng);
        map_lines.push_back(store_line(
            holder_key("RegularRouteLocWork", "Location_UserPos"),
            "(" + std::to_string(reg_work_lon) + "; " + std::to_string(reg_work_lat) + ")"));
        {
            ordered_json entry;
            entry["origin"] = "regular_route_work";
            entry["lon"] = reg_work_lon;
            entry["lat"] = reg_work_lat;
            selected_manifest.push_back(std::move(entry));
        }

        const std::int32_t gps_x = nl_lon(rng);
        const std::int32_t gps_y = nl_lat(rng);
        map_lines.push_back(store_line(scalar_key(kMapRoot, "LastKnownTrueGpsPosX"),
                                       std::to_string(gps_x)));
        map_lines.push_back(store_line(scalar_key(kMapRoot, "LastKnownTrueGpsPosY"),
                                       std::to_string(gps_y)));
        last_gps_manifest = ordered_json{{"x", gps_x}, {"y", gps_y}};

        map_lines.push_back(store_line(scalar_key(kMapRoot, "NeverAskedDefaultCountry"), "false"));
        map_lines.push_back(store_line(
            collection_key(kMapRoot, "SafetyCameraWarnings", "SafetyCameraWarnings_Warning", 7,
                           {"SafetyCameraWarnings_Warning_WarningDistance"}),
            "5000"));
    }
    manifest["last_selected"] = std::move(selected_manifest);
    manifest["last_gps"] = std::move(last_gps_manifest);

    shuffle_lines(map_lines, rng);
    out.files.push_back({map_path, text_bytes(wrap_store(map_lines))});

    // ---- navigation settings store (line order kept) ----
    std::vector<std::string> nav_lines;
    const auto nav_key = [](const std::string& container, const std::string& collection,
                            std::uint32_t index, const std::vector<std::string>& tail) {
        return collection_key(kNavRoot, container, collection, index, tail);
    };

    const std::size_t home_count = std::min<std::size_t>(n, 3);
    ordered_json homes_manifest = nullptr;
    if (home_count > 0) {
        ordered_json history = ordered_json::array();
        std::string current_name;
        std::int32_t current_lon = 0;
        std::int32_t current_lat = 0;
        for (std::uint32_t k = 0; k < home_count; ++k) {
            const std::string name = "Thuis " + std::string(pick(rng, kCities));
            const std::int32_t lon = nl_lon(rng);
            const std::int32_t lat = nl_lat(rng);
            nav_lines.push_back(store_line(
                nav_key("UP_HomeLocations", "UP_HomeLocations_Location", k,
                        {"Location_UserName"}),
                name));
            nav_lines.push_back(store_line(
                nav_key("UP_HomeLocations", "UP_HomeLocations_Location", k,
                        {"Location_LocType"}),
                "LOCTYP_HOME"));
            nav_lines.push_back(store_line(
                nav_key("UP_HomeLocations", "UP_HomeLocations_Location", k,
                        {"Location_UserPos"}),
                "(" + std::to_string(lon) + "; " + std::to_string(lat)));
            if (k + 1 == home_count) {
                current_name = name;
                current_lon = lon;
                current_lat = lat;
            } else {
                history.push_back(k);
            }
        }
        homes_manifest = ordered_json();
        homes_manifest["current_index"] = home_count - 1;
        homes_manifest["current_name"] = current_name;
        homes_manifest["current_lon"] = current_lon;
        homes_manifest["current_lat"] = current_lat;
        homes_manifest["history_indices"] = std::move(history);
    }
    manifest["homes"] = std::move(homes_manifest);

    const std::size_t sub_count = std::min<std::size_t>(n, 2);
    ordered_json subs_manifest = ordered_json::array();
    for (std::uint32_t k = 0; k < sub_count; ++k) {
        const char* service = kServices[k % kServices.size()];
        const char* username = pick(rng, kUserNames);
        const char* password = pick(rng, kPassWords);
        const std::int64_t start = rng.range(1'230'000'000, 1'370'000'000);
        const std::int64_t end = start + 31'536'000;
        const std::int64_t last_valid = start + rng.range(0, 30'000'000);
        const std::int64_t last_connection = start + rng.range(0, 30'000'000);
        const std::int64_t account_update = start + rng.range(0, 30'000'000);

        nav_lines.push_back(store_line(
            nav_key("TTPlusManager", "TTPlusManager_Subscription", k, {"Subscription_Service"}),
            service));
        nav_lines.push_back(store_line(
            nav_key("TTPlusManager", "TTPlusManager_Subscription", k, {"Subscription_Username"}),
            username));
        nav_lines.push_back(store_line(
            nav_key("TTPlusManager", "TTPlusManager_Subscription", k, {"Subscription_Password"}),
            password));
        nav_lines.push_back(store_line(
            nav_key("TTPlusManager", "TTPlusManager_Subscription", k, {"Subscription_StartTime"}),
            std::to_string(start)));
        nav_lines.push_back(store_line(
            nav_key("TTPlusManager", "TTPlusManager_Subscription", k, {"Subscription_EndTime"}),
            std::to_string(end)));
        nav_lines.push_back(store_line(
            nav_key("TTPlusManager", "TTPlusManager_Subscription", k,
                    {"ConnectionData", "ConnectionData_LastValidTime"}),
            std::to_string(last_valid)));
        nav_lines.push_back(store_line(
            nav_key("TTPlusManager", "TTPlusManager_Subscription", k,
                    {"ConnectionData", "ConnectionData_LastConnectionTime"}),
            std::to_string(last_connection)));
        nav_lines.push_back(store_line(
            nav_key("TTPlusManager", "TTPlusManager_Subscription", k,
                    {"AccountInfo", "AccountInfo_DatelastUpdate"}),
            std::to_string(account_update)));

        ordered_json entry;
        entry["index"] = k;
        entry["service"] = service;
        entry["username"] = username;
        entry["password"] = password;
        entry["start_raw"] = start;
        entry["end_raw"] = end;
        entry["last_valid_raw"] = last_valid;
        entry["last_connection_raw"] = last_connection;
        entry["account_update_raw"] = account_update;
        subs_manifest.push_back(std::move(entry));
    }
    manifest["subscriptions"] = std::move(subs_manifest);

    ordered_json dock_manifest = nullptr;
    ordered_json offset_manifest = nullptr;
    ordered_json arrival_manifest = nullptr;
    ordered_json reminder_manifest = nullptr;
    ordered_json search_manifest = ordered_json::array();
    bool search_duplicate = false;
    if (n >= 1) {
        const std::int32_t dock_x = nl_lon(rng);
        const std::int32_t dock_y = nl_lat(rng);
        const std::int64_t dock_minutes = rng.range(20'500'000, 23'500'000);
        nav_lines.push_back(store_line(scalar_key(kNavRoot, "LastDockedPositionX"),
                                       std::to_string(dock_x)));
        nav_lines.push_back(store_line(scalar_key(kNavRoot, "LastDockedPositionY"),
                                       std::to_string(dock_y)));
        nav_lines.push_back(store_line(scalar_key(kNavRoot, "LastDockedTime"),
                                       std::to_string(dock_minutes)));
        dock_manifest = ordered_json();
        dock_manifest["x"] = dock_x;
        dock_manifest["y"] = dock_y;
        dock_manifest["time_raw_minutes"] = dock_minutes;
        dock_manifest["time_seconds"] = dock_minutes * 60;

        const std::int64_t offset_raw = rng.range(-50'400, 50'400);
        nav_lines.push_back(store_line(scalar_key(kNavRoot, "UserTimeOffset"),
                                       std::to_string(offset_raw)));
        offset_manifest = ordered_json();
        offset_manifest["raw"] = offset_raw;
        offset_manifest["rendering"] = offset_rendering(offset_raw);

        const bool arrival_unset = rng.range(0, 1) == 0;
        const std::int64_t arrival_raw = arrival_unset ? 86'401 : rng.range(0, 86'400);
        nav_lines.push_back(store_line(scalar_key(kNavRoot, "ArrivalTime"),
                                       std::to_string(arrival_raw)));
        arrival_manifest = ordered_json();
        arrival_manifest["raw"] = arrival_raw;
        arrival_manifest["seconds_of_day"] =
            arrival_unset ? ordered_json(nullptr) : ordered_json(arrival_raw);

        const std::size_t term_count = std::min<std::size_t>(n, 4);
        std::vector<std::string> terms;
        std::set<std::string> seen;
        while (terms.size() < term_count) {
            const char* term = pick(rng, kSearchPool);
            if (seen.insert(term).second) terms.push_back(term);
        }
        for (std::uint32_t k = 0; k < terms.size(); ++k) {
            nav_lines.push_back(store_line(
                nav_key("LocalSearchService", "LocalSearchService_Search", k, {"Search_Term"}),
                terms[k]));
            search_manifest.push_back(terms[k]);
        }
        if (term_count >= 2) {
            // A repeated term under a fresh index; the decoder collapses it.
            nav_lines.push_back(store_line(
                nav_key("LocalSearchService", "LocalSearchService_Search",
                        static_cast<std::uint32_t>(terms.size()), {"Search_Term"}),
                terms[0]));
            search_duplicate = true;
        }

        const std::int64_t reminder_raw = rng.range(1'230'000'000, 1'410'000'000);
        nav_lines.push_back(store_line(scalar_key(kNavRoot, "MapUpdateLastReminderDate"),
                                       std::to_string(reminder_raw)));
        reminder_manifest = ordered_json();
        reminder_manifest["key"] = "MapUpdateLastReminderDate";
        reminder_manifest["value"] = std::to_string(reminder_raw);
    }
    manifest["dock"] = std::move(dock_manifest);
    manifest["user_time_offset"] = std::move(offset_manifest);
    manifest["arrival_time"] = std::move(arrival_manifest);
    manifest["search_terms"] = std::move(search_manifest);
    manifest["search_duplicate_planted"] = search_duplicate;
    manifest["reminder"] = std::move(reminder_manifest);

    std::vector<std::string> unmapped;
    if (n >= 1) {
        unmapped.push_back("NeverAskedDefaultCountry");
        unmapped.push_back("SafetyCameraWarnings_Warning");
    }
    if (ov2_extras) {
        unmapped.push_back("deleted");
        unmapped.push_back("skipper");
    }
    std::sort(unmapped.begin(), unmapped.end());
    manifest["unmapped_collections"] = unmapped;

    out.files.push_back({nav_path, text_bytes(wrap_store(nav_lines))});

    // ---- optional carve image ----
    if (options.noise_image_bytes > 0) {
        NoiseImage image = noise_image_impl(rng, options.noise_image_bytes,
                                            options.plant_records,
                                            options.plant_fragments);
        ordered_json noise;
        noise["path"] = "noise.img";
        noise["size"] = options.noise_image_bytes;
        ordered_json planted = ordered_json::array();
        for (const PlantedPoi& poi : image.pois) {
            ordered_json entry;
            entry["offset"] = poi.offset;
            entry["name"] = poi.name;
            entry["lon"] = poi.lon;
            entry["lat"] = poi.lat;
            entry["total_len"] = poi.total_len;
            planted.push_back(std::move(entry));
        }
        noise["planted_records"] = std::move(planted);
        ordered_json fragments = ordered_json::array();
        for (const PlantedFragment& fragment : image.fragments) {
            ordered_json entry;
            entry["offset"] = fragment.offset;
            entry["length"] = fragment.length;
            fragments.push_back(std::move(entry));
        }
        noise["planted_fragments"] = std::move(fragments);
        manifest["noise_image"] = std::move(noise);
        out.files.push_back({"noise.img", std::move(image.bytes)});
    } else {
        manifest["noise_image"] = nullptr;
    }

    out.manifest_json = manifest.dump(2) + "\n";
    return out;
}

namespace {

NoiseImage noise_image_impl(Rng& rng, std::uint64_t size, std::size_t records,
                            std::size_t fragments) {
    NoiseImage out;

    struct Item {
        std::vector<std::uint8_t> bytes;
        bool is_record = false;
        PlantedPoi poi;
    };
    std::vector<Item> items;
    items.reserve(records + fragments);

    for (std::size_t i = 0; i < records; ++i) {
        Item item;
        item.is_record = true;
        item.poi.name = place_name(rng);
        item.poi.lon = nl_lon(rng);
        item.poi.lat = nl_lat(rng);
        const Ov2Record record = make_simple_poi(item.poi.lon, item.poi.lat, item.poi.name);
        item.poi.total_len = record.total_len;
        item.bytes = serialize_record(record);
        items.push_back(std::move(item));
    }
    for (std::size_t i = 0; i < fragments; ++i) {
        Item item;
        const std::string text =
            "<string name=\"" +
            collection_key(kMapRoot, "EngineRecents", "EngineRecents_Recent",
                           static_cast<std::uint32_t>(i), {"Location_LocName"}) +
            "\">" + base64_encode(place_name(rng)) + "</string>";
        item.bytes = text_bytes(text);
        items.push_back(std::move(item));
    }

    const std::size_t slots = items.size();
    std::uint64_t max_item = 0;
    for (const Item& item : items) max_item = std::max<std::uint64_t>(max_item, item.bytes.size());
    const std::uint64_t stride = slots == 0 ? 0 : size / slots;
    if (slots > 0 && stride < max_item + 2) {
        throw Error("noise image too small for the requested plants");
    }

    // Filler bytes never contain the record type byte (0x02) or '<': every
    // carve candidate in the image therefore starts at a planted offset.
    out.bytes.resize(size);
    for (std::uint64_t i = 0; i < size; ++i) {
        std::uint8_t value = static_cast<std::uint8_t>(rng.below(254));
        if (value >= 0x02) ++value;
        if (value >= 0x3C) ++value;
        out.bytes[i] = value;
    }

    for (std::size_t i = 0; i < slots; ++i) {
        Item& item = items[i];
        const std::uint64_t span = item.bytes.size();
        const std::uint64_t offset =
            i * stride + rng.below(stride - span - 1);
        std::memcpy(out.bytes.data() + offset, item.bytes.data(), span);
        if (item.is_record) {
            item.poi.offset = offset;
            out.pois.push_back(item.poi);
        } else {
            out.fragments.push_back({offset, static_cast<std::uint32_t>(span)});
        }
    }
    return out;
}

}  // namespace

NoiseImage generate_noise_image(std::uint64_t seed, std::uint64_t size,
                                std::size_t records, std::size_t fragments) {
    Rng rng(seed);
    return noise_image_impl(rng, size, records, fragments);
}

void write_fixture(const std::filesystem::path& out_dir, const FixtureOptions& options) {
    const Fixture fixture = generate_fixture(options);

    const auto write = [&](const std::filesystem::path& path, const void* data,
                           std::size_t size) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + path.string());
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        if (!out) throw Error("cannot write " + path.string());
    };

    for (const FixtureFile& file : fixture.files) {
        write(out_dir / file.rel_path, file.bytes.data(), file.bytes.size());
    }
    write(out_dir / "manifest.json", fixture.manifest_json.data(),
          fixture.manifest_json.size());
}

}  // namespace ttkit
