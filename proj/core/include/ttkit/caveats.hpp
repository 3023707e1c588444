#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

namespace ttkit {

/// Ordered, duplicate-free list of analyst-facing warnings attached to a datum.
using CaveatSet = std::vector<std::string>;

inline void add_caveat(CaveatSet& set, std::string_view text) {
    if (std::find(set.begin(), set.end(), text) == set.end())
        set.emplace_back(text);
}

inline void merge_caveats(CaveatSet& into, const CaveatSet& from) {
    for (const auto& c : from) add_caveat(into, c);
}

inline bool has_caveat(const CaveatSet& set, std::string_view text) {
    return std::find(set.begin(), set.end(), text) != set.end();
}

namespace caveat {

// Wording is part of the report contract; tests assert on these strings.
inline constexpr std::string_view kDeviceClock = "device clock, may be wrong";
inline constexpr std::string_view kEpochAssumed = "epoch=unix-assumed";
inline constexpr std::string_view kDatumAssumed = "datum=wgs84-assumed";
inline constexpr std::string_view kUnknownBasis = "time basis unknown";
inline constexpr std::string_view kServerAnomaly =
    "server-time family off by one month and one day; both candidates emitted";
inline constexpr std::string_view kVisited = "visited at some point";
inline constexpr std::string_view kMaybeLastKnown = "may be last known position if no GPS lock";
inline constexpr std::string_view kNoDepartureTime = "no departure time";
inline constexpr std::string_view kPositionUnparseable = "position unparseable";
inline constexpr std::string_view kNoGpsTime = "no GPS time stored";
inline constexpr std::string_view kHalvedOdd = "odd value halved, half-unit precision lost";
inline constexpr std::string_view kIndexDisagreement = "segment indices disagree within key path";
inline constexpr std::string_view kDuplicateLeaf = "duplicate leaf in record group, all values kept";
inline constexpr std::string_view kDuplicateSearchTerm = "duplicate search term collapsed";
inline constexpr std::string_view kExperimental = "experimental decoding, field could not be exercised";
inline constexpr std::string_view kArrivalOutOfRange = "arrival time outside a day's range, treated as unset";
inline constexpr std::string_view kEncodingAssumed = "text encoding assumed UTF-8 compatible";
inline constexpr std::string_view kPartialPoint = "partial position, one axis missing";
inline constexpr std::string_view kHomeIndexTie = "duplicate home index, later entry preferred";
inline constexpr std::string_view kMissingDestination = "no destination in route stream";
inline constexpr std::string_view kUnparseableTime = "time value unparseable";
inline constexpr std::string_view kRedacted = "redacted; rerun with --reveal-credentials to show";

}  // namespace caveat

}  // namespace ttkit
