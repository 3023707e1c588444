#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ttkit/carver.hpp"
#include "ttkit/detect.hpp"
#include "ttkit/records.hpp"

namespace ttkit {

/// One decode problem worth surfacing. A non-empty issue list is what turns a
/// run into a partial decode (exit code 2) without suppressing the rest of the
/// report.
struct ParseIssue {
    std::string source;  // file path or image-offset label
    std::string kind;    // short machine tag: malformed_entry, ov2_gap, ...
    std::string detail;
};

struct InputDigest {
    std::string path;
    std::string sha256;
};

struct ToolMetadata {
    std::string version;
    std::vector<InputDigest> inputs;      // sorted by path
    std::optional<std::string> run_time;  // omitted from output unless supplied
};

/// A record group no decoder claimed, kept with its file of origin.
struct UnmappedGroup {
    std::string source;
    RecordGroup group;
};

/// Everything one decode run recovered. Self-contained: rendering any output
/// format needs no access to the original files. Every record carries its
/// source label and caveats.
struct EvidenceReport {
    ToolMetadata tool;
    SourceClass source;
    std::vector<ArtifactExpectation> checklist;  // empty when source is Unknown

    std::vector<LocationRecord> favourites;     // from the ov2 store
    std::vector<LocationRecord> recents;        // engine recents
    std::vector<LocationRecord> addresses;      // address recents
    std::vector<LocationRecord> last_selected;  // single-record holders
    std::vector<RouteStreamRecord> routes;

    HomeSelection homes;
    std::vector<SubscriptionRecord> subscriptions;
    std::optional<DockEvent> dock;
    std::optional<LastKnownGps> last_gps;
    SearchHistory searches;
    std::optional<UserTimeOffset> user_time_offset;
    std::optional<ArrivalTime> arrival_time;
    std::vector<std::pair<std::string, std::string>> reminder_dates;
    // Source label for the scalar sections above (searches, offsets, reminders),
    // which all come out of one settings store.
    std::string navkit_source;

    std::vector<UnmappedGroup> unmapped;

    std::vector<CarveHit> carve_hits;  // populated by the carve command
    std::vector<ScanGap> carve_gaps;
    std::vector<std::uint64_t> published_pattern_hits;

    std::vector<ParseIssue> issues;

    bool partial() const noexcept { return !issues.empty(); }
};

struct ReportOptions {
    // Passwords recovered from subscription stores are replaced with a fixed
    // placeholder unless this is set.
    bool reveal_credentials = false;
};

/// Canonical JSON. Stable key order, raw values next to every decoded
/// interpretation, both candidates for anomaly-flagged times, byte-for-byte
/// deterministic for equal reports.
std::string emit_json(const EvidenceReport& report, const ReportOptions& options = {});

/// GPX 1.1. One waypoint per record with a full position; positionless
/// records stay in the JSON only. Coordinates carry exactly five decimals;
/// times appear only where a normalized timestamp exists.
std::string emit_gpx(const EvidenceReport& report);

/// Timestamped events only (route departures, dock, subscription times),
/// sorted by normalized time, ties by event type then source. Header row is
/// always present.
std::string emit_timeline_csv(const EvidenceReport& report);

}  // namespace ttkit
