#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttkit/caveats.hpp"
#include "ttkit/errors.hpp"
#include "ttkit/geo_time.hpp"

namespace ttkit {

/// One `Name*NNNNN*` piece of a key path. The marker is always 5 decimal
/// digits and closes the segment.
struct KeySegment {
    std::string name;
    std::uint32_t index = 0;

    friend bool operator==(const KeySegment&, const KeySegment&) = default;
};

struct KeyPath {
    std::vector<KeySegment> segments;

    const std::string& root() const { return segments.front().name; }

    friend bool operator==(const KeyPath&, const KeyPath&) = default;
};

/// Throws ParseError when `text` is not a well-formed key path (every
/// slash-separated segment must end in exactly one *NNNNN* marker).
KeyPath parse_key_path(std::string_view text);

struct SettingsEntry {
    KeyPath path;
    std::string raw_b64;
    std::string decoded;
    std::size_t source_line = 0;  // 1-based
};

struct MalformedEntry {
    std::string name_attr;  // raw name attribute, possibly empty or partial
    std::string raw_value;
    std::size_t source_line = 0;
    std::string reason;
};

struct StoreParse {
    std::vector<SettingsEntry> entries;
    std::vector<MalformedEntry> malformed;
};

/// Extracts every `<string name="...">VALUE</string>` element. Well-formed XML
/// around the elements is not required; carved fragments parse too. Every
/// element lands in exactly one of the two output lists. In strict mode the
/// first malformed element raises ParseError instead.
StoreParse parse_store(std::string_view xml_text,
                       Strictness strictness = Strictness::Tolerant);

struct GroupField {
    std::string subpath;  // segments after the group anchor, joined with "/"
    std::string value;    // decoded bytes
    std::uint32_t leaf_index = 0;
    std::size_t source_line = 0;

    friend bool operator==(const GroupField&, const GroupField&) = default;
};

/// Entries of one logical record, reassembled from lines scattered through the
/// store. Scalar keys form singleton groups whose field subpath is the key
/// name itself.
struct RecordGroup {
    std::string root;        // store family segment (MapSettings, NavkitSettings)
    std::string collection;  // anchor segment name
    std::uint32_t record_index = 0;
    std::vector<GroupField> fields;  // sorted by (subpath, value, source_line)
    CaveatSet caveats;

    const GroupField* find(std::string_view subpath) const;
    std::optional<std::string> value_of(std::string_view subpath) const;
};

/// Groups entries by (root, anchor collection, record index). The anchor is
/// the first segment named like `<parent>_<suffix>` of its parent segment
/// (AddressRecents / AddressRecents_Address); paths without such a segment
/// anchor at the segment under the root, which covers both scalars
/// (NeverAskedDefaultCountry) and single-record holders (LastSelectedPoi).
/// Output order: record_index, then root, then collection; fields sorted.
/// Permutation-invariant over the input order.
std::vector<RecordGroup> group_records(const std::vector<SettingsEntry>& entries);

/// Shape-only parse of "(X; Y" (trailing ")" optional): returns the raw
/// integers without range checks, for callers that must transform values
/// (halving) before validating. Throws FormatError on shape violations.
std::pair<std::int64_t, std::int64_t> parse_position_pair(std::string_view decoded);

/// Parses the "(X; Y" position shape (trailing ")" optional). Throws
/// FormatError carrying the offending text on any deviation, including
/// coordinate range violations.
GeoPoint parse_position_string(std::string_view decoded);

/// Extracts the 8-hex-digit model id from a map-settings store filename such
/// as Benelux_AF7DE92B.xml. Any `[A-Za-z]+_[0-9A-F]{8}.xml` name qualifies.
std::optional<std::string> extract_model_id(std::string_view filename);

}  // namespace ttkit
