#include "ttkit/settings_xml.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <tuple>

#include "ttkit/base64.hpp"

namespace ttkit {
namespace {

bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string unescape_xml(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        const std::string_view rest = s.substr(i);
        if (rest.starts_with("&lt;")) { out.push_back('<'); i += 4; }
        else if (rest.starts_with("&gt;")) { out.push_back('>'); i += 4; }
        else if (rest.starts_with("&amp;")) { out.push_back('&'); i += 5; }
        else if (rest.starts_with("&quot;")) { out.push_back('"'); i += 6; }
        else if (rest.starts_with("&apos;")) { out.push_back('\''); i += 6; }
        else { out.push_back(s[i++]); }
    }
    return out;
}

// 1-based line number of a byte offset.
class LineIndex {
public:
    explicit LineIndex(std::string_view text) {
        starts_.push_back(0);
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] == '\n') starts_.push_back(i + 1);
        }
    }

    std::size_t line_of(std::size_t offset) const {
        const auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
        return static_cast<std::size_t>(it - starts_.begin());
    }

private:
    std::vector<std::size_t> starts_;
};

// Finds the next `<string` occurrence that is followed by whitespace (so that
// `<strings>` and the like do not match).
std::size_t find_element(std::string_view text, std::size_t from) {
    while (true) {
        const std::size_t at = text.find("<string", from);
        if (at == std::string_view::npos) return std::string_view::npos;
        const std::size_t after = at + 7;
        if (after < text.size() && is_space(text[after])) return at;
        from = at + 1;
    }
}

struct NameAttr {
    bool ok = false;
    std::string value;
    std::string reason;
};

NameAttr parse_name_attr(std::string_view tag) {
    std::size_t at = tag.find("name");
    while (at != std::string_view::npos) {
        // Require a standalone attribute token.
        const bool bounded_left = at == 0 || is_space(tag[at - 1]);
        std::size_t i = at + 4;
        while (i < tag.size() && is_space(tag[i])) ++i;
        if (bounded_left && i < tag.size() && tag[i] == '=') {
            ++i;
            while (i < tag.size() && is_space(tag[i])) ++i;
            if (i >= tag.size() || tag[i] != '"') {
                return {false, "", "name attribute not quoted"};
            }
            const std::size_t close = tag.find('"', i + 1);
            if (close == std::string_view::npos) {
                return {false, "", "unterminated name attribute"};
            }
            return {true, unescape_xml(tag.substr(i + 1, close - i - 1)), ""};
        }
        at = tag.find("name", at + 1);
    }
    return {false, "", "missing name attribute"};
}

std::size_t find_anchor(const std::vector<KeySegment>& segments) {
    for (std::size_t i = 1; i < segments.size(); ++i) {
        const std::string& parent = segments[i - 1].name;
        const std::string& name = segments[i].name;
        if (name.size() > parent.size() + 1 && name.compare(0, parent.size(), parent) == 0 &&
            name[parent.size()] == '_') {
            return i;
        }
    }
    return segments.size() > 1 ? 1 : 0;
}

}  // namespace

KeyPath parse_key_path(std::string_view text) {
    if (text.empty()) {
        throw ParseError("empty key path", 0);
    }
    KeyPath path;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('/', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view seg = text.substr(pos, end - pos);

        const std::size_t star = seg.find('*');
        if (star == std::string_view::npos) {
            throw ParseError("segment lacks an index marker", pos, "*NNNNN*",
                             std::string(seg));
        }
        if (star == 0) {
            throw ParseError("segment has an empty name", pos, "name before *NNNNN*",
                             std::string(seg));
        }
        // Exactly *NNNNN* with 5 decimal digits, closing the segment.
        if (seg.size() != star + 7 || seg.back() != '*') {
            throw ParseError("index marker does not close the segment", pos, "*NNNNN*",
                             std::string(seg));
        }
        std::uint32_t index = 0;
        for (std::size_t i = star + 1; i < star + 6; ++i) {
            const char c = seg[i];
            if (c < '0' || c > '9') {
                throw ParseError("index marker is not 5 decimal digits", pos, "*NNNNN*",
                                 std::string(seg));
            }
            index = index * 10 + static_cast<std::uint32_t>(c - '0');
        }
        path.segments.push_back({std::string(seg.substr(0, star)), index});

        if (end == text.size()) break;
        pos = end + 1;
        if (pos == text.size()) {
            throw ParseError("trailing path separator", end, "segment after /", "");
        }
    }
    return path;
}

StoreParse parse_store(std::string_view xml_text, Strictness strictness) {
    StoreParse out;
    const LineIndex lines(xml_text);

    auto reject = [&](std::size_t offset, std::string name_attr, std::string raw_value,
                      std::string reason) {
        if (strictness == Strictness::Strict) {
            throw ParseError(reason, offset);
        }
        out.malformed.push_back({std::move(name_attr), std::move(raw_value),
                                 lines.line_of(offset), std::move(reason)});
    };

    std::size_t pos = 0;
    while (true) {
        const std::size_t open = find_element(xml_text, pos);
        if (open == std::string_view::npos) break;
        pos = open + 7;

        const std::size_t gt = xml_text.find('>', open);
        if (gt == std::string_view::npos) {
            reject(open, "", "", "unterminated element");
            continue;
        }
        const std::string_view tag = xml_text.substr(open + 7, gt - open - 7);
        const NameAttr name = parse_name_attr(tag);
        if (!name.ok) {
            reject(open, "", "", name.reason);
            continue;
        }

        std::string_view raw_value;
        if (!tag.empty() && trim(tag).ends_with("/")) {
            raw_value = "";  // self-closing, empty value
            pos = gt + 1;
        } else {
            const std::size_t close = xml_text.find("</string", gt + 1);
            const std::size_t next_open = find_element(xml_text, gt + 1);
            if (close == std::string_view::npos ||
                (next_open != std::string_view::npos && next_open < close)) {
                reject(open, name.value, "", "unterminated element");
                continue;
            }
            raw_value = trim(xml_text.substr(gt + 1, close - gt - 1));
            pos = close + 8;
        }

        KeyPath path;
        try {
            path = parse_key_path(name.value);
        } catch (const ParseError& e) {
            reject(open, name.value, std::string(raw_value),
                   std::string("bad key path: ") + e.what());
            continue;
        }

        const std::string unescaped = unescape_xml(raw_value);
        Base64Decode decoded = base64_decode(unescaped);
        if (!decoded.ok) {
            reject(open, name.value, std::string(raw_value),
                   "bad base64: " + decoded.error);
            continue;
        }

        out.entries.push_back({std::move(path), unescaped, std::move(decoded.bytes),
                               lines.line_of(open)});
    }
    return out;
}

const GroupField* RecordGroup::find(std::string_view subpath) const {
    for (const GroupField& f : fields) {
        if (f.subpath == subpath) return &f;
    }
    return nullptr;
}

std::optional<std::string> RecordGroup::value_of(std::string_view subpath) const {
    const GroupField* f = find(subpath);
    if (f == nullptr) return std::nullopt;
    return f->value;
}

std::vector<RecordGroup> group_records(const std::vector<SettingsEntry>& entries) {
    std::map<std::tuple<std::uint32_t, std::string, std::string>, RecordGroup> groups;

    for (const SettingsEntry& entry : entries) {
        const auto& segs = entry.path.segments;
        const std::size_t anchor = find_anchor(segs);

        RecordGroup& group = groups[{segs[anchor].index, segs[0].name, segs[anchor].name}];
        if (group.fields.empty() && group.caveats.empty()) {
            group.root = segs[0].name;
            group.collection = segs[anchor].name;
            group.record_index = segs[anchor].index;
        }

        std::string subpath;
        for (std::size_t i = anchor + 1; i < segs.size(); ++i) {
            if (!subpath.empty()) subpath += '/';
            subpath += segs[i].name;
        }
        if (subpath.empty()) subpath = segs[anchor].name;

        for (std::size_t i = anchor + 1; i < segs.size(); ++i) {
            if (segs[i].index != segs[anchor].index) {
                add_caveat(group.caveats, caveat::kIndexDisagreement);
                break;
            }
        }

        group.fields.push_back({std::move(subpath), entry.decoded,
                                segs.back().index, entry.source_line});
    }

    std::vector<RecordGroup> out;
    out.reserve(groups.size());
    for (auto& [key, group] : groups) {
        std::sort(group.fields.begin(), group.fields.end(),
                  [](const GroupField& a, const GroupField& b) {
                      return std::tie(a.subpath, a.value, a.source_line) <
                             std::tie(b.subpath, b.value, b.source_line);
                  });
        for (std::size_t i = 1; i < group.fields.size(); ++i) {
            if (group.fields[i].subpath == group.fields[i - 1].subpath) {
                add_caveat(group.caveats, caveat::kDuplicateLeaf);
                break;
            }
        }
        out.push_back(std::move(group));
    }
    // The map key already orders by (record_index, root, collection).
    return out;
}

std::pair<std::int64_t, std::int64_t> parse_position_pair(std::string_view decoded) {
    const auto fail = [&](const char* why) {
        throw FormatError(std::string("position string ") + why, std::string(decoded));
    };

    std::size_t i = 0;
    const auto parse_int = [&]() -> std::int64_t {
        bool negative = false;
        if (i < decoded.size() && decoded[i] == '-') {
            negative = true;
            ++i;
        }
        if (i >= decoded.size() || decoded[i] < '0' || decoded[i] > '9') {
            fail("does not match \"(X; Y\" shape");
        }
        std::int64_t value = 0;
        while (i < decoded.size() && decoded[i] >= '0' && decoded[i] <= '9') {
            value = value * 10 + (decoded[i] - '0');
            if (value > 10'000'000'000LL) fail("coordinate overflows");
            ++i;
        }
        return negative ? -value : value;
    };

    if (decoded.empty() || decoded[0] != '(') fail("does not match \"(X; Y\" shape");
    i = 1;
    const std::int64_t x = parse_int();
    if (i >= decoded.size() || decoded[i] != ';') fail("does not match \"(X; Y\" shape");
    ++i;
    while (i < decoded.size() && decoded[i] == ' ') ++i;
    const std::int64_t y = parse_int();
    if (i < decoded.size() && decoded[i] == ')') ++i;
    while (i < decoded.size() && is_space(decoded[i])) ++i;
    if (i != decoded.size()) fail("has trailing text");
    return {x, y};
}

GeoPoint parse_position_string(std::string_view decoded) {
    const auto [x, y] = parse_position_pair(decoded);
    if (!CoordinateE5::in_range(x, Axis::Lon)) {
        throw FormatError("position string longitude out of range", std::string(decoded));
    }
    if (!CoordinateE5::in_range(y, Axis::Lat)) {
        throw FormatError("position string latitude out of range", std::string(decoded));
    }
    GeoPoint point;
    point.lon.value = static_cast<std::int32_t>(x);
    point.lat.value = static_cast<std::int32_t>(y);
    return point;
}

std::optional<std::string> extract_model_id(std::string_view filename) {
    const std::size_t slash = filename.find_last_of("/\\");
    if (slash != std::string_view::npos) filename.remove_prefix(slash + 1);
    static const std::regex pattern(R"(^[A-Za-z]+_([0-9A-F]{8})\.xml$)");
    std::cmatch match;
    if (std::regex_match(filename.begin(), filename.end(), match, pattern)) {
        return match[1].str();
    }
    return std::nullopt;
}

}  // namespace ttkit
