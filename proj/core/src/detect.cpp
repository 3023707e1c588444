#include "ttkit/detect.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "ttkit/settings_xml.hpp"

namespace ttkit {
namespace {

// The nine comparison-table rows; cell text is part of the reporting contract
// and is reproduced verbatim, capitalization quirks included.
struct Row {
    std::string_view name;
    std::array<std::string_view, 3> cells;  // first series, second series, Android
};

constexpr std::array<Row, 9> kRows = {{
    {"Triplogs", {"Statdata folder", "Statdata folder", "Not Found"}},
    {"Home Location", {"mapsettings.cfg", "userpatch.dat", "NavkitSettings.xml"}},
    {"Favourites", {"mapsettings.cfg", "Favorites.ov2", "Favorites.ov2"}},
    {"Recent Destinations",
     {"mapsettings.cfg", "mapsettings.tlv", "Benelux_XXXXXXXXX.xml"}},
    {"Entered locations",
     {"mapsettings.cfg", "mapsettings.tlv", "Benelux_XXXXXXXXX.xml"}},
    {"Journeys",
     {"mapsettings.cfg", "mapsettings.tlv", "Benelux_XXXXXXXXX.xml with departure time"}},
    {"Last docked",
     {"mapsettings.cfg", "Userpatch.dat", "NavkitSettings.xml, with a time stamp"}},
    {"Bluetooth coupled devices",
     {"mapsettings.cfg", "Settings.tlv",
      "Handled by the Android OS, not by the TomTom Android Application"}},
    {"Simcard data",
     {"Not applicable for first generation PND", "mobility.sim",
      "Handled by the Android OS, not by the TomTom Android Application"}},
}};

constexpr std::array<SourceKind, 3> kClasses = {
    SourceKind::PndFirstSeries,
    SourceKind::PndSecondSeries,
    SourceKind::AndroidApplication,
};

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::string_view basename(std::string_view path) noexcept {
    const std::size_t slash = path.find_last_of("/\\");
    return slash == std::string_view::npos ? path : path.substr(slash + 1);
}

bool has_component_ci(std::string_view path, std::string_view component) {
    const std::string low = lower(path);
    const std::string want = lower(component);
    std::size_t pos = 0;
    while (pos <= low.size()) {
        std::size_t end = low.find_first_of("/\\", pos);
        if (end == std::string::npos) end = low.size();
        if (low.compare(pos, end - pos, want) == 0) return true;
        if (end == low.size()) break;
        pos = end + 1;
    }
    return false;
}

// Whether a table cell names this path. Cells that name no file at all
// ("Not Found", OS-handled, not applicable) match nothing.
bool cell_matches(std::string_view cell, const std::string& path) {
    const std::string base = lower(basename(path));
    if (cell.starts_with("Statdata folder")) {
        return has_component_ci(path, "statdata");
    }
    if (cell.starts_with("Benelux_")) {
        return extract_model_id(basename(path)).has_value();
    }
    if (cell.starts_with("NavkitSettings.xml")) {
        return base == "navkitsettings.xml";
    }
    if (cell == "mapsettings.cfg" || cell == "mapsettings.tlv" ||
        cell == "Favorites.ov2" || cell == "userpatch.dat" ||
        cell == "Userpatch.dat" || cell == "Settings.tlv" || cell == "mobility.sim") {
        return base == lower(cell);
    }
    return false;
}

}  // namespace

std::string_view to_string(SourceKind kind) noexcept {
    switch (kind) {
        case SourceKind::PndFirstSeries: return "pnd_first_series";
        case SourceKind::PndSecondSeries: return "pnd_second_series";
        case SourceKind::AndroidApplication: return "android_application";
        case SourceKind::Unknown: return "unknown";
    }
    return "unknown";
}

SourceClass classify_tree(const std::vector<std::string>& paths) {
    std::vector<std::string> sorted = paths;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    SourceClass out;

    struct ClassScore {
        std::set<std::string> files;              // distinct matched paths
        std::vector<EvidencePair> evidence;       // (row, path), table order
        std::size_t tomtom_files = 0;
    };
    std::array<ClassScore, 3> scores;

    for (std::size_t row = 0; row < kRows.size(); ++row) {
        for (std::size_t cls = 0; cls < kClasses.size(); ++cls) {
            for (const std::string& path : sorted) {
                if (!cell_matches(kRows[row].cells[cls], path)) continue;
                ClassScore& score = scores[cls];
                if (score.files.insert(path).second && has_component_ci(path, "tomtom")) {
                    ++score.tomtom_files;
                }
                score.evidence.push_back({std::string(kRows[row].name), path});
            }
        }
    }

    for (const std::string& path : sorted) {
        if (!out.model_id) {
            out.model_id = extract_model_id(basename(path));
        }
    }

    const bool statdata =
        std::any_of(sorted.begin(), sorted.end(),
                    [](const std::string& p) { return has_component_ci(p, "statdata"); });
    if (statdata) {
        out.notes.push_back("statdata folder: triplogs possibly present on a PND source");
        out.notes.push_back(
            "statdata folder present; the Android application stores no triplogs "
            "(expected Not Found)");
    }

    std::size_t best = 0;
    for (const ClassScore& s : scores) best = std::max(best, s.files.size());
    if (best == 0) {
        return out;  // Unknown with empty evidence
    }

    std::vector<std::size_t> tied;
    for (std::size_t cls = 0; cls < scores.size(); ++cls) {
        if (scores[cls].files.size() == best) tied.push_back(cls);
    }
    if (tied.size() > 1) {
        // Files under a tomtom folder outrank loose ones before giving up.
        std::size_t best_tomtom = 0;
        for (const std::size_t cls : tied) {
            best_tomtom = std::max(best_tomtom, scores[cls].tomtom_files);
        }
        std::vector<std::size_t> still;
        for (const std::size_t cls : tied) {
            if (scores[cls].tomtom_files == best_tomtom) still.push_back(cls);
        }
        tied = std::move(still);
    }

    if (tied.size() == 1) {
        out.kind = kClasses[tied.front()];
        out.evidence = scores[tied.front()].evidence;
        return out;
    }

    for (const std::size_t cls : tied) {
        out.candidates.push_back(kClasses[cls]);
        for (const EvidencePair& pair : scores[cls].evidence) {
            const bool seen = std::any_of(
                out.evidence.begin(), out.evidence.end(), [&](const EvidencePair& e) {
                    return e.artifact_class == pair.artifact_class && e.path == pair.path;
                });
            if (!seen) out.evidence.push_back(pair);
        }
    }
    return out;
}

std::vector<ArtifactExpectation> expected_artifacts(
    SourceKind kind, const std::vector<std::string>& paths) {
    if (kind == SourceKind::Unknown) {
        throw Error("source class unknown; review the evidence tree manually");
    }
    std::size_t cls = 0;
    for (std::size_t i = 0; i < kClasses.size(); ++i) {
        if (kClasses[i] == kind) cls = i;
    }

    std::vector<std::string> sorted = paths;
    std::sort(sorted.begin(), sorted.end());

    std::vector<ArtifactExpectation> out;
    out.reserve(kRows.size());
    for (const Row& row : kRows) {
        ArtifactExpectation expectation;
        expectation.artifact_class = std::string(row.name);
        expectation.expected = std::string(row.cells[cls]);
        for (const std::string& path : sorted) {
            if (cell_matches(row.cells[cls], path)) {
                expectation.matching_paths.push_back(path);
            }
        }
        expectation.found = !expectation.matching_paths.empty();
        out.push_back(std::move(expectation));
    }
    return out;
}

}  // namespace ttkit
