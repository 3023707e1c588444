// Evidence-tree classification: worked examples for each source class, the
// tie fallback with explicit candidates, folder-based tie-breaking, triplog
// notes, and the verbatim nine-row artifact checklist.

#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "ttkit/detect.hpp"
#include "ttkit/errors.hpp"

using namespace ttkit;

namespace {

bool has_evidence(const SourceClass& cls, const std::string& artifact_class,
                  const std::string& path) {
    return std::any_of(cls.evidence.begin(), cls.evidence.end(),
                       [&](const EvidencePair& e) {
                           return e.artifact_class == artifact_class && e.path == path;
                       });
}

const ArtifactExpectation& row_named(const std::vector<ArtifactExpectation>& rows,
                                     const std::string& name) {
    for (const ArtifactExpectation& row : rows) {
        if (row.artifact_class == name) return row;
    }
    static const ArtifactExpectation missing{};
    REQUIRE_MESSAGE(false, "no checklist row named " << name);
    return missing;
}

}  // namespace

TEST_CASE("source kind names") {
    CHECK(to_string(SourceKind::PndFirstSeries) == "pnd_first_series");
    CHECK(to_string(SourceKind::PndSecondSeries) == "pnd_second_series");
    CHECK(to_string(SourceKind::AndroidApplication) == "android_application");
    CHECK(to_string(SourceKind::Unknown) == "unknown");
}

TEST_CASE("android application tree classifies with model id") {
    const std::vector<std::string> paths = {
        "tomtom/Favorites.ov2",
        "tomtom/NavkitSettings.xml",
        "tomtom/Benelux_AF7DE92B.xml",
    };
    const SourceClass cls = classify_tree(paths);
    CHECK(cls.kind == SourceKind::AndroidApplication);
    REQUIRE(cls.model_id.has_value());
    CHECK(*cls.model_id == "AF7DE92B");
    CHECK(cls.candidates.empty());

    // Every row the three files answer shows up as evidence.
    CHECK(has_evidence(cls, "Home Location", "tomtom/NavkitSettings.xml"));
    CHECK(has_evidence(cls, "Favourites", "tomtom/Favorites.ov2"));
    CHECK(has_evidence(cls, "Recent Destinations", "tomtom/Benelux_AF7DE92B.xml"));
    CHECK(has_evidence(cls, "Entered locations", "tomtom/Benelux_AF7DE92B.xml"));
    CHECK(has_evidence(cls, "Journeys", "tomtom/Benelux_AF7DE92B.xml"));
    CHECK(has_evidence(cls, "Last docked", "tomtom/NavkitSettings.xml"));
    CHECK(cls.evidence.size() == 6);
}

TEST_CASE("lone mapsettings.cfg classifies as first-series PND") {
    const SourceClass cls = classify_tree({"mapsettings.cfg"});
    CHECK(cls.kind == SourceKind::PndFirstSeries);
    CHECK(!cls.model_id.has_value());
    CHECK(cls.candidates.empty());
    // One file answers seven first-series rows.
    CHECK(cls.evidence.size() == 7);
    CHECK(has_evidence(cls, "Home Location", "mapsettings.cfg"));
    CHECK(has_evidence(cls, "Bluetooth coupled devices", "mapsettings.cfg"));
}

TEST_CASE("empty tree stays unknown") {
    const SourceClass cls = classify_tree({});
    CHECK(cls.kind == SourceKind::Unknown);
    CHECK(cls.evidence.empty());
    CHECK(cls.candidates.empty());
    CHECK(!cls.model_id.has_value());
}

TEST_CASE("lone favourites file ties second-series and android") {
    const SourceClass cls = classify_tree({"Favorites.ov2"});
    CHECK(cls.kind == SourceKind::Unknown);
    REQUIRE(cls.candidates.size() == 2);
    CHECK(cls.candidates[0] == SourceKind::PndSecondSeries);
    CHECK(cls.candidates[1] == SourceKind::AndroidApplication);
    // The shared row is reported once.
    REQUIRE(cls.evidence.size() == 1);
    CHECK(cls.evidence[0].artifact_class == "Favourites");
    CHECK(cls.evidence[0].path == "Favorites.ov2");
}

TEST_CASE("tomtom folder breaks a score tie") {
    // One android file under tomtom/ versus one loose second-series file:
    // equal scores, but the foldered evidence wins.
    const SourceClass cls =
        classify_tree({"tomtom/NavkitSettings.xml", "userpatch.dat"});
    CHECK(cls.kind == SourceKind::AndroidApplication);
    CHECK(cls.candidates.empty());
    CHECK(has_evidence(cls, "Home Location", "tomtom/NavkitSettings.xml"));
}

TEST_CASE("statdata folder adds triplog notes") {
    const SourceClass cls =
        classify_tree({"Statdata/trip001.dat", "mapsettings.cfg"});
    CHECK(cls.kind == SourceKind::PndFirstSeries);  // 2 files beat 1
    REQUIRE(cls.notes.size() == 2);
    CHECK(cls.notes[0] ==
          "statdata folder: triplogs possibly present on a PND source");
    CHECK(cls.notes[1] ==
          "statdata folder present; the Android application stores no triplogs "
          "(expected Not Found)");
    CHECK(has_evidence(cls, "Triplogs", "Statdata/trip001.dat"));
}

TEST_CASE("classification is permutation- and duplicate-invariant") {
    std::vector<std::string> paths = {
        "tomtom/Favorites.ov2",
        "tomtom/NavkitSettings.xml",
        "tomtom/Benelux_AF7DE92B.xml",
        "Statdata/trip001.dat",
    };
    const SourceClass baseline = classify_tree(paths);
    std::reverse(paths.begin(), paths.end());
    paths.push_back("tomtom/Favorites.ov2");  // duplicate
    const SourceClass again = classify_tree(paths);
    CHECK(again.kind == baseline.kind);
    CHECK(again.model_id == baseline.model_id);
    CHECK(again.notes == baseline.notes);
    REQUIRE(again.evidence.size() == baseline.evidence.size());
    for (std::size_t i = 0; i < baseline.evidence.size(); ++i) {
        CHECK(again.evidence[i].artifact_class == baseline.evidence[i].artifact_class);
        CHECK(again.evidence[i].path == baseline.evidence[i].path);
    }
}

TEST_CASE("filename matching ignores case, model ids do not") {
    const SourceClass cls =
        classify_tree({"TomTom/FAVORITES.OV2", "tomtom/navkitsettings.XML"});
    CHECK(cls.kind == SourceKind::AndroidApplication);
    CHECK(!cls.model_id.has_value());

    // A lowercase hex id is not a map store name, so it adds no model id.
    const SourceClass low = classify_tree({"tomtom/Benelux_af7de92b.xml"});
    CHECK(!low.model_id.has_value());
}

TEST_CASE("artifact checklist rows are verbatim per source class") {
    const std::vector<std::string> first_expected = {
        "Statdata folder",
        "mapsettings.cfg",
        "mapsettings.cfg",
        "mapsettings.cfg",
        "mapsettings.cfg",
        "mapsettings.cfg",
        "mapsettings.cfg",
        "mapsettings.cfg",
        "Not applicable for first generation PND",
    };
    const std::vector<std::string> second_expected = {
        "Statdata folder",
        "userpatch.dat",
        "Favorites.ov2",
        "mapsettings.tlv",
        "mapsettings.tlv",
        "mapsettings.tlv",
        "Userpatch.dat",
        "Settings.tlv",
        "mobility.sim",
    };
    const std::vector<std::string> android_expected = {
        "Not Found",
        "NavkitSettings.xml",
        "Favorites.ov2",
        "Benelux_XXXXXXXXX.xml",
        "Benelux_XXXXXXXXX.xml",
        "Benelux_XXXXXXXXX.xml with departure time",
        "NavkitSettings.xml, with a time stamp",
        "Handled by the Android OS, not by the TomTom Android Application",
        "Handled by the Android OS, not by the TomTom Android Application",
    };
    const std::vector<std::string> row_names = {
        "Triplogs",
        "Home Location",
        "Favourites",
        "Recent Destinations",
        "Entered locations",
        "Journeys",
        "Last docked",
        "Bluetooth coupled devices",
        "Simcard data",
    };

    const auto check_class = [&](SourceKind kind,
                                 const std::vector<std::string>& expected) {
        const auto rows = expected_artifacts(kind);
        REQUIRE(rows.size() == 9);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(rows[i].artifact_class == row_names[i]);
            CHECK(rows[i].expected == expected[i]);
            CHECK(!rows[i].found);  // no paths supplied
            CHECK(rows[i].matching_paths.empty());
        }
    };
    check_class(SourceKind::PndFirstSeries, first_expected);
    check_class(SourceKind::PndSecondSeries, second_expected);
    check_class(SourceKind::AndroidApplication, android_expected);
}

TEST_CASE("checklist marks found rows against supplied paths") {
    const std::vector<std::string> paths = {
        "tomtom/Favorites.ov2",
        "tomtom/NavkitSettings.xml",
        "tomtom/Benelux_AF7DE92B.xml",
    };
    const auto rows = expected_artifacts(SourceKind::AndroidApplication, paths);

    CHECK(!row_named(rows, "Triplogs").found);  // "Not Found" matches nothing
    CHECK(row_named(rows, "Home Location").found);
    CHECK(row_named(rows, "Favourites").found);
    CHECK(row_named(rows, "Recent Destinations").found);
    CHECK(row_named(rows, "Journeys").found);
    CHECK(row_named(rows, "Last docked").found);
    CHECK(!row_named(rows, "Bluetooth coupled devices").found);
    CHECK(!row_named(rows, "Simcard data").found);

    const auto& recents = row_named(rows, "Recent Destinations");
    REQUIRE(recents.matching_paths.size() == 1);
    CHECK(recents.matching_paths[0] == "tomtom/Benelux_AF7DE92B.xml");
}

TEST_CASE("checklist refuses an unknown source class") {
    CHECK_THROWS_AS(expected_artifacts(SourceKind::Unknown), Error);
}
