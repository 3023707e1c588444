#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttkit/errors.hpp"

namespace ttkit {

enum class SourceKind {
    PndFirstSeries,
    PndSecondSeries,
    AndroidApplication,
    Unknown,
};

std::string_view to_string(SourceKind kind) noexcept;

struct EvidencePair {
    std::string artifact_class;  // comparison-table row the file answers
    std::string path;
};

struct SourceClass {
    SourceKind kind = SourceKind::Unknown;
    std::vector<EvidencePair> evidence;
    std::optional<std::string> model_id;     // 8 hex digits from the map store name
    std::vector<SourceKind> candidates;      // populated when kind is Unknown by tie
    std::vector<std::string> notes;          // e.g. triplog-folder observations
};

/// Classifies an evidence tree from its relative paths. Filename matching is
/// case-insensitive; a "tomtom" directory ancestor breaks score ties before
/// the classification falls back to Unknown-with-candidates. Deterministic
/// and permutation-invariant.
SourceClass classify_tree(const std::vector<std::string>& paths);

struct ArtifactExpectation {
    std::string artifact_class;              // row name
    std::string expected;                    // row cell for the class, verbatim
    bool found = false;
    std::vector<std::string> matching_paths;
};

/// The full nine-row artifact checklist for one source class, with each row
/// marked found or missing against the supplied paths. Rows whose cell names
/// no file (Not Found / handled by the OS / not applicable) are never found.
/// Throws Error for Unknown, which needs manual review instead of a checklist.
std::vector<ArtifactExpectation> expected_artifacts(
    SourceKind kind, const std::vector<std::string>& paths = {});

}  // namespace ttkit
