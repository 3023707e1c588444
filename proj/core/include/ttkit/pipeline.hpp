#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ttkit/report.hpp"

namespace ttkit {

struct DecodeOptions {
    Strictness strictness = Strictness::Tolerant;
    // Candidate ov2 header lengths, tried when the file does not start with a
    // record (model-specific magic prefixes).
    std::vector<std::uint32_t> ov2_header_profiles;
    std::optional<std::string> run_time;  // copied into tool metadata verbatim
};

/// Full decode flow over an evidence tree: walk, classify, parse every store
/// the classifier knows, assemble records, fill an EvidenceReport. Decode
/// problems in tolerant mode become ParseIssues instead of exceptions; strict
/// mode rethrows the first one. Throws Error when root is not a directory.
EvidenceReport decode_tree(const std::filesystem::path& root,
                           const DecodeOptions& options = {});

/// Decodes a single store file by its basename conventions (ov2 favourites,
/// map-settings store, NavkitSettings). Unrecognized names raise Error.
EvidenceReport decode_file(const std::filesystem::path& file,
                           const DecodeOptions& options = {});

/// Assembly stages shared by decode_tree and the tests. These mutate `report`
/// and append issues; `source_label` names the input in record provenance.

void decode_ov2_favourites(EvidenceReport& report, std::span<const std::uint8_t> bytes,
                           const std::string& source_label, const DecodeOptions& options);

void decode_map_store(EvidenceReport& report, std::string_view xml_text,
                      const std::string& source_label, const DecodeOptions& options);

void decode_navkit_store(EvidenceReport& report, std::string_view xml_text,
                         const std::string& source_label, const DecodeOptions& options);

}  // namespace ttkit
