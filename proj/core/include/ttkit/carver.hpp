#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ttkit/ov2.hpp"

namespace ttkit {

enum class HitKind { Ov2SimplePoi, SettingsFragment };
enum class Confidence { Structural, Weak };

std::string_view to_string(HitKind kind) noexcept;
std::string_view to_string(Confidence confidence) noexcept;

struct CarveHit {
    std::uint64_t offset = 0;
    HitKind kind = HitKind::Ov2SimplePoi;
    Confidence confidence = Confidence::Structural;
    std::uint32_t length = 0;   // bytes the hit covers in the image
    Ov2Record record;           // Ov2SimplePoi payload
    std::string fragment;       // SettingsFragment payload
    std::string note;           // e.g. "unterminated"
};

struct ScanGap {
    std::uint64_t offset = 0;
    std::uint64_t length = 0;
    std::string detail;
};

struct ChunkProgress {
    std::size_t chunk_index = 0;
    std::size_t chunk_count = 0;
    std::uint64_t offset = 0;
    std::uint64_t length = 0;  // owned bytes, excluding overlap
    std::size_t hits = 0;      // hits found in this chunk before deduplication
};

struct ScanOptions {
    std::uint64_t chunk_size = 4ull << 20;
    std::uint64_t overlap = 0;          // 0 = exactly the candidate window
    std::uint32_t max_record_len = 1024;
    unsigned jobs = 1;
    bool published_pattern = false;     // also run the published seek signature
    // Called once per chunk; under jobs > 1 calls may interleave across
    // chunks but each call is whole.
    std::function<void(const ChunkProgress&)> progress;
};

struct ScanResult {
    std::vector<CarveHit> hits;  // deduplicated, ascending offset
    std::vector<ScanGap> gaps;
    // Offsets matching the published favourite-seek byte pattern (corrected
    // form; 21 bytes). Populated only when the option is set. The pattern
    // targets a different prefix than real records; reported for comparison.
    std::vector<std::uint64_t> published_pattern_hits;
};

/// Candidate window: a record or fragment starting at offset o is judged from
/// bytes [o, o + max_record_len + 14). Any overlap of at least that window
/// makes results independent of chunking.
std::uint64_t scan_window(std::uint32_t max_record_len) noexcept;

/// Scans an in-memory image. Throws Error when chunk_size <= overlap or the
/// overlap is below the candidate window.
ScanResult scan_image(std::span<const std::uint8_t> image, const ScanOptions& options = {});

/// Streaming variant: reads the file chunk by chunk, never whole. Unreadable
/// regions become gaps and the scan continues.
ScanResult scan_image_file(const std::filesystem::path& path, const ScanOptions& options = {});

/// Deterministic presentation order: structural hits first, each class by
/// ascending offset.
std::vector<CarveHit> rank_hits(std::vector<CarveHit> hits);

}  // namespace ttkit
