#include "ttkit/carver.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "ttkit/endian.hpp"
#include "ttkit/settings_xml.hpp"

namespace ttkit {
namespace {

constexpr std::string_view kFragMap = "<string name=\"MapSettings";
constexpr std::string_view kFragNavkit = "<string name=\"NavkitSettings";
constexpr std::string_view kClose = "</string>";

// Published favourite-seek signature, corrected byte form (the printed
// original mixes brace and bracket classes); 21 bytes.
bool matches_published_pattern(std::span<const std::uint8_t> w) noexcept {
    if (w.size() < 21) return false;
    if (w[0] != 0x64 || w[1] != 0x15) return false;
    for (int i = 2; i <= 4; ++i) {
        if (w[i] != 0x00) return false;
    }
    for (int i = 5; i <= 8; ++i) {
        if (w[i] < 0x01 || w[i] > 0xFE) return false;
    }
    for (int i = 9; i <= 13; ++i) {
        if (w[i] != 0x00) return false;
    }
    if (w[14] != 0x80 || w[15] != 0x00) return false;
    if (w[16] < 0x01 || w[16] > 0xFE) return false;
    for (int i = 17; i <= 20; ++i) {
        if (w[i] != 0x00) return false;
    }
    return true;
}

struct ChunkFindings {
    std::vector<CarveHit> hits;
    std::vector<std::uint64_t> published;
};

// Scans the owned prefix of a buffer; candidates are judged from a window of
// at most `window` bytes so verdicts do not depend on how the image was
// chunked.
ChunkFindings scan_buffer(std::span<const std::uint8_t> buf, std::uint64_t base,
                          std::size_t owned, const ScanOptions& options,
                          std::uint64_t window) {
    ChunkFindings out;
    for (std::size_t rel = 0; rel < owned; ++rel) {
        const std::uint8_t b = buf[rel];
        if (b != 0x02 && b != '<' && !(options.published_pattern && b == 0x64)) {
            continue;
        }
        const std::size_t take =
            static_cast<std::size_t>(std::min<std::uint64_t>(window, buf.size() - rel));
        const std::span<const std::uint8_t> w = buf.subspan(rel, take);

        if (b == 0x02) {
            const PoiVerdict verdict = validate_simple_poi(w, options.max_record_len);
            if (verdict.valid) {
                CarveHit hit;
                hit.offset = base + rel;
                hit.kind = HitKind::Ov2SimplePoi;
                hit.confidence = Confidence::Structural;
                hit.length = verdict.total_len;
                hit.record = make_simple_poi(
                    load_i32le(w.data() + 5), load_i32le(w.data() + 9),
                    std::string(reinterpret_cast<const char*>(w.data()) + 13,
                                verdict.total_len - 14));
                out.hits.push_back(std::move(hit));
            }
        } else if (b == '<') {
            const std::string_view text(reinterpret_cast<const char*>(w.data()), w.size());
            if (!text.starts_with(kFragMap) && !text.starts_with(kFragNavkit)) {
                continue;
            }
            CarveHit hit;
            hit.offset = base + rel;
            hit.kind = HitKind::SettingsFragment;
            const std::size_t close = text.find(kClose);
            if (close != std::string_view::npos) {
                hit.fragment = std::string(text.substr(0, close + kClose.size()));
                const StoreParse parsed = parse_store(hit.fragment, Strictness::Tolerant);
                if (parsed.entries.empty()) {
                    hit.confidence = Confidence::Weak;
                    hit.note = "element does not decode";
                } else {
                    hit.confidence = Confidence::Structural;
                }
            } else {
                hit.fragment = std::string(text);
                hit.confidence = Confidence::Weak;
                hit.note = "unterminated";
            }
            hit.length = static_cast<std::uint32_t>(hit.fragment.size());
            out.hits.push_back(std::move(hit));
        } else {
            if (matches_published_pattern(w)) {
                out.published.push_back(base + rel);
            }
        }
    }
    return out;
}

// True when `hit` should replace an overlapping `kept` hit of the same kind:
// structural beats weak, then the longer parse, then the earlier offset.
bool replaces(const CarveHit& hit, const CarveHit& kept) noexcept {
    if (hit.confidence != kept.confidence) {
        return hit.confidence == Confidence::Structural;
    }
    return hit.length > kept.length;
}

ScanResult merge_findings(std::vector<ChunkFindings> chunks) {
    ScanResult out;
    std::array<std::ptrdiff_t, 2> last_of_kind = {-1, -1};
    for (ChunkFindings& chunk : chunks) {
        for (CarveHit& hit : chunk.hits) {
            const std::size_t kind = static_cast<std::size_t>(hit.kind);
            if (last_of_kind[kind] >= 0) {
                CarveHit& kept = out.hits[static_cast<std::size_t>(last_of_kind[kind])];
                if (hit.offset < kept.offset + kept.length) {
                    if (replaces(hit, kept)) kept = std::move(hit);
                    continue;
                }
            }
            out.hits.push_back(std::move(hit));
            last_of_kind[kind] = static_cast<std::ptrdiff_t>(out.hits.size()) - 1;
        }
        out.published_pattern_hits.insert(out.published_pattern_hits.end(),
                                          chunk.published.begin(), chunk.published.end());
    }
    return out;
}

struct ScanPlan {
    std::uint64_t window = 0;
    std::uint64_t overlap = 0;
    std::uint64_t chunk_count = 0;
};

ScanPlan plan_scan(std::uint64_t size, const ScanOptions& options) {
    ScanPlan plan;
    plan.window = scan_window(options.max_record_len);
    plan.overlap = options.overlap == 0 ? plan.window : options.overlap;
    if (plan.overlap < plan.window) {
        throw Error("overlap " + std::to_string(plan.overlap) +
                    " is below the candidate window " + std::to_string(plan.window));
    }
    if (options.chunk_size <= plan.overlap) {
        throw Error("chunk size " + std::to_string(options.chunk_size) +
                    " must exceed the overlap " + std::to_string(plan.overlap));
    }
    plan.chunk_count = size == 0 ? 0 : (size + options.chunk_size - 1) / options.chunk_size;
    return plan;
}

// Runs chunks across `jobs` threads with a deterministic merge. `scan_one`
// must be safe to call concurrently for distinct chunks; it returns false and
// fills `gap` when the chunk cannot be read.
template <typename ScanOne>
ScanResult run_chunks(std::uint64_t size, const ScanOptions& options, const ScanPlan& plan,
                      ScanOne scan_one) {
    std::vector<ChunkFindings> findings(static_cast<std::size_t>(plan.chunk_count));
    std::vector<ScanGap> gaps(static_cast<std::size_t>(plan.chunk_count));
    std::vector<char> failed(static_cast<std::size_t>(plan.chunk_count), 0);

    const unsigned jobs = std::max(1u, options.jobs);
    std::mutex progress_mutex;
    std::exception_ptr first_error;
    std::mutex error_mutex;

    const auto worker = [&](unsigned tid) {
        for (std::uint64_t i = tid; i < plan.chunk_count; i += jobs) {
            try {
                const std::uint64_t start = i * options.chunk_size;
                const std::uint64_t owned = std::min(options.chunk_size, size - start);
                ScanGap gap;
                if (scan_one(i, start, owned, findings[static_cast<std::size_t>(i)], gap)) {
                    if (options.progress) {
                        const ChunkProgress progress{
                            static_cast<std::size_t>(i),
                            static_cast<std::size_t>(plan.chunk_count),
                            start,
                            owned,
                            findings[static_cast<std::size_t>(i)].hits.size()};
                        const std::lock_guard<std::mutex> lock(progress_mutex);
                        options.progress(progress);
                    }
                } else {
                    gaps[static_cast<std::size_t>(i)] = std::move(gap);
                    failed[static_cast<std::size_t>(i)] = 1;
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (jobs == 1 || plan.chunk_count <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        const unsigned n = static_cast<unsigned>(
            std::min<std::uint64_t>(jobs, plan.chunk_count));
        threads.reserve(n);
        for (unsigned t = 0; t < n; ++t) {
            threads.emplace_back(worker, t);
        }
        for (std::thread& t : threads) {
            t.join();
        }
    }
    if (first_error) std::rethrow_exception(first_error);

    ScanResult out = merge_findings(std::move(findings));
    for (std::uint64_t i = 0; i < plan.chunk_count; ++i) {
        if (failed[static_cast<std::size_t>(i)]) {
            out.gaps.push_back(std::move(gaps[static_cast<std::size_t>(i)]));
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(HitKind kind) noexcept {
    return kind == HitKind::Ov2SimplePoi ? "ov2_simple_poi" : "settings_fragment";
}

std::string_view to_string(Confidence confidence) noexcept {
    return confidence == Confidence::Structural ? "structural" : "weak";
}

std::uint64_t scan_window(std::uint32_t max_record_len) noexcept {
    return static_cast<std::uint64_t>(max_record_len) + 14;
}

ScanResult scan_image(std::span<const std::uint8_t> image, const ScanOptions& options) {
    const ScanPlan plan = plan_scan(image.size(), options);
    return run_chunks(
        image.size(), options, plan,
        [&](std::uint64_t, std::uint64_t start, std::uint64_t owned,
            ChunkFindings& findings, ScanGap&) {
            const std::uint64_t extent =
                std::min<std::uint64_t>(owned + plan.overlap, image.size() - start);
            findings = scan_buffer(
                image.subspan(static_cast<std::size_t>(start),
                              static_cast<std::size_t>(extent)),
                start, static_cast<std::size_t>(owned), options, plan.window);
            return true;
        });
}

ScanResult scan_image_file(const std::filesystem::path& path, const ScanOptions& options) {
    std::error_code ec;
    const std::uint64_t size = std::filesystem::file_size(path, ec);
    if (ec) {
        throw Error("cannot stat " + path.string() + ": " + ec.message());
    }
    const ScanPlan plan = plan_scan(size, options);
    return run_chunks(
        size, options, plan,
        [&](std::uint64_t, std::uint64_t start, std::uint64_t owned,
            ChunkFindings& findings, ScanGap& gap) {
            const std::uint64_t extent = std::min(owned + plan.overlap, size - start);
            // One handle per chunk keeps parallel workers independent.
            std::ifstream in(path, std::ios::binary);
            if (!in) {
                gap = {start, owned, "cannot open " + path.string()};
                return false;
            }
            in.seekg(static_cast<std::streamoff>(start));
            std::vector<std::uint8_t> buffer(static_cast<std::size_t>(extent));
            in.read(reinterpret_cast<char*>(buffer.data()),
                    static_cast<std::streamsize>(buffer.size()));
            const std::size_t got = static_cast<std::size_t>(in.gcount());
            if (in.bad() || got < owned) {
                gap = {start, owned, "short read at " + std::to_string(start)};
                return false;
            }
            findings = scan_buffer(std::span<const std::uint8_t>(buffer.data(), got),
                                   start, static_cast<std::size_t>(owned), options,
                                   plan.window);
            return true;
        });
}

std::vector<CarveHit> rank_hits(std::vector<CarveHit> hits) {
    std::stable_sort(hits.begin(), hits.end(), [](const CarveHit& a, const CarveHit& b) {
        if (a.confidence != b.confidence) {
            return a.confidence == Confidence::Structural;
        }
        return a.offset < b.offset;
    });
    return hits;
}

}  // namespace ttkit
