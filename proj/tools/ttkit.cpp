// ttkit command line: decode, carve, detect, fixture.
//
// Machine-readable results go to stdout or --out files; diagnostics and scan
// progress go to stderr. Exit codes: 0 clean, 2 partial decode (the report
// carries issues), 1 fatal.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ttkit/carver.hpp"
#include "ttkit/detect.hpp"
#include "ttkit/digest.hpp"
#include "ttkit/fixture.hpp"
#include "ttkit/pipeline.hpp"
#include "ttkit/report.hpp"
#include "ttkit/version.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kFatal = 1;
constexpr int kPartial = 2;

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ttkit::Error("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw ttkit::Error("cannot write " + path.string());
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
    } else {
        write_text(out_path, text);
    }
}

struct Config {
    std::vector<std::uint32_t> ov2_header_profiles;
    std::optional<std::uint64_t> carve_chunk_size;
    std::optional<std::uint32_t> carve_max_record_len;
    std::optional<unsigned> carve_jobs;
};

// Config file layout:
//   {
//     "ov2_header_profiles": { "<model id>": <header length in bytes>, ... },
//     "carve": { "chunk_size": N, "max_record_len": N, "jobs": N }
//   }
// All keys optional; the profile map is empty by default because header
// layouts differ per device model and no decodable magic is known.
Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ttkit::Error("cannot read config " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ttkit::Error("config " + path + ": " + e.what());
    }
    Config config;
    if (doc.contains("ov2_header_profiles")) {
        for (const auto& [model, length] : doc.at("ov2_header_profiles").items()) {
            if (!length.is_number_unsigned()) {
                throw ttkit::Error("config " + path + ": profile " + model +
                                   " must map to a header byte count");
            }
            config.ov2_header_profiles.push_back(length.get<std::uint32_t>());
        }
    }
    if (doc.contains("carve")) {
        const nlohmann::json& carve = doc.at("carve");
        if (carve.contains("chunk_size")) {
            config.carve_chunk_size = carve.at("chunk_size").get<std::uint64_t>();
        }
        if (carve.contains("max_record_len")) {
            config.carve_max_record_len = carve.at("max_record_len").get<std::uint32_t>();
        }
        if (carve.contains("jobs")) {
            config.carve_jobs = carve.at("jobs").get<unsigned>();
        }
    }
    return config;
}

std::vector<std::string> tree_paths(const fs::path& root) {
    std::vector<std::string> paths;
    if (fs::is_directory(root)) {
        for (const auto& entry : fs::recursive_directory_iterator(root)) {
            if (entry.is_regular_file()) {
                paths.push_back(entry.path().lexically_relative(root).generic_string());
            }
        }
        std::sort(paths.begin(), paths.end());
    } else {
        paths.push_back(root.filename().generic_string());
    }
    return paths;
}

struct DecodeArgs {
    std::string input;
    std::string format = "json";
    std::string out;
    bool strict = false;
    bool reveal_credentials = false;
    std::string run_time;
    std::string config_path;
};

int run_decode(const DecodeArgs& args) {
    ttkit::DecodeOptions options;
    options.strictness = args.strict ? ttkit::Strictness::Strict : ttkit::Strictness::Tolerant;
    if (!args.run_time.empty()) options.run_time = args.run_time;
    if (!args.config_path.empty()) {
        options.ov2_header_profiles = load_config(args.config_path).ov2_header_profiles;
    }

    const fs::path input(args.input);
    const ttkit::EvidenceReport report = fs::is_directory(input)
                                             ? ttkit::decode_tree(input, options)
                                             : ttkit::decode_file(input, options);

    ttkit::ReportOptions report_options;
    report_options.reveal_credentials = args.reveal_credentials;

    if (args.format == "all") {
        if (args.out.empty()) {
            throw ttkit::Error("--format all needs --out DIRECTORY");
        }
        const fs::path dir(args.out);
        write_text(dir / "report.json", ttkit::emit_json(report, report_options));
        write_text(dir / "report.gpx", ttkit::emit_gpx(report));
        write_text(dir / "timeline.csv", ttkit::emit_timeline_csv(report));
    } else if (args.format == "json") {
        emit(ttkit::emit_json(report, report_options), args.out);
    } else if (args.format == "gpx") {
        emit(ttkit::emit_gpx(report), args.out);
    } else {
        emit(ttkit::emit_timeline_csv(report), args.out);
    }
    return report.partial() ? kPartial : kOk;
}

struct CarveArgs {
    std::string image;
    std::uint64_t chunk_size = 4ull << 20;
    std::uint64_t overlap = 0;
    std::uint32_t max_record_len = 1024;
    unsigned jobs = 1;
    bool published_pattern = false;
    std::string out;
    std::string config_path;
    bool quiet = false;
};

int run_carve(CarveArgs args, const CLI::App& cmd) {
    if (!args.config_path.empty()) {
        const Config config = load_config(args.config_path);
        // Explicit flags outrank the config file.
        if (config.carve_chunk_size && cmd.count("--chunk-size") == 0) {
            args.chunk_size = *config.carve_chunk_size;
        }
        if (config.carve_max_record_len && cmd.count("--max-record-len") == 0) {
            args.max_record_len = *config.carve_max_record_len;
        }
        if (config.carve_jobs && cmd.count("--jobs") == 0) {
            args.jobs = *config.carve_jobs;
        }
    }

    ttkit::ScanOptions options;
    options.chunk_size = args.chunk_size;
    options.overlap = args.overlap;
    options.max_record_len = args.max_record_len;
    options.jobs = args.jobs;
    options.published_pattern = args.published_pattern;
    std::mutex progress_mutex;
    if (!args.quiet) {
        options.progress = [&progress_mutex](const ttkit::ChunkProgress& p) {
            const std::scoped_lock lock(progress_mutex);
            std::fprintf(stderr, "progress chunk=%zu/%zu offset=%llu length=%llu hits=%zu\n",
                         p.chunk_index + 1, p.chunk_count,
                         static_cast<unsigned long long>(p.offset),
                         static_cast<unsigned long long>(p.length), p.hits);
        };
    }

    ttkit::ScanResult result = ttkit::scan_image_file(args.image, options);

    ttkit::EvidenceReport report;
    report.tool.version = ttkit::kVersion;
    report.tool.inputs.push_back({fs::path(args.image).generic_string(),
                                  ttkit::sha256_hex_file(args.image)});
    report.carve_hits = ttkit::rank_hits(std::move(result.hits));
    report.carve_gaps = std::move(result.gaps);
    report.published_pattern_hits = std::move(result.published_pattern_hits);
    for (const ttkit::ScanGap& gap : report.carve_gaps) {
        report.issues.push_back({fs::path(args.image).generic_string(), "scan_gap", gap.detail});
    }

    emit(ttkit::emit_json(report), args.out);
    return report.partial() ? kPartial : kOk;
}

struct DetectArgs {
    std::string tree;
    bool json = false;
};

int run_detect(const DetectArgs& args) {
    const std::vector<std::string> paths = tree_paths(args.tree);
    const ttkit::SourceClass source = ttkit::classify_tree(paths);
    std::vector<ttkit::ArtifactExpectation> checklist;
    if (source.kind != ttkit::SourceKind::Unknown) {
        checklist = ttkit::expected_artifacts(source.kind, paths);
    }

    if (args.json) {
        nlohmann::ordered_json doc;
        doc["source"]["kind"] = std::string(to_string(source.kind));
        doc["source"]["model_id"] =
            source.model_id ? nlohmann::ordered_json(*source.model_id) : nullptr;
        nlohmann::ordered_json evidence = nlohmann::ordered_json::array();
        for (const ttkit::EvidencePair& pair : source.evidence) {
            evidence.push_back({{"artifact_class", pair.artifact_class}, {"path", pair.path}});
        }
        doc["source"]["evidence"] = std::move(evidence);
        nlohmann::ordered_json candidates = nlohmann::ordered_json::array();
        for (const ttkit::SourceKind kind : source.candidates) {
            candidates.push_back(std::string(to_string(kind)));
        }
        doc["source"]["candidates"] = std::move(candidates);
        doc["source"]["notes"] = source.notes;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const ttkit::ArtifactExpectation& row : checklist) {
            nlohmann::ordered_json entry;
            entry["artifact_class"] = row.artifact_class;
            entry["expected"] = row.expected;
            entry["found"] = row.found;
            entry["paths"] = row.matching_paths;
            rows.push_back(std::move(entry));
        }
        doc["checklist"] = std::move(rows);
        std::fputs((doc.dump(2) + "\n").c_str(), stdout);
        return kOk;
    }

    std::printf("source: %s\n", std::string(to_string(source.kind)).c_str());
    if (source.model_id) std::printf("model id: %s\n", source.model_id->c_str());
    for (const ttkit::SourceKind kind : source.candidates) {
        std::printf("candidate: %s\n", std::string(to_string(kind)).c_str());
    }
    for (const ttkit::EvidencePair& pair : source.evidence) {
        std::printf("evidence: %s <- %s\n", pair.artifact_class.c_str(), pair.path.c_str());
    }
    for (const std::string& note : source.notes) {
        std::printf("note: %s\n", note.c_str());
    }
    for (const ttkit::ArtifactExpectation& row : checklist) {
        std::printf("artifact: %-45s expected: %-55s %s\n", row.artifact_class.c_str(),
                    row.expected.c_str(), row.found ? "found" : "missing");
        for (const std::string& path : row.matching_paths) {
            std::printf("    %s\n", path.c_str());
        }
    }
    return kOk;
}

struct FixtureArgs {
    std::string out;
    std::uint64_t seed = 1;
    std::size_t records = 8;
    std::uint64_t noise_image = 0;
    std::size_t plant = 50;
    std::size_t plant_fragments = 3;
};

int run_fixture(const FixtureArgs& args) {
    ttkit::FixtureOptions options;
    options.seed = args.seed;
    options.records = args.records;
    options.noise_image_bytes = args.noise_image;
    options.plant_records = args.plant;
    options.plant_fragments = args.plant_fragments;
    ttkit::write_fixture(args.out, options);
    std::fprintf(stderr, "fixture written to %s\n", args.out.c_str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TomTom navigation artifact decoder and carver"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("ttkit ") + ttkit::kVersion);

    DecodeArgs decode_args;
    CLI::App* decode = app.add_subcommand(
        "decode", "Decode an evidence tree or a single store file into a report");
    decode->add_option("input", decode_args.input, "Evidence directory or store file")
        ->required();
    decode->add_option("--format", decode_args.format, "Output format")
        ->check(CLI::IsMember({"json", "gpx", "csv", "all"}))
        ->capture_default_str();
    decode->add_option("--out", decode_args.out,
                       "Output file (or directory with --format all); stdout by default");
    decode->add_flag("--strict", decode_args.strict,
                     "Stop at the first malformed input instead of recording an issue");
    decode->add_flag("--reveal-credentials", decode_args.reveal_credentials,
                     "Emit recovered passwords instead of the redaction placeholder");
    decode->add_option("--run-time", decode_args.run_time,
                       "Timestamp recorded in tool metadata (omitted when not given)");
    decode->add_option("--config", decode_args.config_path, "JSON config file")
        ->check(CLI::ExistingFile);

    CarveArgs carve_args;
    CLI::App* carve = app.add_subcommand(
        "carve", "Scan a raw image for favourite records and settings fragments");
    carve->add_option("image", carve_args.image, "Raw image file")->required();
    carve->add_option("--chunk-size", carve_args.chunk_size, "Streaming chunk size")
        ->transform(CLI::AsSizeValue(false))
        ->capture_default_str();
    carve->add_option("--overlap", carve_args.overlap,
                      "Chunk overlap; 0 picks the smallest safe window")
        ->transform(CLI::AsSizeValue(false))
        ->capture_default_str();
    carve->add_option("--max-record-len", carve_args.max_record_len,
                      "Longest accepted record in bytes")
        ->capture_default_str();
    carve->add_option("--jobs", carve_args.jobs, "Worker threads per chunk")
        ->capture_default_str();
    carve->add_flag("--paper-regex", carve_args.published_pattern,
                    "Also report offsets matching the published favourite-seek pattern");
    carve->add_option("--out", carve_args.out, "Report file; stdout by default");
    carve->add_option("--config", carve_args.config_path, "JSON config file")
        ->check(CLI::ExistingFile);
    carve->add_flag("--quiet", carve_args.quiet, "Suppress progress lines on stderr");

    DetectArgs detect_args;
    CLI::App* detect = app.add_subcommand(
        "detect", "Classify an evidence tree and print the artifact checklist");
    detect->add_option("tree", detect_args.tree, "Evidence directory or file")->required();
    detect->add_flag("--json", detect_args.json, "JSON instead of human-readable text");

    FixtureArgs fixture_args;
    CLI::App* fixture = app.add_subcommand(
        "fixture", "Write a synthetic evidence tree with a ground-truth manifest");
    fixture->add_option("--out", fixture_args.out, "Output directory")->required();
    fixture->add_option("--seed", fixture_args.seed, "Random seed")->capture_default_str();
    fixture->add_option("--records", fixture_args.records, "Records per collection")
        ->capture_default_str();
    fixture->add_option("--noise-image", fixture_args.noise_image,
                        "Also write noise.img of this size with planted records")
        ->transform(CLI::AsSizeValue(false));
    fixture->add_option("--plant", fixture_args.plant, "Records planted into the noise image")
        ->capture_default_str();
    fixture->add_option("--plant-fragments", fixture_args.plant_fragments,
                        "Settings fragments planted into the noise image")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (decode->parsed()) return run_decode(decode_args);
        if (carve->parsed()) return run_carve(carve_args, *carve);
        if (detect->parsed()) return run_detect(detect_args);
        if (fixture->parsed()) return run_fixture(fixture_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFatal;
    }
    return kFatal;
}
