#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ttkit/errors.hpp"
#include "ttkit/ov2.hpp"

namespace ttkit {

/// Knobs for the synthetic evidence generator. Identical options reproduce
/// identical bytes: the generator is the ground-truth oracle for the
/// end-to-end tests, so nothing about it may depend on platform or clock.
struct FixtureOptions {
    std::uint64_t seed = 1;
    // Scales every collection: N favourites, N recents, N addresses, and
    // smaller fixed caps elsewhere. 0 produces valid empty stores.
    std::size_t records = 8;
    std::uint64_t noise_image_bytes = 0;  // 0 = no carve image
    std::size_t plant_records = 50;       // POIs planted into the noise image
    std::size_t plant_fragments = 3;      // settings elements planted likewise
};

struct FixtureFile {
    std::string rel_path;
    std::vector<std::uint8_t> bytes;
};

struct Fixture {
    std::vector<FixtureFile> files;  // evidence tree plus optional noise image
    std::string manifest_json;       // intended decode results, field by field
};

/// Builds the whole fixture in memory: an Android-application evidence tree
/// (ov2 favourites, map-settings store with shuffled line order, navigation
/// settings store) plus the manifest describing every planted value.
Fixture generate_fixture(const FixtureOptions& options);

/// Writes generate_fixture's output under out_dir, creating directories as
/// needed; the manifest lands in out_dir/manifest.json. Throws Error when a
/// path cannot be written.
void write_fixture(const std::filesystem::path& out_dir, const FixtureOptions& options);

struct PlantedPoi {
    std::uint64_t offset = 0;
    std::string name;
    std::int32_t lon = 0;
    std::int32_t lat = 0;
    std::uint32_t total_len = 0;
};

struct PlantedFragment {
    std::uint64_t offset = 0;
    std::uint32_t length = 0;
};

struct NoiseImage {
    std::vector<std::uint8_t> bytes;
    std::vector<PlantedPoi> pois;           // ascending offset
    std::vector<PlantedFragment> fragments;  // ascending offset
};

/// Random filler with planted records at known offsets. The filler never
/// contains the record type byte or '<', so every carve candidate in the
/// image is a planted one and expected hit counts are exact by construction,
/// not probabilistically.
NoiseImage generate_noise_image(std::uint64_t seed, std::uint64_t size,
                                std::size_t records, std::size_t fragments);

}  // namespace ttkit
