// Microbenchmarks for the hot paths: record parsing, serialization, store
// decoding, image scanning, and hashing. Inputs come from the deterministic
// fixture generator so runs are comparable across machines.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>
#include <vector>

#include "ttkit/base64.hpp"
#include "ttkit/carver.hpp"
#include "ttkit/digest.hpp"
#include "ttkit/fixture.hpp"
#include "ttkit/ov2.hpp"
#include "ttkit/settings_xml.hpp"

namespace {

std::vector<std::uint8_t> favourites_blob(std::size_t records) {
    std::vector<std::uint8_t> bytes;
    for (std::size_t i = 0; i < records; ++i) {
        const auto rec = ttkit::make_simple_poi(
            400000 + static_cast<std::int32_t>(i) * 13,
            5200000 + static_cast<std::int32_t>(i) * 7,
            "Waypoint number " + std::to_string(i));
        const auto out = ttkit::serialize_record(rec, i);
        bytes.insert(bytes.end(), out.begin(), out.end());
    }
    return bytes;
}

void bm_ov2_parse(benchmark::State& state) {
    const auto blob = favourites_blob(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ttkit::parse_ov2(blob));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(blob.size()));
}
BENCHMARK(bm_ov2_parse)->Arg(16)->Arg(1024);

void bm_ov2_serialize(benchmark::State& state) {
    const auto file =
        ttkit::parse_ov2(favourites_blob(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ttkit::serialize_ov2(file));
    }
}
BENCHMARK(bm_ov2_serialize)->Arg(16)->Arg(1024);

void bm_base64_decode(benchmark::State& state) {
    const std::string encoded =
        ttkit::base64_encode(std::string(static_cast<std::size_t>(state.range(0)), 'x'));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ttkit::base64_decode(encoded));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(encoded.size()));
}
BENCHMARK(bm_base64_decode)->Arg(64)->Arg(65536);

void bm_store_parse(benchmark::State& state) {
    std::string text = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<Settings>\n";
    for (int i = 0; i < state.range(0); ++i) {
        text += "  <string name=\"MapSettings*00000*/EngineRecents*00000*/"
                "EngineRecents_Recent*" +
                std::to_string(10000 + i).substr(1) + "*/Location_LocName*" +
                std::to_string(10000 + i).substr(1) + "*\">" +
                ttkit::base64_encode("Entry " + std::to_string(i)) + "</string>\n";
    }
    text += "</Settings>\n";
    for (auto _ : state) {
        benchmark::DoNotOptimize(ttkit::parse_store(text));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(text.size()));
}
BENCHMARK(bm_store_parse)->Arg(64)->Arg(2048);

void bm_scan_image(benchmark::State& state) {
    const auto image = ttkit::generate_noise_image(
        99, static_cast<std::uint64_t>(state.range(0)), 20, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ttkit::scan_image(image.bytes));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(image.bytes.size()));
}
BENCHMARK(bm_scan_image)->Arg(1 << 20)->Arg(16 << 20);

void bm_sha256(benchmark::State& state) {
    const std::string data(static_cast<std::size_t>(state.range(0)), 'a');
    for (auto _ : state) {
        benchmark::DoNotOptimize(ttkit::sha256_hex(data));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(data.size()));
}
BENCHMARK(bm_sha256)->Arg(64)->Arg(1 << 20);

}  // namespace

BENCHMARK_MAIN();
