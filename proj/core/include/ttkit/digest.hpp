#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace ttkit {

/// Streaming SHA-256 (FIPS 180-4), used for the input digests recorded in
/// reports. Self-contained so reports stay reproducible across toolchains.
class Sha256 {
public:
    Sha256() noexcept;

    void update(const void* data, std::size_t len) noexcept;
    std::array<std::uint8_t, 32> finish() noexcept;

private:
    void compress(const std::uint8_t* block) noexcept;

    std::array<std::uint32_t, 8> state_;
    std::array<std::uint8_t, 64> buffer_;
    std::uint64_t total_ = 0;
    std::size_t buffered_ = 0;
};

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

/// Streams the file; throws Error when it cannot be read.
std::string sha256_hex_file(const std::filesystem::path& path);

}  // namespace ttkit
