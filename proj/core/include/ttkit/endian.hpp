#pragma once

#include <cstdint>
#include <vector>

namespace ttkit {

inline std::uint32_t load_u32le(const std::uint8_t* p) noexcept {
    return static_cast<std::uint32_t>(p[0]) |
           static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 |
           static_cast<std::uint32_t>(p[3]) << 24;
}

inline std::int32_t load_i32le(const std::uint8_t* p) noexcept {
    return static_cast<std::int32_t>(load_u32le(p));
}

inline void store_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

inline void store_i32le(std::vector<std::uint8_t>& out, std::int32_t v) {
    store_u32le(out, static_cast<std::uint32_t>(v));
}

}  // namespace ttkit
