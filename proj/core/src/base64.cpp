#include "ttkit/base64.hpp"

#include <array>
#include <cstdint>

namespace ttkit {
namespace {

constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

constexpr std::array<std::int8_t, 256> build_reverse() {
    std::array<std::int8_t, 256> table{};
    for (auto& v : table) v = -1;
    for (std::size_t i = 0; i < kAlphabet.size(); ++i) {
        table[static_cast<unsigned char>(kAlphabet[i])] = static_cast<std::int8_t>(i);
    }
    return table;
}

constexpr auto kReverse = build_reverse();

}  // namespace

Base64Decode base64_decode(std::string_view text) {
    if (text.empty()) {
        return {true, "", ""};
    }
    if (text.size() % 4 != 0) {
        return {false, "", "length not a multiple of 4"};
    }

    Base64Decode out;
    out.bytes.reserve(text.size() / 4 * 3);
    for (std::size_t quad = 0; quad < text.size(); quad += 4) {
        const bool final_quad = quad + 4 == text.size();
        int values[4];
        int data_chars = 4;
        for (int i = 0; i < 4; ++i) {
            const char c = text[quad + i];
            if (c == '=') {
                // Padding may only close the final quantum, in positions 2..3.
                if (!final_quad || i < 2) {
                    return {false, "", "misplaced padding"};
                }
                if (data_chars == 4) data_chars = i;
                values[i] = 0;
                continue;
            }
            if (data_chars != 4) {
                return {false, "", "data after padding"};
            }
            const std::int8_t v = kReverse[static_cast<unsigned char>(c)];
            if (v < 0) {
                return {false, "", "invalid character"};
            }
            values[i] = v;
        }
        const std::uint32_t word = static_cast<std::uint32_t>(values[0]) << 18 |
                                   static_cast<std::uint32_t>(values[1]) << 12 |
                                   static_cast<std::uint32_t>(values[2]) << 6 |
                                   static_cast<std::uint32_t>(values[3]);
        out.bytes.push_back(static_cast<char>(word >> 16 & 0xFF));
        if (data_chars >= 3) out.bytes.push_back(static_cast<char>(word >> 8 & 0xFF));
        if (data_chars == 4) out.bytes.push_back(static_cast<char>(word & 0xFF));
    }
    out.ok = true;
    return out;
}

std::string base64_encode(std::string_view bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        const std::uint32_t word = static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i])) << 16 |
                                   static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i + 1])) << 8 |
                                   static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i + 2]));
        out.push_back(kAlphabet[word >> 18]);
        out.push_back(kAlphabet[word >> 12 & 63]);
        out.push_back(kAlphabet[word >> 6 & 63]);
        out.push_back(kAlphabet[word & 63]);
    }
    const std::size_t rest = bytes.size() - i;
    if (rest == 1) {
        const std::uint32_t word = static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i])) << 16;
        out.push_back(kAlphabet[word >> 18]);
        out.push_back(kAlphabet[word >> 12 & 63]);
        out.append("==");
    } else if (rest == 2) {
        const std::uint32_t word = static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i])) << 16 |
                                   static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i + 1])) << 8;
        out.push_back(kAlphabet[word >> 18]);
        out.push_back(kAlphabet[word >> 12 & 63]);
        out.push_back(kAlphabet[word >> 6 & 63]);
        out.push_back('=');
    }
    return out;
}

}  // namespace ttkit
