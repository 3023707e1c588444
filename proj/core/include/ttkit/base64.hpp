#pragma once

#include <string>
#include <string_view>

namespace ttkit {

struct Base64Decode {
    bool ok = false;
    std::string bytes;  // decoded payload when ok
    std::string error;  // reason when not
};

/// RFC 4648 decoder, lenient in exactly one respect: nonzero leftover bits in
/// the final quantum are ignored rather than rejected, because stores in the
/// wild carry such values (e.g. "Nk==" for "6" where "Ng==" is canonical).
Base64Decode base64_decode(std::string_view text);

/// Canonical RFC 4648 encoding with padding.
std::string base64_encode(std::string_view bytes);

}  // namespace ttkit
