#pragma once

#include <string>
#include <string_view>

namespace dart::hash {

/// Lowercase hex SHA-256 digest. Used for cache keys and fixture lookup.
std::string sha256_hex(std::string_view data);

}  // namespace dart::hash
