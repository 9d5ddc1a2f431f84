#pragma once

#include <string>
#include <string_view>

namespace mndsim::digest {

/// SHA-256 of a byte string, as lowercase hex.
std::string sha256_hex(std::string_view bytes);

std::string sha256_file_hex(const std::string& path);

} // namespace mndsim::digest
