#pragma once

#include <string>
#include <string_view>

namespace resumeft {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace resumeft
