#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cavnoise::io {

/// Shortest round-trip representation in scientific notation, e.g. "1.5e+00".
std::string format_double(double value);

/// Strict double parse of the whole token; throws std::runtime_error.
double parse_double(std::string_view token, std::string_view what);

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

/// Splits `key = value` lines, dropping blank lines and `#` comments.
std::vector<KeyValue> parse_key_values(std::string_view text);

std::string read_text(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

std::string trim(std::string_view s);

}  // namespace cavnoise::io
