#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace charvoc {

/// Shortest-round-trip decimal rendering (std::to_chars); parse is its exact
/// inverse. Locale-independent, used by every text format in the project.
std::string format_double(double v);
double parse_double(std::string_view text);

std::int64_t parse_int64(std::string_view text);
std::uint64_t parse_uint64(std::string_view text);

/// Lowercase hex armor for arbitrary octet strings (field-separator safety
/// in the line-based logs).
std::string hex_armor(std::string_view raw);
std::string hex_dearmor(std::string_view hex);

std::vector<std::string_view> split(std::string_view text, char sep);

}  // namespace charvoc
