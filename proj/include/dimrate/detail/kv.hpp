#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dimrate::detail {

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

// Parses "key = value" lines. '#' starts a comment; blank lines are skipped.
// Throws std::invalid_argument on a line without '=' or with an empty key.
std::vector<KeyValue> parse_key_values(std::string_view text);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Strict numeric parsing: the whole (trimmed) token must be consumed.
double parse_double(std::string_view token);
std::int64_t parse_int(std::string_view token);
bool parse_bool(std::string_view token);

// "4,8,16" or "4..64" or mixtures such as "2..4,8".
std::vector<std::int64_t> parse_int_list(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace dimrate::detail
