#include "dimrate/detail/kv.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <stdexcept>

namespace dimrate::detail {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? s.size() - start : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<KeyValue> parse_key_values(std::string_view text) {
  std::vector<KeyValue> out;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    KeyValue kv;
    kv.key = std::string(trim(line.substr(0, eq)));
    kv.value = std::string(trim(line.substr(eq + 1)));
    kv.line = line_no;
    if (kv.key.empty()) throw std::invalid_argument("line " + std::to_string(line_no) + ": empty key");
    out.push_back(std::move(kv));
    if (end == text.size()) break;
  }
  return out;
}

double parse_double(std::string_view token) {
  token = trim(token);
  double v = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (token.empty() || ec != std::errc() || ptr != last) {
    throw std::invalid_argument("malformed number '" + std::string(token) + "'");
  }
  return v;
}

std::int64_t parse_int(std::string_view token) {
  token = trim(token);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw std::invalid_argument("malformed integer '" + std::string(token) + "'");
  }
  return v;
}

bool parse_bool(std::string_view token) {
  token = trim(token);
  if (token == "true" || token == "1" || token == "yes" || token == "on") return true;
  if (token == "false" || token == "0" || token == "no" || token == "off") return false;
  throw std::invalid_argument("malformed boolean '" + std::string(token) + "'");
}

std::vector<std::int64_t> parse_int_list(std::string_view text) {
  std::vector<std::int64_t> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) throw std::invalid_argument("empty list element in '" + std::string(text) + "'");
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int(item));
      continue;
    }
    const auto lo = parse_int(std::string_view(item).substr(0, dots));
    const auto hi = parse_int(std::string_view(item).substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty range '" + item + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(item));
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), ptr);
}

}  // namespace dimrate::detail
