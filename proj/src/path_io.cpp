#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "dimrate/detail/kv.hpp"
#include "dimrate/processes.hpp"

namespace dimrate {

namespace {

constexpr std::array<char, 4> kMagic = {'D', 'R', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put_le(std::ostream& out, T v) {
  std::array<unsigned char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw std::runtime_error("path file: truncated");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(bytes[i]) << (8 * i);
  return v;
}

bool getline_trimmed(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

void write_path_binary(const SamplePath& path, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint64_t>(out, path.values.size());
  for (double v : path.values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw std::runtime_error("path file: write failed");
}

SamplePath read_path_binary(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("path file: bad magic");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kVersion) throw std::runtime_error("path file: unsupported version " + std::to_string(version));
  const auto n = get_le<std::uint64_t>(in);
  SamplePath path;
  path.values.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) path.values.push_back(std::bit_cast<double>(get_le<std::uint64_t>(in)));
  return path;
}

void write_path_binary(const SamplePath& path, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + file.string() + "'");
  write_path_binary(path, out);
}

SamplePath read_path_binary(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + file.string() + "'");
  return read_path_binary(in);
}

void write_path_csv(const SamplePath& path, std::ostream& out) {
  out << "x\n";
  for (double v : path.values) out << detail::format_double(v) << '\n';
}

SamplePath read_path_csv(std::istream& in) {
  std::string line;
  if (!getline_trimmed(in, line) || detail::trim(line) != "x") throw std::runtime_error("path csv: expected header 'x'");
  SamplePath path;
  while (getline_trimmed(in, line)) {
    if (detail::trim(line).empty()) continue;
    path.values.push_back(detail::parse_double(line));
  }
  return path;
}

void write_quantized_csv(const QuantizedPath& path, std::ostream& out) {
  out << "# m=" << path.m << '\n' << "code\n";
  for (auto c : path.codes) out << c << '\n';
}

QuantizedPath read_quantized_csv(std::istream& in) {
  std::string line;
  if (!getline_trimmed(in, line) || line.rfind("# m=", 0) != 0) {
    throw std::runtime_error("quantized csv: expected '# m=<m>' comment line");
  }
  QuantizedPath q;
  q.m = detail::parse_int(std::string_view(line).substr(4));
  if (q.m < 1) throw std::runtime_error("quantized csv: m must be >= 1");
  if (!getline_trimmed(in, line) || detail::trim(line) != "code") {
    throw std::runtime_error("quantized csv: expected header 'code'");
  }
  while (getline_trimmed(in, line)) {
    if (detail::trim(line).empty()) continue;
    q.codes.push_back(detail::parse_int(line));
  }
  return q;
}

}  // namespace dimrate
