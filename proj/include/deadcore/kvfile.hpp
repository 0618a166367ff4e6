#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace deadcore {

// FNV-1a 64-bit, the provenance hash for configs and manifests
std::uint64_t fnv1a(std::string_view text);

// Sectioned key/value text:  [section] lines followed by  key = value  lines.
// '#' and ';' start comments. Sections may repeat; entry order is preserved.
struct KvSection {
  std::string name;
  int line = 0;
  std::vector<std::pair<std::string, std::string>> entries;
};

std::vector<KvSection> parse_kv_text(const std::string& text, const std::string& origin);
std::vector<KvSection> load_kv_file(const std::string& path);

// Value helpers; all throw std::runtime_error with origin context on bad input.
double kv_double(const std::string& value, const std::string& context);
long kv_long(const std::string& value, const std::string& context);
std::vector<double> kv_doubles(const std::string& value, const std::string& context);

}  // namespace deadcore
