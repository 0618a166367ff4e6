#include "deadcore/kvfile.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace deadcore {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string strip_comment(const std::string& s) {
  for (size_t i = 0; i < s.size(); ++i)
    if (s[i] == '#' || s[i] == ';') return s.substr(0, i);
  return s;
}

}  // namespace

std::vector<KvSection> parse_kv_text(const std::string& text, const std::string& origin) {
  std::vector<KvSection> sections;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": malformed section header '" + line + "'");
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty())
        throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty section name");
      sections.push_back(KvSection{name, lineno, {}});
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": expected 'key = value', got '" + line + "'");
    if (sections.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": entry before any [section]");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
    sections.back().entries.emplace_back(key, value);
  }
  return sections;
}

std::vector<KvSection> load_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kv_text(buf.str(), path);
}

double kv_double(const std::string& value, const std::string& context) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    if (!std::isfinite(v)) throw std::invalid_argument("not finite");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(context + ": expected a finite number, got '" + value + "'");
  }
}

long kv_long(const std::string& value, const std::string& context) {
  try {
    size_t pos = 0;
    long v = std::stol(value, &pos);
    while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(context + ": expected an integer, got '" + value + "'");
  }
}

std::vector<double> kv_doubles(const std::string& value, const std::string& context) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string tok;
  while (in >> tok) {
    if (!tok.empty() && tok.back() == ',') tok.pop_back();
    if (tok.empty()) continue;
    out.push_back(kv_double(tok, context));
  }
  if (out.empty()) throw std::runtime_error(context + ": expected at least one number");
  return out;
}

}  // namespace deadcore
