#include "bosonic/config.hpp"

#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bosonic/space.hpp"

namespace bosonic {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

double number(const std::string& key, const std::string& text) {
  char* end = nullptr;
  std::string t = trim(text);
  double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) throw ConfigError("bad number '" + text + "' for " + key);
  return v;
}

double unit_scale(const std::string& key) {
  if (ends_with(key, "_ghz")) return 1e9;
  if (ends_with(key, "_mhz")) return 1e6;
  if (ends_with(key, "_khz")) return 1e3;
  if (ends_with(key, "_hz")) return 1.0;
  return 0.0;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& source) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int n = 0;
  while (std::getline(ss, line)) {
    ++n;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source + ":" + std::to_string(n) + ": expected key = value");
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (k.empty() || v.empty()) throw ConfigError(source + ":" + std::to_string(n) + ": empty key or value");
    if (out.count(k)) throw ConfigError(source + ":" + std::to_string(n) + ": duplicate key " + k);
    out[k] = v;
  }
  return out;
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str(), path);
}

double parse_angular(const std::string& key, const std::string& value) {
  std::string v = trim(value);
  if (ends_with(key, "_radps")) return number(key, v);
  double scale = unit_scale(key);
  if (scale == 0.0) throw ConfigError("key " + key + " has no unit suffix");
  const std::string marker = "*2pi";
  if (!ends_with(v, marker)) {
    throw ConfigError("angular frequency " + key + " = " + value +
                      " needs an explicit *2pi marker (or use a _radps key)");
  }
  return number(key, v.substr(0, v.size() - marker.size())) * scale * 2 * std::numbers::pi;
}

double parse_rate(const std::string& key, const std::string& value) {
  if (ends_with(key, "_per_s")) return number(key, value);
  double scale = unit_scale(key);
  if (scale == 0.0) throw ConfigError("key " + key + " has no unit suffix");
  return number(key, value) * scale;
}

std::string strip_unit(const std::string& key) {
  for (const char* suf : {"_radps", "_ghz", "_mhz", "_khz", "_hz", "_per_s"}) {
    if (ends_with(key, suf)) return key.substr(0, key.size() - std::string(suf).size());
  }
  return key;
}

}  // namespace bosonic
