#pragma once

#include <map>
#include <string>

namespace bosonic {

// `key = value` lines; '#' starts a comment. Duplicate keys are errors.
std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& source);
std::map<std::string, std::string> read_key_value_file(const std::string& path);

// Angular frequency from a value and a key unit suffix. Keys ending in
// _radps take a plain number; _ghz/_mhz/_khz/_hz keys need an explicit
// "*2pi" marker on the value (cyclic frequency times 2 pi).
double parse_angular(const std::string& key, const std::string& value);
// Plain rate in 1/s from a _khz/_mhz/_hz/_per_s key; no 2 pi factor.
double parse_rate(const std::string& key, const std::string& value);
// Strips a known unit suffix: "omega_q_ghz" -> "omega_q".
std::string strip_unit(const std::string& key);

}  // namespace bosonic
