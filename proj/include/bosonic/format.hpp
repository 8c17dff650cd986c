#pragma once

#include <string>

namespace bosonic {

// Rounds to 12 significant digits.
double round12(double v);
// Shortest decimal that round-trips round12(v).
std::string fmt_num(double v);

}  // namespace bosonic
