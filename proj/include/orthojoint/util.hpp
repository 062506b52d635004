#pragma once

#include <string>
#include <string_view>

namespace orthojoint {

// 17 significant digits, enough to reload any double exactly.
std::string format_double(double v);

// Whole-string decimal parse; false on trailing junk or empty input.
bool parse_double(std::string_view s, double& out);

}  // namespace orthojoint
