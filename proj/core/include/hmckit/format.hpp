#pragma once

#include <string>
#include <vector>

namespace hmckit {

// Shortest-faithful double formatting: %.17g, enough digits that parsing
// the text recovers the exact bit pattern.
std::string format_g17(double v);

// Comma-joined %.17g values, the vector form used in config snapshots and
// spec files.
std::string join_csv(const std::vector<double>& v);

}  // namespace hmckit
