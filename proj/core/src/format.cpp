#include "hmckit/format.hpp"

#include <cstdio>

namespace hmckit {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_csv(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += format_g17(v[i]);
  }
  return out;
}

}  // namespace hmckit
