#pragma once

#include <cstdio>
#include <string>

namespace slitflow {

// 17 significant digits: doubles round-trip exactly, so identical runs give
// byte-identical CSV.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace slitflow
