#pragma once

#include <string>

#include "doctest.h"
#include "pirlab/lincode.hpp"

namespace doctest {
template <>
struct StringMaker<pirlab::CoordSet> {
  static String convert(const pirlab::CoordSet& s) { return s.str().c_str(); }
};
}  // namespace doctest

#include <fstream>
#include <sstream>

inline std::string read_data(const std::string& rel) {
  std::ifstream in(std::string(PIRLAB_DATA_DIR) + "/" + rel);
  REQUIRE_MESSAGE(in.good(), "missing data file " << rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
