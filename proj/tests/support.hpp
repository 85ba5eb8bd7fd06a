#pragma once

#include "bratteli/dsl.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace test_support {

inline std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

#ifdef BRATTELI_DATA_DIR
inline std::string data_path(const std::string& name) { return std::string(BRATTELI_DATA_DIR) + "/" + name; }
inline bratteli::Document load(const std::string& name) { return bratteli::parse(read_file(data_path(name))); }
#endif

/// Number of paths from vertex i of level a to vertex j of level b, by walking edges one at a time.
inline bratteli::BigInt count_paths(const bratteli::Diagram& d, int a, long i, int b, long j) {
  if (a == b) return i == j ? 1 : 0;
  bratteli::BigInt total = 0;
  const auto& m = d.matrix(a);
  for (Eigen::Index k = 0; k < m.cols(); ++k)
    for (bratteli::BigInt c = 0; c < m(i, k); ++c) total += count_paths(d, a + 1, k, b, j);
  return total;
}

}  // namespace test_support
