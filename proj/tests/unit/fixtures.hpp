#pragma once

#include "chemolab/params.hpp"
#include "chemolab/scenario.hpp"

#include <string>

namespace chemolab::testing {

// chi = mu = lambda = 1, N = 1, a in [1, 2], b in [5, 6]. Amplitudes are
// powers of two so inf/sup come out exact.
inline ParameterSet p1() {
  ParameterSet p;
  p.chi = 1.0;
  p.lambda = 1.0;
  p.mu = 1.0;
  p.dims = 1;
  p.a = {1.5, 0.25, 20.0, 0.25, 10.0};
  p.b = {5.5, 0.25, 20.0, 0.25, 10.0};
  return p;
}

// Same bounds, no space-time variation.
inline ParameterSet p1_flat(double a = 1.0, double b = 5.0) {
  ParameterSet p = p1();
  p.a = CoefficientSpec::constant(a);
  p.b = CoefficientSpec::constant(b);
  return p;
}

inline std::string config_path(const std::string& name) {
  return std::string(CHEMOLAB_SOURCE_DIR) + "/configs/" + name;
}

} // namespace chemolab::testing
