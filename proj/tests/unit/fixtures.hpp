#pragma once
// Shared solutions for the unit tests; each is built once per binary.

#include "freak/pipeline.hpp"

namespace fixtures {

inline const freak::Solution& at_zero() {
  static const freak::Solution s = freak::solve(freak::figure_params(0.0));
  return s;
}

inline const freak::Solution& at_resonance() {
  static const freak::Solution s = [] {
    const freak::CurveParams p = freak::figure_params();
    return freak::solve(freak::figure_params(freak::resolve_lambda0("k2/(4k1)", p.a, p.b, p.phi)));
  }();
  return s;
}

// A flat wave: every nome zero, so f == 1 and F == 1 everywhere.
inline freak::WaveData flat_wave(double A) {
  freak::WaveData w = at_zero().wave;
  w.h = {0.0, 0.0, 0.0};
  w.A = A;
  return w;
}

}  // namespace fixtures
