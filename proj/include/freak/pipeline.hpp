#pragma once

// End-to-end construction: curve -> periods -> matrices -> offsets -> scale.

#include <string>
#include <vector>

#include "freak/curve.hpp"
#include "freak/periods.hpp"
#include "freak/quadrature.hpp"
#include "freak/solution.hpp"
#include "freak/verify.hpp"

namespace freak {

struct SolveOptions {
  double tol = 1e-13;
  NomeConvention nome = NomeConvention::kPi;
  bool paranoid = false;
  double max_cv = 1e-3;
  std::array<double, 3> z0{};
};

struct CandidateScore {
  std::array<cd, 3> delta{};
  ScaleFit fit;
  double residual = 0.0;  // normalized KP-I residual with the fitted scale
};

struct Solution {
  CurveParams params;
  EllipticPeriods periods;
  ReductionConstants rc;
  PeriodMatrices pm;
  ChiCoeffs chi;
  UvwLattice lattice;
  DeltaCandidates deltas;
  std::vector<CandidateScore> scores;  // primary first, then the half-period alternates
  int chosen = 0;
  WaveData wave;
};

// Probes and residual box used to rank offset candidates.
ProbeGrid default_probes(const WaveData& w);
BoxSpec ranking_box(const WaveData& w);

// Throws NonConstantScale / NegativeScale if the best candidate's scale fit
// is not acceptable.
Solution solve(const CurveParams& params, const SolveOptions& opts = {});

// "k2/(4k1)" and "k2/(4k3)" (the k_j do not depend on lambda0), or a number.
double resolve_lambda0(const std::string& expr, double a, double b, double phi, double tol = 1e-13);

}  // namespace freak
