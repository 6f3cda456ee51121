#include "freak/pipeline.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "freak/error.hpp"

namespace freak {

ProbeGrid default_probes(const WaveData& w) {
  ProbeGrid g;
  const double lx = 1.0 / std::max(std::abs(w.k1), std::abs(w.k3));
  const double lz = 1.0 / std::abs(w.k2);
  const double lt = 1.0 / std::max(std::abs(w.kappa1), std::abs(w.kappa3));
  g.lo = {0.113 * lx, 0.071 * lz, 0.037 * lt};
  g.hi = {g.lo[0] + 2.0 * lx, g.lo[1] + lz, g.lo[2] + 0.5 * lt};
  g.count = {5, 5, 3};
  return g;
}

BoxSpec ranking_box(const WaveData& w) {
  const ProbeGrid p = default_probes(w);
  BoxSpec b;
  b.lo = p.lo;
  b.hi = p.hi;
  b.count = {5, 5, 2};
  return b;
}

Solution solve(const CurveParams& raw, const SolveOptions& opts) {
  Solution s;
  s.params = validate_params(raw);
  s.periods = elliptic_periods(s.params, opts.tol);
  s.rc = reduction_constants(s.periods, opts.nome);
  s.pm = period_matrices(s.rc, s.params);
  s.chi = chi_coeffs(s.params);
  s.lattice = uvw_and_lattice(s.pm, s.chi, opts.paranoid);
  s.deltas = delta_offsets(s.params, s.pm, std::max(opts.tol, 1e-13));

  std::vector<std::array<cd, 3>> candidates{s.deltas.primary};
  candidates.insert(candidates.end(), s.deltas.alternates.begin(), s.deltas.alternates.end());
  WaveData base = wave_data(s.params, s.rc, {}, 0.0, opts.z0);
  const ProbeGrid probes = default_probes(base);
  const BoxSpec box = ranking_box(base);
  const double step = 4.0 * default_step(base);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    CandidateScore sc;
    sc.delta = candidates[i];
    WaveData w = base;
    w.delta = sc.delta;
    try {
      sc.fit = fit_amplitude_scale(w, probes);
      w.A = sc.fit.A;
      sc.residual = std::isfinite(w.A) ? kpi_residual(w, box, step, 6).normalized_residual
                                       : std::numeric_limits<double>::infinity();
    } catch (const Error& e) {
      if (e.code() != Errc::kDenominatorUnderflow) throw;
      sc.residual = std::numeric_limits<double>::infinity();
    }
    if (sc.residual < best) {
      best = sc.residual;
      s.chosen = int(i);
    }
    s.scores.push_back(sc);
  }
  const CandidateScore& pick = s.scores[std::size_t(s.chosen)];
  s.wave = base;
  s.wave.delta = pick.delta;
  s.wave.A = checked_scale(pick.fit, opts.max_cv);
  return s;
}

double resolve_lambda0(const std::string& expr, double a, double b, double phi, double tol) {
  if (expr == "k2/(4k1)" || expr == "k2/(4k3)") {
    const CurveParams p = validate_params(a, b, phi, 0.0, 0.0);
    const ReductionConstants rc = reduction_constants(elliptic_periods(p, tol));
    const WaveData w = wave_data(p, rc);
    return w.k2 / (4.0 * (expr == "k2/(4k1)" ? w.k1 : w.k3));
  }
  double v = 0.0;
  const char* first = expr.data();
  const char* last = expr.data() + expr.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw Error(Errc::kInvalidArgument, "lambda0 must be a number, 'k2/(4k1)' or 'k2/(4k3)', got '" + expr + "'");
  }
  return v;
}

}  // namespace freak
