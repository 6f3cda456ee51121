#include <cmath>
#include <random>

#include <doctest.h>

#include "fixtures.hpp"
#include "freak/error.hpp"
#include "freak/solution.hpp"
#include "freak/verify.hpp"

using namespace freak;

namespace {

std::vector<Sample> samples(int n, unsigned long long seed) {
  BoxSpec box;
  box.lo = {-10.0, -3.0, -1.0};
  box.hi = {10.0, 3.0, 1.0};
  return random_samples(box, n, seed);
}

}  // namespace

TEST_CASE("flat wave returns the amplitude scale") {
  const WaveData w = fixtures::flat_wave(0.7);
  for (const Sample& s : samples(20, 1)) {
    CHECK(eval_field(FieldKind::kNlsAmp2, w, s.x, s.z, s.t) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(eval_field(FieldKind::kKpiU, w, s.x, s.z, s.t) == doctest::Approx(1.4).epsilon(1e-15));
  }
}

TEST_CASE("field is finite and non-negative; KP-I is twice NLS") {
  const WaveData& w = fixtures::at_zero().wave;
  for (const Sample& s : samples(200, 2)) {
    const double nls = eval_field(FieldKind::kNlsAmp2, w, s.x, s.z, s.t);
    CHECK(std::isfinite(nls));
    CHECK(nls >= 0.0);
    CHECK(eval_field(FieldKind::kKpiU, w, s.x, s.z, s.t) == doctest::Approx(2.0 * nls).epsilon(1e-15));
  }
}

TEST_CASE("Hirota field is the NLS field at (x, t, -alpha t)") {
  const WaveData& w = fixtures::at_zero().wave;
  for (const Sample& s : samples(30, 3)) {
    const double hir = eval_field(FieldKind::kHirotaAmp2, w, s.x, 123.0, s.t);
    CHECK(hir == doctest::Approx(eval_field(FieldKind::kNlsAmp2, w, s.x, s.t, -w.alpha * s.t)).epsilon(1e-15));
  }
}

TEST_CASE("grid evaluation matches pointwise evaluation") {
  const WaveData& w = fixtures::at_zero().wave;
  GridSpec spec{{-1.0, 2.0, 2}, {-0.5, 0.5, 2}, 0.25, Plane::kXZ};
  const FieldGrid g = grid_eval(FieldKind::kKpiU, spec, w, 2);
  REQUIRE(g.values.size() == 4);
  for (int iy = 0; iy < 2; ++iy)
    for (int ix = 0; ix < 2; ++ix)
      CHECK(g.value(ix, iy) == eval_field(FieldKind::kKpiU, w, spec.x.at(ix), spec.y.at(iy), 0.25));
  GridSpec xt{{-1.0, 2.0, 3}, {0.0, 1.0, 2}, 0.0, Plane::kXT};
  const FieldGrid h = grid_eval(FieldKind::kHirotaAmp2, xt, w, 1);
  CHECK(h.value(2, 1) == eval_field(FieldKind::kHirotaAmp2, w, 2.0, 0.0, 1.0));
}

TEST_CASE("grid input validation") {
  const WaveData& w = fixtures::at_zero().wave;
  CHECK_THROWS_AS(grid_eval(FieldKind::kKpiU, GridSpec{{0.0, 1.0, 1}, {0.0, 1.0, 4}, 0.0, Plane::kXZ}, w), Error);
  CHECK_THROWS_AS(grid_eval(FieldKind::kKpiU, GridSpec{{0.0, NAN, 4}, {0.0, 1.0, 4}, 0.0, Plane::kXZ}, w), Error);
  CHECK_THROWS_AS(grid_eval(FieldKind::kHirotaAmp2, GridSpec{{0.0, 1.0, 4}, {0.0, 1.0, 4}, 0.0, Plane::kXZ}, w),
                  Error);
}

TEST_CASE("the spectral shift changes the solution") {
  const WaveData& a = fixtures::at_zero().wave;
  const WaveData& b = fixtures::at_resonance().wave;
  double worst = 0.0;
  for (const Sample& s : samples(50, 4))
    worst = std::max(worst, std::abs(eval_field(FieldKind::kKpiU, a, s.x, s.z, 0.3) -
                                     eval_field(FieldKind::kKpiU, b, s.x, s.z, 0.3)));
  CHECK(worst > 1e-2);
}

TEST_CASE("offsets sit on the half-period lattice and the best one wins") {
  const Solution& s = fixtures::at_zero();
  for (const cd& d : s.deltas.raw) CHECK(std::abs(2.0 * d.real() - std::round(2.0 * d.real())) <= 1e-9);
  REQUIRE(s.scores.size() == 8);
  CHECK(s.chosen == 0);
  for (std::size_t i = 1; i < s.scores.size(); ++i)
    if (std::isfinite(s.scores[i].residual)) CHECK(s.scores[i].residual > 100.0 * s.scores[0].residual);
}

TEST_CASE("amplitude scale is positive, constant and independent of the initial phase") {
  const Solution& s = fixtures::at_zero();
  CHECK(s.wave.A == doctest::Approx(0.592099).epsilon(1e-5));
  const ScaleFit& fit = s.scores[std::size_t(s.chosen)].fit;
  CHECK(fit.cv <= 1e-3);
  WaveData shifted = s.wave;
  shifted.z0 = {0.17, -0.31, 0.05};
  const ScaleFit f2 = fit_amplitude_scale(shifted, default_probes(shifted));
  CHECK(f2.A == doctest::Approx(s.wave.A).epsilon(1e-4));
  ScaleFit bad = fit;
  bad.cv = 0.5;
  CHECK_THROWS_AS(checked_scale(bad), Error);
  bad = fit;
  bad.A = -1.0;
  CHECK_THROWS_AS(checked_scale(bad), Error);
}

TEST_CASE("field is periodic on the translation lattice") {
  for (const Solution* s : {&fixtures::at_zero(), &fixtures::at_resonance()})
    CHECK(periodicity_check(s->wave, s->lattice.edges, samples(30, 5)) <= 1e-9);
}

TEST_CASE("z-period 2/k2 at lambda0 = 0") {
  const WaveData& w = fixtures::at_zero().wave;
  CHECK(shift_deviation(w, Eigen::Vector3d(0.0, 2.0 / w.k2, 0.0), samples(30, 6)) <= 1e-9);
}

TEST_CASE("field kind names") {
  CHECK(parse_field_kind("kpi_u") == FieldKind::kKpiU);
  CHECK(parse_field_kind("nls") == FieldKind::kNlsAmp2);
  CHECK(parse_field_kind("hirota") == FieldKind::kHirotaAmp2);
  CHECK_THROWS_AS(parse_field_kind("mkdv"), Error);
}
