#include <cmath>
#include <numeric>

#include <doctest.h>

#include "fixtures.hpp"
#include "freak/error.hpp"
#include "freak/verify.hpp"

using namespace freak;

namespace {

BoxSpec small_box() {
  BoxSpec b;
  b.lo = {-1.0, -0.5, 0.0};
  b.hi = {1.0, 0.5, 0.1};
  b.count = {7, 7, 2};
  return b;
}

}  // namespace

TEST_CASE("Fornberg weights reproduce the classical stencils") {
  const auto d2 = fornberg_weights(0.0, {-1.0, 0.0, 1.0}, 2);
  CHECK(d2[0] == doctest::Approx(1.0));
  CHECK(d2[1] == doctest::Approx(-2.0));
  CHECK(d2[2] == doctest::Approx(1.0));
  const auto d1 = central_weights(1, 4);
  REQUIRE(d1.size() == 5);
  const double ref[5] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
  for (int i = 0; i < 5; ++i) CHECK(d1[i] == doctest::Approx(ref[i]).epsilon(1e-14));
}

TEST_CASE("central stencils are exact on polynomials of matching degree") {
  for (const int deriv : {1, 2, 4}) {
    for (const int order : {2, 4, 6}) {
      const auto w = central_weights(deriv, order);
      const int r = int(w.size()) / 2;
      const int top = deriv + order - 1;
      for (int deg = 0; deg <= top; ++deg) {
        double s = 0.0;
        for (int i = -r; i <= r; ++i) s += w[std::size_t(i + r)] * std::pow(double(i), deg);
        const double exact = deg == deriv ? std::tgamma(deriv + 1.0) : 0.0;
        CHECK(s == doctest::Approx(exact).epsilon(1e-10).scale(1.0));
      }
    }
  }
}

TEST_CASE("flat field has zero residual and no measurable convergence") {
  const WaveData w = fixtures::flat_wave(0.6);
  const ResidualReport r = kpi_residual(w, small_box(), 1e-2, 4);
  // Exact derivatives vanish; what is left is rounding amplified by the stencils.
  CHECK(r.max_abs_residual <= r.roundoff);
  CHECK(r.roundoff <= 1e-5);
  CHECK_THROWS_AS(convergence_order(w, small_box(), 1e-2, 4), Error);
}

TEST_CASE("residual of the solution is small and converges at the stencil order") {
  const WaveData& w = fixtures::at_zero().wave;
  const ResidualReport r = kpi_residual(w, small_box(), 4.0 * default_step(w), 6);
  CHECK(r.normalized_residual <= 1e-5);
  CHECK(auto_convergence_order(w, small_box(), 2).order_estimate == doctest::Approx(2.0).epsilon(0.25));
  CHECK(auto_convergence_order(w, small_box(), 4).order_estimate == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("wrong amplitude scale is detected") {
  WaveData w = fixtures::at_zero().wave;
  const double step = 4.0 * default_step(w);
  const double good = kpi_residual(w, small_box(), step, 6).normalized_residual;
  w.A *= 1.01;
  CHECK(kpi_residual(w, small_box(), step, 6).normalized_residual > 100.0 * good);
}

TEST_CASE("residual input validation") {
  const WaveData& w = fixtures::at_zero().wave;
  CHECK_THROWS_AS(kpi_residual(w, small_box(), 0.0, 4), Error);
  CHECK_THROWS_AS(kpi_residual(w, small_box(), 1e-2, 3), Error);
  BoxSpec empty = small_box();
  empty.count = {0, 1, 1};
  CHECK_THROWS_AS(kpi_residual(w, empty, 1e-2, 4), Error);
}

TEST_CASE("random samples are reproducible and inside the box") {
  const BoxSpec box = small_box();
  const auto a = random_samples(box, 100, 42), b = random_samples(box, 100, 42), c = random_samples(box, 100, 43);
  REQUIRE(a.size() == 100);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].t == b[i].t);
    CHECK(a[i].x >= box.lo[0]);
    CHECK(a[i].x <= box.hi[0]);
    CHECK(a[i].z >= box.lo[1]);
    CHECK(a[i].z <= box.hi[1]);
    differs = differs || a[i].x != c[i].x;
  }
  CHECK(differs);
}

TEST_CASE("shift deviation: zero shift and perturbed lattice edges") {
  const Solution& s = fixtures::at_zero();
  BoxSpec box;
  box.lo = {-10.0, -3.0, -1.0};
  box.hi = {10.0, 3.0, 1.0};
  const auto pts = random_samples(box, 30, 8);
  CHECK(shift_deviation(s.wave, Eigen::Vector3d::Zero(), pts) == 0.0);
  Eigen::Matrix3d edges = s.lattice.edges;
  edges(0, 0) *= 1.01;
  CHECK(periodicity_check(s.wave, edges, pts) >= 1e-4);
}

TEST_CASE("envelope drift: zero interval, reversal, and the group velocity") {
  const WaveData& w = fixtures::at_zero().wave;
  const DriftWindow win;
  const double dx = (win.x_max - win.x_min) / (win.count - 1);
  CHECK(envelope_drift(w, 0.1, 0.1, win).shift == 0.0);
  const double fwd = envelope_drift(w, 0.0, 0.3, win).shift;
  const double back = envelope_drift(w, 0.3, 0.0, win).shift;
  CHECK(std::abs(fwd + back) <= 2.0 * dx);
  const double v = -(w.kappa1 - w.kappa3) / (w.k1 - w.k3);
  CHECK(std::abs(fwd - 0.3 * v) <= 0.1 * std::abs(0.3 * v));
}

TEST_CASE("peaks are local maxima of the grid") {
  const WaveData& w = fixtures::at_zero().wave;
  const FieldGrid g = grid_eval(FieldKind::kKpiU, GridSpec{{-6.0, 6.0, 121}, {-2.0, 2.0, 41}, 0.0, Plane::kXZ}, w, 1);
  const auto peaks = find_peaks(g, 0.5);
  REQUIRE(!peaks.empty());
  const double gmax = *std::max_element(g.values.begin(), g.values.end());
  for (const Peak& p : peaks) {
    CHECK(p.value >= 0.5 * gmax);
    CHECK(p.value == doctest::Approx(eval_field(FieldKind::kKpiU, w, p.x, p.y, 0.0)).epsilon(1e-12));
    CHECK(p.value >= eval_field(FieldKind::kKpiU, w, p.x + 1e-3, p.y, 0.0));
    CHECK(p.value >= eval_field(FieldKind::kKpiU, w, p.x, p.y - 1e-3, 0.0));
  }
}
