#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "fixtures.hpp"
#include "freak/error.hpp"
#include "freak/periods.hpp"
#include "freak/quadrature.hpp"

using namespace freak;

namespace {

const DifferentialId kDt{DiffTag::kDtOverChiPlus, 0};

cd principal_root_at(const CurveParams& p, CurveTag tag, cd z) {
  return std::sqrt(RootContinuation(curve_roots(p, tag)).radicand(z));
}

// Composite Simpson on a straight segment with its own square-root
// continuation (nearest sign on a fine grid).
cd simpson_dt_over_chi(const CurveParams& p, cd from, cd to, cd seed, int n) {
  const auto roots = curve_roots(p, CurveTag::kGamma1);
  auto rad = [&](cd z) {
    cd v(1.0, 0.0);
    for (const cd& r : roots) v *= z - r;
    return v;
  };
  cd prev = seed, sum = 0.0;
  const cd h = (to - from) / double(n);
  for (int i = 0; i <= n; ++i) {
    const cd z = from + double(i) * h;
    cd s = std::sqrt(rad(z));
    if (std::abs(s - prev) > std::abs(s + prev)) s = -s;
    prev = s;
    const double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += wgt / s;
  }
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("a loop enclosing no branch point integrates to zero") {
  const CurveParams p = figure_params();
  const cd c(6.0, 0.5);
  PathSpec path{{c + cd(-0.5, -0.5), c + cd(0.5, -0.5), c + cd(0.5, 0.5), c + cd(-0.5, 0.5), c + cd(-0.5, -0.5)},
                principal_root_at(p, CurveTag::kGamma1, c + cd(-0.5, -0.5)),
                CurveTag::kGamma1};
  const LineIntegral li = integrate_segment(kDt, path, p, 1e-13);
  CHECK(std::abs(li.value) <= 1e-13);
  CHECK(std::abs(li.end_root - path.sheet_seed) <= 1e-12 * std::abs(path.sheet_seed));
}

TEST_CASE("loop integrals do not depend on the loop size") {
  const CurveParams p = figure_params();
  const BranchData bd = branch_points(p);
  const cd t1 = bd.t_points[0], t2 = bd.t_points[1];
  auto loop = [&](double size) {
    PathSpec path = loop_around(p, CurveTag::kGamma1, t2, t1, size);
    return integrate_segment(kDt, path, p, 1e-13).value;
  };
  const cd small = loop(0.3), large = loop(0.6);
  CHECK(std::abs(small) > 0.1);
  CHECK(std::abs(small - large) <= 1e-11 * std::abs(small));
}

TEST_CASE("adaptive rule agrees with composite Simpson on a smooth segment") {
  const CurveParams p = figure_params();
  const cd from(2.0, -1.0), to(3.5, 2.0);
  const cd seed = principal_root_at(p, CurveTag::kGamma1, from);
  const LineIntegral li = integrate_segment(kDt, PathSpec{{from, to}, seed, CurveTag::kGamma1}, p, 1e-13);
  const cd ref = simpson_dt_over_chi(p, from, to, seed, 4000);
  CHECK(std::abs(li.value - ref) <= 1e-11);
  CHECK(li.error <= 1e-12);
}

TEST_CASE("conjugate path gives the conjugate integral on a real curve") {
  const CurveParams p = figure_params();
  const std::vector<cd> pts{{2.0, 0.3}, {1.0, 2.5}, {-1.5, 2.0}};
  std::vector<cd> conj_pts;
  for (const cd& z : pts) conj_pts.push_back(std::conj(z));
  const cd seed = principal_root_at(p, CurveTag::kGamma1, pts.front());
  const cd v = integrate_segment(kDt, PathSpec{pts, seed, CurveTag::kGamma1}, p, 1e-13).value;
  const cd w = integrate_segment(kDt, PathSpec{conj_pts, std::conj(seed), CurveTag::kGamma1}, p, 1e-13).value;
  CHECK(std::abs(w - std::conj(v)) <= 1e-12 * std::abs(v));
}

TEST_CASE("Gamma1 periods scale as sigma^-2 under (a, b) -> sigma (a, b)") {
  const CurveParams p = figure_params();
  const double sigma = 1.7;
  CurveParams q = p;
  q.a *= sigma;
  q.b *= sigma;
  const EllipticPeriods e = elliptic_periods(p), f = elliptic_periods(q);
  CHECK(std::abs(f.alpha2 * sigma * sigma - e.alpha2) <= 1e-11 * std::abs(e.alpha2));
  CHECK(std::abs(f.beta2 * sigma * sigma - e.beta2) <= 1e-11 * std::abs(e.beta2));
}

TEST_CASE("elliptic periods on the figure parameters") {
  const EllipticPeriods e = elliptic_periods(figure_params());
  // alpha2 purely imaginary, beta2 real; alpha1, alpha3 real with Re beta = alpha / 2.
  CHECK(std::abs(e.alpha2.real()) <= 1e-12);
  CHECK(e.alpha2.imag() > 0.0);
  CHECK(std::abs(e.beta2.imag()) <= 1e-12);
  CHECK(std::abs(e.alpha1.imag()) <= 1e-12);
  CHECK(std::abs(e.alpha3.imag()) <= 1e-12);
  CHECK(std::abs(e.beta1.real() - 0.5 * e.alpha1.real()) <= 1e-12);
  CHECK(std::abs(e.beta3.real() - 0.5 * e.alpha3.real()) <= 1e-12);
  CHECK(e.alpha2.imag() == doctest::Approx(1.96361).epsilon(1e-5));
  CHECK(e.alpha1.real() == doctest::Approx(3.92268).epsilon(1e-5));
}

TEST_CASE("tail integral is stable under junction doubling") {
  for (const double l0 : {0.0, -0.6385}) {
    const CurveParams p = figure_params(l0);
    AbelianOptions o;
    o.junction_radius = 3.0 * p.b;
    const auto r1 = abelian_moments_to_infinity(p, o);
    o.junction_radius = 6.0 * p.b;
    const auto r2 = abelian_moments_to_infinity(p, o);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(r1[k] - r2[k]) <= 1e-9 * (1.0 + std::abs(r1[k])));
  }
}

TEST_CASE("two path choices give the same Delta modulo the lattice") {
  const Solution& s = fixtures::at_zero();
  const auto angles = ray_angle_candidates(s.params);
  REQUIRE(angles.size() >= 2);
  AbelianOptions o1, o2;
  o1.ray_angle = angles[0];
  o2.ray_angle = angles[1];
  const auto d1 = abelian_to_infinity(s.params, s.pm.C, s.pm.B, o1);
  const auto d2 = abelian_to_infinity(s.params, s.pm.C, s.pm.B, o2);
  // Compare modulo Z^3 + B Z^3 by reducing the difference.
  std::array<cd, 3> diff{};
  for (int j = 0; j < 3; ++j) diff[j] = d1[j] - d2[j];
  const auto red = reduce_modulo_lattice(diff, s.pm.B);
  for (int j = 0; j < 3; ++j) {
    const double re = red[j].real() - std::round(red[j].real());
    CHECK(std::abs(re) <= 1e-9);
    CHECK(std::abs(red[j].imag()) <= 1e-9);
  }
}

TEST_CASE("lattice reduction is idempotent and lands in the fundamental strip") {
  const Solution& s = fixtures::at_zero();
  const std::array<cd, 3> d{cd(2.3, 1.7), cd(-0.9, -2.2), cd(4.1, 0.4)};
  const auto r = reduce_modulo_lattice(d, s.pm.B);
  const auto rr = reduce_modulo_lattice(r, s.pm.B);
  for (int j = 0; j < 3; ++j) {
    CHECK(r[j].real() >= -0.5);
    CHECK(r[j].real() < 0.5);
    CHECK(std::abs(rr[j] - r[j]) <= 1e-14);
  }
}

TEST_CASE("integration near a branch point is refused") {
  const CurveParams p = figure_params();
  const cd t1 = branch_points(p).t_points[0];
  const cd from = t1 + cd(-1.0, 0.0), to = t1 + cd(1.0, 1e-9);
  PathSpec path{{from, to}, principal_root_at(p, CurveTag::kGamma1, from), CurveTag::kGamma1};
  CHECK_THROWS_AS(integrate_segment(kDt, path, p, 1e-13), Error);
}
