#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "freak/curve.hpp"
#include "freak/error.hpp"

using namespace freak;

namespace {

// chi^2 straight from the two quartic factors.
cd chi_squared(const CurveParams& p, cd lam) {
  const cd u = lam - p.lambda0;
  const double c2 = std::cos(2.0 * p.phi);
  const cd u2 = u * u;
  return (u2 * u2 - 2.0 * p.a * p.a * u2 * c2 + std::pow(p.a, 4)) *
         (u2 * u2 - 2.0 * p.b * p.b * u2 * c2 + std::pow(p.b, 4));
}

// Naive coefficient convolution, independent of expand_monic.
std::vector<double> multiply(const std::vector<double>& f, const std::vector<double>& g) {
  std::vector<double> out(f.size() + g.size() - 1, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) out[i + j] += f[i] * g[j];
  return out;
}

// (l - l0)^4 - 2 m^2 (l - l0)^2 c + m^4 expanded in l, highest degree first.
std::vector<double> quartic(double m, double l0, double c) {
  const std::vector<double> lin{1.0, -l0};
  const std::vector<double> sq = multiply(lin, lin);
  const std::vector<double> q4 = multiply(sq, sq);
  std::vector<double> out = q4;
  for (std::size_t i = 0; i < sq.size(); ++i) out[2 + i] += -2.0 * m * m * c * sq[i];
  out[4] += std::pow(m, 4);
  return out;
}

CurveParams random_params(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> ratio(1.05, 3.0), scale(0.3, 2.0),
      angle(0.26 * std::numbers::pi, 0.49 * std::numbers::pi), shift(-2.0, 2.0);
  const double a = scale(gen);
  return CurveParams{a, a * ratio(gen), angle(gen), shift(gen), 0.1};
}

}  // namespace

TEST_CASE("branch points annihilate the branch polynomial") {
  std::mt19937_64 gen(7);
  for (int n = 0; n < 50; ++n) {
    const CurveParams p = random_params(gen);
    const BranchData bd = branch_points(p);
    const double scale = std::pow(p.b + std::abs(p.lambda0) + 1.0, 8);
    for (const cd& e : bd.lambda_points) CHECK(std::abs(chi_squared(p, e)) <= 1e-12 * scale);
  }
}

TEST_CASE("Gamma3 roots move rigidly with lambda0") {
  CurveParams p = figure_params(0.0);
  const auto base = curve_roots(p, CurveTag::kGamma3);
  p.lambda0 = -0.6385;
  const auto moved = curve_roots(p, CurveTag::kGamma3);
  REQUIRE(base.size() == moved.size());
  for (std::size_t i = 0; i < base.size(); ++i) CHECK(std::abs(moved[i] - base[i] - p.lambda0) <= 1e-14);
}

TEST_CASE("quotient curves have the expected root counts") {
  const CurveParams p = figure_params();
  CHECK(curve_roots(p, CurveTag::kGamma3).size() == 8);
  CHECK(curve_roots(p, CurveTag::kGamma1).size() == 4);
  CHECK(curve_roots(p, CurveTag::kGamma2).size() == 5);
  CHECK(curve_roots(p, CurveTag::kGammaPlus).size() == 3);
  CHECK(curve_roots(p, CurveTag::kGammaMinus).size() == 3);
}

TEST_CASE("chi coefficients match an independent expansion") {
  std::mt19937_64 gen(11);
  for (int n = 0; n < 1000; ++n) {
    const CurveParams p = random_params(gen);
    const double c = std::cos(2.0 * p.phi);
    const auto ref = multiply(quartic(p.a, p.lambda0, c), quartic(p.b, p.lambda0, c));
    const ChiCoeffs chi = chi_coeffs(p);
    const double tol = 1e-12 * (1.0 + std::abs(ref[2]));
    CHECK(std::abs(chi.chi1 - ref[1]) <= 1e-12 * (1.0 + std::abs(ref[1])));
    CHECK(std::abs(chi.chi2 - ref[2]) <= tol);

    const auto roots = curve_roots(p, CurveTag::kGamma3);
    const auto coeffs = expand_monic(roots);
    REQUIRE(coeffs.size() == ref.size());
    double worst_imag = 0.0, worst_diff = 0.0, size = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      worst_imag = std::max(worst_imag, std::abs(coeffs[i].imag()));
      worst_diff = std::max(worst_diff, std::abs(coeffs[i].real() - ref[i]));
      size = std::max(size, std::abs(ref[i]));
    }
    CHECK(worst_imag <= 1e-12 * size);
    CHECK(worst_diff <= 1e-12 * size);
  }
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(validate_params(figure_params()));
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::kIo;
  };
  CHECK(code([] { validate_params(0.0, 1.0, 1.0, 0.0, 0.0); }) == Errc::kNonPositiveModulus);
  CHECK(code([] { validate_params(1.2, 1.0, 1.0, 0.0, 0.0); }) == Errc::kModulusOrder);
  CHECK(code([] { validate_params(1.0, 1.0, 1.0, 0.0, 0.0); }) == Errc::kModulusOrder);
  CHECK(code([] { validate_params(0.5, 1.0, 0.2, 0.0, 0.0); }) == Errc::kAngleRange);
  CHECK(code([] { validate_params(0.5, 1.0, std::numbers::pi / 2, 0.0, 0.0); }) == Errc::kAngleRange);
  CHECK(code([] { validate_params(0.5, 1.0, std::nan(""), 0.0, 0.0); }) == Errc::kNonFinite);
  CHECK_NOTHROW(validate_params(0.5, 1.0, 0.2, 0.0, 0.0, true));
}

TEST_CASE("min pairwise distance") {
  const std::vector<cd> pts{{0, 0}, {3, 4}, {0, 1}};
  CHECK(min_pairwise_distance(pts) == doctest::Approx(1.0));
}
