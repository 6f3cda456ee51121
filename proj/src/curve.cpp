#include "freak/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "freak/error.hpp"

namespace freak {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw Error(Errc::kNonFinite, std::string(name) + " is not finite");
  }
}

}  // namespace

CurveParams figure_params(double lambda0) {
  return CurveParams{1.0 / 1.3, 1.3, 0.3 * std::numbers::pi, lambda0, 0.1};
}

CurveParams validate_params(double a, double b, double phi, double lambda0, double alpha,
                            bool relaxed_angle) {
  require_finite(a, "a");
  require_finite(b, "b");
  require_finite(phi, "phi");
  require_finite(lambda0, "lambda0");
  require_finite(alpha, "alpha");
  if (a <= 0.0) {
    std::ostringstream os;
    os << "a = " << a << " must be positive";
    throw Error(Errc::kNonPositiveModulus, os.str());
  }
  if (b <= a) {
    std::ostringstream os;
    os << "b = " << b << " must exceed a = " << a;
    throw Error(Errc::kModulusOrder, os.str());
  }
  constexpr double kPi = std::numbers::pi;
  if (!relaxed_angle && !(phi > kPi / 4 && phi < kPi / 2)) {
    std::ostringstream os;
    os << "phi = " << phi << " outside the open interval (pi/4, pi/2)";
    throw Error(Errc::kAngleRange, os.str());
  }
  return CurveParams{a, b, phi, lambda0, alpha};
}

CurveParams validate_params(const CurveParams& raw, bool relaxed_angle) {
  return validate_params(raw.a, raw.b, raw.phi, raw.lambda0, raw.alpha, relaxed_angle);
}

const char* to_string(CurveTag tag) noexcept {
  switch (tag) {
    case CurveTag::kGamma3: return "Gamma3";
    case CurveTag::kGamma1: return "Gamma1";
    case CurveTag::kGamma2: return "Gamma2";
    case CurveTag::kGammaPlus: return "Gamma+";
    case CurveTag::kGammaMinus: return "Gamma-";
  }
  return "?";
}

BranchData branch_points(const CurveParams& p) {
  BranchData out;
  const cd ea = std::polar(p.a, p.phi);
  const cd eb = std::polar(p.b, p.phi);
  const cd l0(p.lambda0, 0.0);
  out.lambda_points = {l0 + ea, l0 + std::conj(ea), l0 - ea, l0 - std::conj(ea),
                       l0 + eb, l0 + std::conj(eb), l0 - eb, l0 - std::conj(eb)};
  const cd t1 = std::polar(p.b * p.b, 2.0 * p.phi);
  const cd t2 = std::polar(p.a * p.a, 2.0 * p.phi);
  out.t_points = {t1, t2, std::conj(t1), std::conj(t2)};
  // s = t + a^2 b^2 / t maps t1 and t2 to the same pair.
  const double a2 = p.a * p.a, b2 = p.b * p.b;
  const cd sc((a2 + b2) * std::cos(2.0 * p.phi), (b2 - a2) * std::sin(2.0 * p.phi));
  const double ab2 = 2.0 * p.a * p.b;
  out.s_plus = {cd(-ab2, 0.0), sc, std::conj(sc)};
  out.s_minus = {cd(ab2, 0.0), sc, std::conj(sc)};
  return out;
}

std::vector<cd> curve_roots(const CurveParams& params, CurveTag tag) {
  const BranchData bd = branch_points(params);
  switch (tag) {
    case CurveTag::kGamma3:
      return {bd.lambda_points.begin(), bd.lambda_points.end()};
    case CurveTag::kGamma1:
      return {bd.t_points.begin(), bd.t_points.end()};
    case CurveTag::kGamma2: {
      std::vector<cd> r(bd.t_points.begin(), bd.t_points.end());
      r.push_back(cd(0.0, 0.0));
      return r;
    }
    case CurveTag::kGammaPlus:
      return {bd.s_plus.begin(), bd.s_plus.end()};
    case CurveTag::kGammaMinus:
      return {bd.s_minus.begin(), bd.s_minus.end()};
  }
  return {};
}

std::vector<cd> expand_monic(std::span<const cd> roots) {
  std::vector<cd> c{cd(1.0, 0.0)};
  for (const cd& r : roots) {
    std::vector<cd> next(c.size() + 1, cd(0.0, 0.0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

ChiCoeffs chi_coeffs(const CurveParams& p) {
  const double l0 = p.lambda0;
  ChiCoeffs closed{-8.0 * l0, 28.0 * l0 * l0 - 2.0 * (p.a * p.a + p.b * p.b) * std::cos(2.0 * p.phi)};

  const BranchData bd = branch_points(p);
  const std::vector<cd> poly = expand_monic(bd.lambda_points);
  const double scale = 1.0 + std::abs(l0) * std::abs(l0) + p.b * p.b;
  if (std::abs(poly[1] - closed.chi1) > 1e-10 * scale || std::abs(poly[2] - closed.chi2) > 1e-10 * scale) {
    std::ostringstream os;
    os << "closed-form chi coefficients (" << closed.chi1 << ", " << closed.chi2
       << ") disagree with expansion (" << poly[1] << ", " << poly[2] << ")";
    throw Error(Errc::kSelfCheckFailed, os.str());
  }
  return closed;
}

double min_pairwise_distance(std::span<const cd> points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::min(best, std::abs(points[i] - points[j]));
    }
  }
  return best;
}

}  // namespace freak
