#pragma once

// Spectral curve of the three-phase family:
//
//   chi^2 = ((l-l0)^4 - 2a^2 (l-l0)^2 cos2phi + a^4) ((l-l0)^4 - 2b^2 (l-l0)^2 cos2phi + b^4)
//
// together with the quotient curves it covers.  With t = (l-l0)^2 and
// s = t + a^2 b^2 / t:
//
//   Gamma1 : chi_+^2 = (t^2 - 2a^2 t cos2phi + a^4)(t^2 - 2b^2 t cos2phi + b^4)
//   Gamma2 : chi_-^2 = t * (same quartic)
//   Gamma+-: nu_+-^2 = (s +- 2ab)(s^2 - 2(a^2+b^2) s cos2phi + a^4 + b^4 + 2a^2b^2 cos4phi)

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace freak {

using cd = std::complex<double>;

struct CurveParams {
  double a = 0.0;        // minor modulus
  double b = 0.0;        // major modulus
  double phi = 0.0;      // angle, radians
  double lambda0 = 0.0;  // spectral shift
  double alpha = 0.0;    // Hirota dispersion coefficient
};

// The parameter set used for the published figures: ab = 1, sqrt(b/a) = 1.3,
// phi = 0.3 pi, alpha = 0.1.
CurveParams figure_params(double lambda0 = 0.0);

// Throws Error on 0 < a < b or pi/4 < phi < pi/2 violations.  With
// relaxed_angle the angle interval is not enforced (closed-form checks only;
// the cycle conventions assume the open interval).
CurveParams validate_params(double a, double b, double phi, double lambda0, double alpha,
                            bool relaxed_angle = false);
CurveParams validate_params(const CurveParams& raw, bool relaxed_angle = false);

enum class CurveTag { kGamma3, kGamma1, kGamma2, kGammaPlus, kGammaMinus };

const char* to_string(CurveTag tag) noexcept;

struct BranchData {
  std::array<cd, 8> lambda_points;  // lambda0 +- a e^{+-i phi}, lambda0 +- b e^{+-i phi}
  std::array<cd, 4> t_points;       // t1 = b^2 e^{2i phi}, t2 = a^2 e^{2i phi}, conjugates
  std::array<cd, 3> s_plus;         // -2ab and the conjugate pair
  std::array<cd, 3> s_minus;        // +2ab and the conjugate pair
};

BranchData branch_points(const CurveParams& params);

// Finite branch points of the given curve in its own coordinate.  Every
// radicand is monic, so the curve is y^2 = prod (z - r).
std::vector<cd> curve_roots(const CurveParams& params, CurveTag tag);

// Coefficients of the monic polynomial prod (z - r), highest degree first.
std::vector<cd> expand_monic(std::span<const cd> roots);

struct ChiCoeffs {
  double chi1 = 0.0;  // coefficient of lambda^7
  double chi2 = 0.0;  // coefficient of lambda^6
};

// Closed forms chi1 = -8 l0, chi2 = 28 l0^2 - 2(a^2+b^2) cos2phi, checked
// against a numerical expansion of the branch polynomial.
ChiCoeffs chi_coeffs(const CurveParams& params);

// Minimum pairwise distance between the points.
double min_pairwise_distance(std::span<const cd> points);

}  // namespace freak
