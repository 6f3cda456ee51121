#include "freak/periods.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "freak/error.hpp"
#include "freak/quadrature.hpp"

namespace freak {

EllipticPeriods elliptic_periods(const CurveParams& params, double tol) {
  const EllipticCyclePair plus = elliptic_cycle_pair(params, CurveTag::kGammaPlus, tol);
  const EllipticCyclePair one = elliptic_cycle_pair(params, CurveTag::kGamma1, tol);
  const EllipticCyclePair minus = elliptic_cycle_pair(params, CurveTag::kGammaMinus, tol);
  return {plus.a_period, one.a_period, minus.a_period, plus.b_period, one.b_period, minus.b_period};
}

const char* to_string(NomeConvention c) noexcept { return c == NomeConvention::kPi ? "pi" : "plain"; }

NomeConvention parse_nome_convention(const std::string& s) {
  if (s == "pi") return NomeConvention::kPi;
  if (s == "plain") return NomeConvention::kPlain;
  throw Error(Errc::kInvalidArgument, "nome convention must be 'pi' or 'plain', got '" + s + "'");
}

ReductionConstants reduction_constants(const EllipticPeriods& ep, NomeConvention convention) {
  const cd i(0.0, 1.0);
  auto guard = [](cd d, const char* what) {
    if (!(std::abs(d) > 1e-14)) throw Error(Errc::kDegeneratePeriods, std::string(what) + " vanishes");
  };
  const cd d1 = ep.alpha1 - 2.0 * ep.beta1;
  const cd d3 = ep.alpha3 - 2.0 * ep.beta3;
  guard(d1, "alpha1 - 2 beta1");
  guard(ep.alpha2, "alpha2");
  guard(d3, "alpha3 - 2 beta3");

  ReductionConstants rc;
  rc.convention = convention;
  rc.c = {1.0 / (2.0 * d1), 1.0 / (2.0 * ep.alpha2), 1.0 / (2.0 * d3)};
  const std::array<cd, 3> bc = {ep.alpha1 / (2.0 * i * d1), ep.beta2 / (2.0 * i * ep.alpha2),
                                ep.alpha3 / (2.0 * i * d3)};
  for (int j = 0; j < 3; ++j) {
    if (std::abs(bc[j].imag()) > 1e-8 * std::abs(bc[j]) || std::abs(rc.c[j].real()) > 1e-8 * std::abs(rc.c[j])) {
      std::ostringstream os;
      os << "reduction constants " << j + 1 << " lost their reality structure: c = " << rc.c[j] << ", b = " << bc[j];
      throw Error(Errc::kDegeneratePeriods, os.str());
    }
    if (!(bc[j].real() > 0.0)) throw Error(Errc::kDegeneratePeriods, "non-positive imaginary period ratio");
    rc.c[j] = cd(0.0, rc.c[j].imag());
    rc.b[j] = bc[j].real();
    const double scale = convention == NomeConvention::kPi ? 4.0 * std::numbers::pi : 4.0;
    rc.h[j] = std::exp(-scale * rc.b[j]);
  }
  return rc;
}

Matrix3i matrix_K() {
  Matrix3i m;
  m << 0, 1, 1, 1, 0, 1, 1, 1, 0;
  return m;
}
Matrix3i matrix_S() {
  Matrix3i m;
  m << -1, 1, 0, 1, 0, -1, 1, 0, 1;
  return m;
}
Matrix3i matrix_P() {
  Matrix3i m;
  m << 0, -2, 0, 0, 0, 2, 0, 0, -2;
  return m;
}
Matrix3i matrix_Q() {
  Matrix3i m;
  m << -1, 1, 0, 0, 0, -1, 0, 0, 1;
  return m;
}
Matrix3i matrix_R() {
  Matrix3i m;
  m << 0, 0, 0, 1, 1, 1, 1, 1, -1;
  return m;
}

PeriodMatrices period_matrices(const ReductionConstants& rc, const CurveParams& params) {
  const cd c1 = rc.c[0], c2 = rc.c[1], c3 = rc.c[2];
  const double l0 = params.lambda0;
  const double ab = params.a * params.b;
  PeriodMatrices pm;
  pm.C << c1 + c3, -2.0 * l0 * (c1 + c3), (l0 * l0 - ab) * c1 + (l0 * l0 + ab) * c3,
      c1, c2 - 2.0 * l0 * c1, (l0 * l0 - ab) * c1 - l0 * c2,
      c3, c2 - 2.0 * l0 * c3, (l0 * l0 + ab) * c3 - l0 * c2;
  const cd i(0.0, 1.0);
  const double b1 = rc.b[0], b2 = rc.b[1], b3 = rc.b[2];
  pm.B << i * (b1 + b3), i * b1 - 0.5, i * b3 - 0.5,
      i * b1 - 0.5, i * (b1 + b2), i * b2 - 0.5,
      i * b3 - 0.5, i * b2 - 0.5, i * (b2 + b3);
  pm.K = matrix_K();
  pm.S = matrix_S();
  pm.P = matrix_P();
  pm.Q = matrix_Q();
  pm.R = matrix_R();
  return pm;
}

Eigen::Matrix3d reduce_matrix() {
  Eigen::Matrix3d m;
  m << 1, 1, -1, -1, 1, 1, 1, -1, 1;
  return m;
}

WaveData wave_data(const CurveParams& params, const ReductionConstants& rc, const std::array<cd, 3>& delta,
                   double A, const std::array<double, 3>& z0) {
  const cd i(0.0, 1.0);
  const std::array<cd, 3> kc = {-4.0 * i * rc.c[0], -8.0 * i * rc.c[1], -4.0 * i * rc.c[2]};
  for (int j = 0; j < 3; ++j) {
    if (std::abs(kc[j].imag()) > 1e-8 * std::abs(kc[j]) || kc[j].real() == 0.0) {
      std::ostringstream os;
      os << "k" << j + 1 << " = " << kc[j] << " is not a nonzero real";
      throw Error(Errc::kNonRealWaveNumber, os.str());
    }
  }
  WaveData w;
  w.k1 = kc[0].real();
  w.k2 = kc[1].real();
  w.k3 = kc[2].real();
  const double l0 = params.lambda0;
  const double ab = params.a * params.b;
  const double s = (params.a * params.a + params.b * params.b) * std::cos(2.0 * params.phi);
  w.kappa1 = 4.0 * w.k1 * (3.0 * l0 * l0 - ab + s);
  w.kappa3 = 4.0 * w.k3 * (3.0 * l0 * l0 + ab + s);
  w.phase_rates << w.k1, 4.0 * l0 * w.k1, w.kappa1,
      0.0, w.k2, 6.0 * l0 * w.k2,
      w.k3, 4.0 * l0 * w.k3, w.kappa3;
  w.delta = delta;
  w.A = A;
  w.z0 = z0;
  w.h = rc.h;
  w.lambda0 = l0;
  w.alpha = params.alpha;
  return w;
}

UvwLattice uvw_and_lattice(const PeriodMatrices& pm, const ChiCoeffs& chi, bool paranoid) {
  const double x1 = chi.chi1, x2 = chi.chi2;
  Eigen::Matrix3d T;
  T << -2.0, 2.0 * x1, 4.0 * x2 - 3.0 * x1 * x1, 0.0, -4.0, 4.0 * x1, 0.0, 0.0, -8.0;
  const Eigen::Matrix3cd uvw_c = cd(0.0, 1.0) * pm.C * T.cast<cd>();
  const double scale = uvw_c.cwiseAbs().maxCoeff();
  if (uvw_c.imag().cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(Errc::kNonRealWaveNumber, "i C T is not real");
  }
  UvwLattice out;
  out.uvw = uvw_c.real();
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(out.uvw);
  const double det = out.uvw.determinant();
  if (!lu.isInvertible() || std::abs(det) < 1e-12 * scale * scale * scale) {
    std::ostringstream os;
    os << "(U, V, W) is singular, det = " << det;
    throw Error(Errc::kSingularUVW, os.str());
  }
  out.edges = lu.inverse();

  // i * (triangular factor) * A^t with A^t = C^{-1}.
  Eigen::Matrix3d tri;
  tri << 0.5, x1 / 4.0, x2 / 4.0 - x1 * x1 / 16.0, 0.0, 0.25, x1 / 8.0, 0.0, 0.0, 0.125;
  const Eigen::Matrix3cd closed = cd(0.0, 1.0) * tri.cast<cd>() * pm.C.inverse();
  out.edges_closed_form = closed.real();
  out.route_mismatch = (closed - out.edges.cast<cd>()).cwiseAbs().maxCoeff() / out.edges.cwiseAbs().maxCoeff();
  if (paranoid && out.route_mismatch > 1e-8) {
    std::ostringstream os;
    os << "lattice edges by inversion and by closed form differ by " << out.route_mismatch;
    throw Error(Errc::kSelfCheckFailed, os.str());
  }
  return out;
}

}  // namespace freak
