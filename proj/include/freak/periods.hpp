#pragma once

// Period data of the three-phase family: the elliptic half-cycle integrals,
// the reduction constants built from them, the genus-3 matrices B and C, and
// the linear map from (x, z, t) to the reduced theta arguments.

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "freak/curve.hpp"

namespace freak {

struct EllipticPeriods {
  cd alpha1, alpha2, alpha3;
  cd beta1, beta2, beta3;
};

// (alpha1, beta1) on Gamma+, (alpha2, beta2) on Gamma1, (alpha3, beta3) on Gamma-.
EllipticPeriods elliptic_periods(const CurveParams& params, double tol = 1e-13);

enum class NomeConvention { kPi, kPlain };

const char* to_string(NomeConvention c) noexcept;
NomeConvention parse_nome_convention(const std::string& s);

struct ReductionConstants {
  std::array<cd, 3> c{};       // purely imaginary
  std::array<double, 3> b{};   // positive
  std::array<double, 3> h{};   // nomes in (0, 1)
  NomeConvention convention = NomeConvention::kPi;
};

// kPi:    h = exp(-4 pi b)   -- the convention under which the factorised
//                               theta equals the lattice sum
// kPlain: h = exp(-4 b)
ReductionConstants reduction_constants(const EllipticPeriods& ep,
                                       NomeConvention convention = NomeConvention::kPi);

using Matrix3i = Eigen::Matrix<long long, 3, 3>;

struct PeriodMatrices {
  Eigen::Matrix3cd B;
  Eigen::Matrix3cd C;
  Matrix3i K, S, P, Q, R;
};

Matrix3i matrix_K();
Matrix3i matrix_S();
Matrix3i matrix_P();
Matrix3i matrix_Q();
Matrix3i matrix_R();

PeriodMatrices period_matrices(const ReductionConstants& rc, const CurveParams& params);

// Rows p~_1..p~_3 of reduce_args applied to p.
Eigen::Matrix3d reduce_matrix();

struct WaveData {
  double k1 = 0.0, k2 = 0.0, k3 = 0.0;
  double kappa1 = 0.0, kappa3 = 0.0;
  // d p~ / d(x, z, t).  At lambda0 = 0 this is
  //   (k1, 0, kappa1; 0, k2, 0; k3, 0, kappa3);
  // otherwise lambda0 also couples x-phases to z and the z-phase to t.
  Eigen::Matrix3d phase_rates = Eigen::Matrix3d::Zero();
  std::array<cd, 3> delta{};    // offsets in p~ coordinates (complex, see solution.hpp)
  double A = 0.0;               // amplitude scale -4 K0^2
  std::array<double, 3> z0{};   // initial phases in p~ coordinates
  std::array<double, 3> h{};    // nomes
  double lambda0 = 0.0;
  double alpha = 0.0;
};

// Throws NonRealWaveNumber.  A is stored unchecked (the fit supplies it later).
WaveData wave_data(const CurveParams& params, const ReductionConstants& rc,
                   const std::array<cd, 3>& delta = {}, double A = 0.0,
                   const std::array<double, 3>& z0 = {});

struct UvwLattice {
  Eigen::Matrix3d uvw;    // columns U, V, W: d p / d(x, z, t)
  Eigen::Matrix3d edges;  // uvw^{-1}; column k is (X_k, Z_k, T_k)
  Eigen::Matrix3d edges_closed_form;
  double route_mismatch = 0.0;
};

// Throws SingularUVW; with paranoid, SelfCheckFailed if the two routes to
// the edges differ by more than 1e-8 (relative).
UvwLattice uvw_and_lattice(const PeriodMatrices& pm, const ChiCoeffs& chi, bool paranoid = true);

}  // namespace freak
