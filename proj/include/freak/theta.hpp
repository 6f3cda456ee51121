#pragma once

// Jacobi thetas in the series form
//
//   th1(p, h) = 2 sum_{m>=1} (-1)^{m-1} h^{(m-1/2)^2} sin((2m-1) pi p)
//   th2(p, h) = 2 sum_{m>=1}            h^{(m-1/2)^2} cos((2m-1) pi p)
//   th3(p, h) = 1 + 2 sum_{m>=1}        h^{m^2}       cos(2m pi p)
//   th4(p, h) = 1 + 2 sum_{m>=1} (-1)^m h^{m^2}       cos(2m pi p)
//
// (period 1 in p for th3/th4, antiperiod 1 for th1/th2), a brute-force
// Riemann theta used as an oracle, and the factorised genus-3 theta.

#include <array>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace freak {

using cd = std::complex<double>;

// Throws NomeOutOfRange unless 0 <= h < 1, InvalidArgument unless kind is 1..4.
double jacobi_theta(int kind, double p, double h, double eps = 1e-16);
cd jacobi_theta(int kind, cd p, double h, double eps = 1e-16);

struct RiemannThetaOptions {
  double eps = 1e-15;
  std::size_t max_points = 10'000'000;
};

// Sum of exp(pi i m.B.m + 2 pi i m.p) over the ellipsoid of lattice points
// whose terms can exceed eps times the largest term.  g <= 4.
// Throws NotPositiveDefinite, TruncationOverflow, InvalidArgument.
cd riemann_theta(const Eigen::VectorXcd& p, const Eigen::MatrixXcd& B, const RiemannThetaOptions& opts = {});

template <class T>
std::array<T, 3> reduce_args(const std::array<T, 3>& p) {
  return {p[0] + p[1] - p[2], p[1] + p[2] - p[0], p[2] + p[0] - p[1]};
}

enum class ReducedForm {
  kLattice,  // th4 th4 th4 - th4 th1 th1 - th1 th4 th1 - th1 th1 th4; equals the lattice sum
  kPrinted,  // th3 th3 th3 + th4 th1 th1 + th1 th4 th1 + th1 th1 th4; kept for comparison only
};

double reduced_f(const std::array<double, 3>& pt, const std::array<double, 3>& h, double eps = 1e-16,
                 ReducedForm form = ReducedForm::kLattice);
cd reduced_f(const std::array<cd, 3>& pt, const std::array<double, 3>& h, double eps = 1e-16,
             ReducedForm form = ReducedForm::kLattice);

}  // namespace freak
