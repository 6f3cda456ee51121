#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <doctest.h>

#include "fixtures.hpp"
#include "freak/error.hpp"
#include "freak/theta.hpp"

using namespace freak;

namespace {

constexpr double kPi = std::numbers::pi;

// Plain partial sums with a fixed, generous number of terms.
cd naive_theta(int kind, cd p, double h) {
  cd s = (kind == 3 || kind == 4) ? 1.0 : 0.0;
  for (int m = 1; m <= 60; ++m) {
    const double half = m - 0.5;
    switch (kind) {
      case 1: s += 2.0 * ((m % 2) ? 1.0 : -1.0) * std::pow(h, half * half) * std::sin((2.0 * m - 1.0) * kPi * p); break;
      case 2: s += 2.0 * std::pow(h, half * half) * std::cos((2.0 * m - 1.0) * kPi * p); break;
      case 3: s += 2.0 * std::pow(h, double(m) * m) * std::cos(2.0 * m * kPi * p); break;
      default: s += 2.0 * ((m % 2) ? -1.0 : 1.0) * std::pow(h, double(m) * m) * std::cos(2.0 * m * kPi * p); break;
    }
  }
  return s;
}

}  // namespace

TEST_CASE("theta3 at the origin") {
  CHECK(jacobi_theta(3, 0.0, 0.1) == doctest::Approx(1.2002000020000002).epsilon(1e-15));
  CHECK(jacobi_theta(4, 0.0, 0.1) == doctest::Approx(0.8001999980000000).epsilon(1e-15));
  CHECK(jacobi_theta(1, 0.0, 0.3) == 0.0);
}

TEST_CASE("series agree with naive partial sums") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> re(-1.0, 1.0), im(-0.3, 0.3), nome(0.0, 0.5);
  for (int n = 0; n < 200; ++n) {
    const cd p(re(gen), im(gen));
    const double h = nome(gen);
    for (int kind = 1; kind <= 4; ++kind) {
      const cd ref = naive_theta(kind, p, h);
      CHECK(std::abs(jacobi_theta(kind, p, h) - ref) <= 1e-14 * (1.0 + std::abs(ref)));
    }
    const double x = re(gen);
    for (int kind = 1; kind <= 4; ++kind)
      CHECK(std::abs(jacobi_theta(kind, x, h) - naive_theta(kind, x, h).real()) <= 1e-14);
  }
}

TEST_CASE("(anti)periodicity in p") {
  const double h = 0.2;
  const cd p(0.37, 0.11);
  CHECK(std::abs(jacobi_theta(3, p + 1.0, h) - jacobi_theta(3, p, h)) <= 1e-14);
  CHECK(std::abs(jacobi_theta(4, p + 1.0, h) - jacobi_theta(4, p, h)) <= 1e-14);
  CHECK(std::abs(jacobi_theta(1, p + 1.0, h) + jacobi_theta(1, p, h)) <= 1e-14);
  CHECK(std::abs(jacobi_theta(2, p + 1.0, h) + jacobi_theta(2, p, h)) <= 1e-14);
}

TEST_CASE("genus-1 Riemann theta equals theta3") {
  for (const double s : {0.3, 0.7, 1.5}) {
    Eigen::MatrixXcd B(1, 1);
    B(0, 0) = cd(0.0, s);
    const double h = std::exp(-kPi * s);
    for (const double x : {0.0, 0.13, 0.42}) {
      Eigen::VectorXcd p(1);
      p(0) = cd(x, 0.05);
      CHECK(std::abs(riemann_theta(p, B) - jacobi_theta(3, p(0), h)) <= 1e-14);
    }
  }
}

TEST_CASE("Riemann theta of a block-diagonal matrix factorises") {
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(2, 2);
  B(0, 0) = cd(0.0, 0.8);
  B(1, 1) = cd(0.5, 1.1);
  Eigen::VectorXcd p(2);
  p << cd(0.2, 0.1), cd(-0.3, 0.0);
  Eigen::MatrixXcd B1(1, 1), B2(1, 1);
  B1(0, 0) = B(0, 0);
  B2(0, 0) = B(1, 1);
  Eigen::VectorXcd p1(1), p2(1);
  p1(0) = p(0);
  p2(0) = p(1);
  CHECK(std::abs(riemann_theta(p, B) - riemann_theta(p1, B1) * riemann_theta(p2, B2)) <= 1e-14);
}

TEST_CASE("factorised theta equals the lattice sum") {
  const Solution& s = fixtures::at_zero();
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0, worst_printed = 0.0;
  for (int n = 0; n < 40; ++n) {
    const std::array<double, 3> p{u(gen), u(gen), u(gen)};
    const cd T = riemann_theta(Eigen::Vector3cd(p[0], p[1], p[2]), s.pm.B);
    const auto pt = reduce_args(p);
    worst = std::max(worst, std::abs(reduced_f(pt, s.rc.h) - T) / std::abs(T));
    worst_printed = std::max(worst_printed, std::abs(reduced_f(pt, s.rc.h, 1e-16, ReducedForm::kPrinted) - T) / std::abs(T));
  }
  CHECK(worst <= 1e-12);
  CHECK(worst_printed > 1e-2);
}

TEST_CASE("factorised theta is invariant under integer shifts of p") {
  const Solution& s = fixtures::at_zero();
  const std::array<double, 3> p{0.21, -0.34, 0.57};
  const double base = reduced_f(reduce_args(p), s.rc.h);
  for (int j = 0; j < 3; ++j) {
    std::array<double, 3> q = p;
    q[j] += 1.0;
    CHECK(std::abs(reduced_f(reduce_args(q), s.rc.h) - base) <= 1e-14 * std::abs(base));
  }
}

TEST_CASE("zero nomes give f = 1") {
  CHECK(reduced_f(std::array<double, 3>{0.3, -0.7, 1.9}, {0.0, 0.0, 0.0}) == 1.0);
  CHECK(reduced_f(std::array<cd, 3>{cd(0.3, 0.2), 0.0, cd(1.0, -0.4)}, {0.0, 0.0, 0.0}) == cd(1.0, 0.0));
}

TEST_CASE("halving the truncation tolerance changes little") {
  const std::array<double, 3> h{0.2, 0.35, 0.5};
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n = 0; n < 50; ++n) {
    const std::array<cd, 3> pt{cd(u(gen), 0.2 * u(gen)), cd(u(gen), 0.2 * u(gen)), cd(u(gen), 0.2 * u(gen))};
    for (const double eps : {1e-6, 1e-10}) {
      const cd a = reduced_f(pt, h, eps), b = reduced_f(pt, h, 0.5 * eps);
      CHECK(std::abs(a - b) <= 10.0 * eps * (1.0 + std::abs(b)));
    }
  }
}

TEST_CASE("theta input validation") {
  CHECK_THROWS_AS(jacobi_theta(3, 0.1, 1.0), Error);
  CHECK_THROWS_AS(jacobi_theta(3, 0.1, -0.1), Error);
  CHECK_THROWS_AS(jacobi_theta(5, 0.1, 0.1), Error);
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Identity(2, 2) * cd(0.0, 1.0);
  B(1, 1) = cd(0.0, -0.5);
  CHECK_THROWS_AS(riemann_theta(Eigen::VectorXcd::Zero(2), B), Error);
}
