#include "freak/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "freak/error.hpp"

namespace freak {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxTerms = 400;

void check_args(int kind, double h) {
  if (kind < 1 || kind > 4) throw Error(Errc::kInvalidArgument, "theta kind must be 1, 2, 3 or 4");
  if (!(h >= 0.0 && h < 1.0)) {
    std::ostringstream os;
    os << "nome " << h << " outside [0, 1)";
    throw Error(Errc::kNomeOutOfRange, os.str());
  }
}

// Terms are generated until their bound drops below eps relative to the
// running sum and the bound is decreasing, then added smallest first.  The
// trigonometric factors come from powers of w = exp(i pi p).
template <class T>
struct Series {
  T odd;   // th1 (sine series) or th2 (cosine series)
  T even;  // sum for th3 / th4 without the constant
};

template <class T>
T real_or_complex(cd v) {
  if constexpr (std::is_same_v<T, double>) {
    return v.real();
  } else {
    return v;
  }
}

// Returns th_odd_kind and th_even_kind (odd_kind in {1, 2}, even_kind in {3, 4}).
template <class T>
std::pair<T, T> theta_pair(int odd_kind, int even_kind, T p, double h, double eps) {
  check_args(odd_kind, h);
  check_args(even_kind, h);
  if (h == 0.0) return {T(0.0), T(1.0)};
  const double lnh = std::log(h);
  const cd pc(p);
  const double grow = kPi * std::abs(pc.imag());
  const cd w = std::exp(cd(0.0, kPi) * pc);
  const cd wi = std::exp(cd(0.0, -kPi) * pc);

  std::array<cd, kMaxTerms> odd_terms, even_terms;
  int n = 0;
  double running = 1.0;
  double prev_bound = std::numeric_limits<double>::infinity();
  cd wn = w, wni = wi;  // w^{2m-1}, w^{-(2m-1)}
  const cd w2 = w * w, w2i = wi * wi;
  for (int m = 1;; ++m) {
    if (m > kMaxTerms) throw Error(Errc::kTruncationOverflow, "theta series did not converge");
    const double ho = std::exp((m - 0.5) * (m - 0.5) * lnh);
    const double he = std::exp(double(m) * m * lnh);
    const double so = odd_kind == 1 && m % 2 == 0 ? -1.0 : 1.0;
    const double se = even_kind == 4 && m % 2 == 1 ? -1.0 : 1.0;
    const cd trig_odd = odd_kind == 1 ? (wn - wni) * cd(0.0, -1.0) : (wn + wni);  // 2 sin or 2 cos
    const cd we = wn * w, wei = wni * wi;
    odd_terms[n] = so * ho * trig_odd;
    even_terms[n] = se * he * (we + wei);
    running = std::max({running, std::abs(odd_terms[n]), std::abs(even_terms[n])});
    ++n;
    const double bound = 2.0 * ho * std::exp((2.0 * m) * grow);
    if (bound < eps * running * 1e-2 && bound < prev_bound) break;
    prev_bound = bound;
    wn *= w2;
    wni *= w2i;
  }
  cd so = 0.0, se = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    so += odd_terms[i];
    se += even_terms[i];
  }
  return {real_or_complex<T>(so), real_or_complex<T>(cd(1.0, 0.0) + se)};
}

template <class T>
T theta_series(int kind, T p, double h, double eps) {
  check_args(kind, h);
  if (kind == 1 || kind == 2) return theta_pair<T>(kind, 4, p, h, eps).first;
  return theta_pair<T>(1, kind, p, h, eps).second;
}

}  // namespace

double jacobi_theta(int kind, double p, double h, double eps) { return theta_series<double>(kind, p, h, eps); }

cd jacobi_theta(int kind, cd p, double h, double eps) { return theta_series<cd>(kind, p, h, eps); }

cd riemann_theta(const Eigen::VectorXcd& p, const Eigen::MatrixXcd& B, const RiemannThetaOptions& opts) {
  const int g = int(B.rows());
  if (g < 1 || g > 4 || B.cols() != g || p.size() != g) {
    throw Error(Errc::kInvalidArgument, "riemann_theta supports square B with 1 <= g <= 4 matching p");
  }
  const Eigen::MatrixXd Y = 0.5 * (B.imag() + B.imag().transpose());
  const Eigen::LLT<Eigen::MatrixXd> llt(Y);
  if (llt.info() != Eigen::Success) throw Error(Errc::kNotPositiveDefinite, "Im B is not positive definite");
  {
    // LLT accepts some semidefinite inputs; insist on a strictly positive spectrum.
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y);
    if (!(es.eigenvalues().minCoeff() > 0.0)) throw Error(Errc::kNotPositiveDefinite, "Im B is not positive definite");
  }
  const Eigen::MatrixXd Yinv = Y.inverse();
  // Term magnitude: exp(-pi (m + c)^t Y (m + c) + pi c^t Y c), c = Y^{-1} Im p.
  const Eigen::VectorXd c = Yinv * p.imag();
  const double radius2 = (std::log(1.0 / opts.eps) + 8.0) / kPi;  // bound on (m+c)^t Y (m+c)
  // Bounding box |m_i + c_i| <= sqrt(radius2 * Yinv_ii).
  std::vector<long> lo(g), hi(g);
  double count = 1.0;
  for (int i = 0; i < g; ++i) {
    const double half = std::sqrt(radius2 * Yinv(i, i));
    lo[i] = long(std::floor(-c(i) - half));
    hi[i] = long(std::ceil(-c(i) + half));
    count *= double(hi[i] - lo[i] + 1);
  }
  if (count > double(opts.max_points)) {
    std::ostringstream os;
    os << "ellipsoid bounding box holds " << count << " points (cap " << opts.max_points << ")";
    throw Error(Errc::kTruncationOverflow, os.str());
  }
  // Neumaier-compensated accumulation in both components.
  double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
  auto add = [](double& s, double& comp, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v)) {
      comp += (s - t) + v;
    } else {
      comp += (v - t) + s;
    }
    s = t;
  };
  std::vector<long> m(lo);
  Eigen::VectorXd mv(g), shifted(g);
  const cd ipi(0.0, kPi);
  for (;;) {
    for (int i = 0; i < g; ++i) mv(i) = double(m[i]);
    shifted = mv + c;
    if (shifted.dot(Y * shifted) <= radius2) {
      const cd e = ipi * cd(mv.dot(B.real() * mv), mv.dot(B.imag() * mv)) + 2.0 * ipi * (mv.cast<cd>().dot(p));
      const cd v = std::exp(e);
      add(sr, cr, v.real());
      add(si, ci, v.imag());
    }
    int k = 0;
    while (k < g && ++m[k] > hi[k]) {
      m[k] = lo[k];
      ++k;
    }
    if (k == g) break;
  }
  return cd(sr + cr, si + ci);
}

namespace {

template <class T>
T reduced_f_impl(const std::array<T, 3>& pt, const std::array<double, 3>& h, double eps, ReducedForm form) {
  std::array<T, 3> t1, t4;
  for (int j = 0; j < 3; ++j) std::tie(t1[j], t4[j]) = theta_pair<T>(1, 4, pt[j], h[j], eps);
  if (form == ReducedForm::kLattice) {
    return t4[0] * t4[1] * t4[2] - t4[0] * t1[1] * t1[2] - t1[0] * t4[1] * t1[2] - t1[0] * t1[1] * t4[2];
  }
  std::array<T, 3> t3;
  for (int j = 0; j < 3; ++j) t3[j] = theta_pair<T>(1, 3, pt[j], h[j], eps).second;
  return t3[0] * t3[1] * t3[2] + t4[0] * t1[1] * t1[2] + t1[0] * t4[1] * t1[2] + t1[0] * t1[1] * t4[2];
}

}  // namespace

double reduced_f(const std::array<double, 3>& pt, const std::array<double, 3>& h, double eps, ReducedForm form) {
  return reduced_f_impl<double>(pt, h, eps, form);
}

cd reduced_f(const std::array<cd, 3>& pt, const std::array<double, 3>& h, double eps, ReducedForm form) {
  return reduced_f_impl<cd>(pt, h, eps, form);
}

}  // namespace freak
