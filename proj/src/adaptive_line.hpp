#pragma once

// Adaptive Gauss-Kronrod (7/15) integration along a parameterised straight
// line in the radicand variable, with the square root carried from the left
// end of every subinterval.

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <complex>
#include <vector>

#include "freak/error.hpp"
#include "freak/quadrature.hpp"

namespace freak::detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kXgk[1], kXgk[3], kXgk[5], kXgk[7].
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct LineResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
  std::complex<double> end_root{0.0, 0.0};
};

// point(s): location in the radicand variable (must move along a straight
// line as s increases); integrand(s, root) -> complex.
template <class Point, class Integrand>
LineResult adaptive_line(const RootContinuation& cont, Point&& point, Integrand&& integrand, double s0,
                         double s1, std::complex<double> root_at_s0, double tol, int max_intervals = 20000) {
  using cplx = std::complex<double>;
  struct Interval {
    double lo, hi;
    cplx root_lo;
  };
  LineResult out;
  std::vector<Interval> stack;
  stack.push_back({s0, s1, root_at_s0});
  const double total = s1 - s0;
  int processed = 0;
  // Right end root, tracked from the last accepted interval touching s1.
  bool have_end = false;

  while (!stack.empty()) {
    Interval iv = stack.back();
    stack.pop_back();
    if (++processed > max_intervals) {
      throw Error(Errc::kToleranceNotMet, "adaptive subdivision exhausted");
    }
    const double c = 0.5 * (iv.lo + iv.hi);
    const double h = 0.5 * (iv.hi - iv.lo);

    // Nodes in ascending order: c - h x_0, ..., c, ..., c + h x_0.
    std::array<double, 15> s{};
    for (int i = 0; i < 7; ++i) {
      s[i] = c - h * kXgk[i];
      s[14 - i] = c + h * kXgk[i];
    }
    s[7] = c;
    std::array<cplx, 15> f{};
    cplx z_prev = point(iv.lo);
    cplx r_prev = iv.root_lo;
    cplx root_mid{};
    for (int i = 0; i < 15; ++i) {
      const cplx z = point(s[i]);
      r_prev = cont.continue_to(z_prev, r_prev, z);
      z_prev = z;
      if (i == 7) root_mid = r_prev;
      f[i] = integrand(s[i], r_prev);
    }
    cplx kron = kWgk[7] * f[7];
    cplx gauss = kWg[3] * f[7];
    for (int i = 0; i < 7; ++i) {
      const cplx pair = f[i] + f[14 - i];
      kron += kWgk[i] * pair;
      if (i % 2 == 1) gauss += kWg[i / 2] * pair;
    }
    kron *= h;
    gauss *= h;
    const double err = std::abs(kron - gauss);
    const double allowed = tol * (iv.hi - iv.lo) / total;
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kron);
    if (err <= std::max(allowed, floor)) {
      out.value += kron;
      out.error += err;
      if (iv.hi == s1) {
        out.end_root = cont.continue_to(z_prev, r_prev, point(s1));
        have_end = true;
      }
      continue;
    }
    if (h < 1e-13 * std::abs(total)) {
      throw Error(Errc::kToleranceNotMet, "subinterval collapsed before tolerance was met");
    }
    // Continue the root to the midpoint for the right child; push right first
    // so the left child is processed next.
    stack.push_back({c, iv.hi, root_mid});
    stack.push_back({iv.lo, c, iv.root_lo});
  }
  if (!have_end) {
    out.end_root = cont.continue_to(point(s0), root_at_s0, point(s1));
  }
  return out;
}

}  // namespace freak::detail
