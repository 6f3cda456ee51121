#include "freak/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "freak/error.hpp"

namespace freak {

std::vector<double> fornberg_weights(double z, const std::vector<double>& x, int m) {
  const int n = int(x.size()) - 1;
  if (n < m) throw Error(Errc::kInvalidArgument, "not enough nodes for the requested derivative");
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][m];
  return w;
}

std::vector<double> central_weights(int derivative, int order) {
  if (derivative < 1 || order < 2 || order % 2) {
    throw Error(Errc::kInvalidArgument, "central stencils need derivative >= 1 and an even order >= 2");
  }
  const int points = 2 * ((derivative + 1) / 2) - 1 + order;
  const int r = points / 2;
  std::vector<double> x;
  for (int i = -r; i <= r; ++i) x.push_back(double(i));
  return fornberg_weights(0.0, x, derivative);
}

std::array<double, 3> BoxSpec::point(int ix, int iz, int it) const {
  const std::array<int, 3> idx{ix, iz, it};
  std::array<double, 3> p{};
  for (int c = 0; c < 3; ++c) {
    p[c] = count[c] <= 1 ? lo[c] : lo[c] + (hi[c] - lo[c]) * double(idx[c]) / double(count[c] - 1);
  }
  return p;
}

double default_step(const WaveData& w) {
  const double m = std::max({std::abs(w.k1), std::abs(w.k2), std::abs(w.k3), std::abs(w.kappa1), std::abs(w.kappa3)});
  return 1e-2 / m;
}

namespace {

struct Terms {
  double r, zz, xt, xxxx, nonlin, u0;
};

Terms residual_at(const WaveData& w, double x, double z, double t, double h, const std::vector<double>& w1,
                  const std::vector<double>& w2, const std::vector<double>& w4) {
  auto u = [&](double dx, double dz, double dt) { return 2.0 * w.A * theta_ratio(w, x + dx, z + dz, t + dt); };
  const int r4 = int(w4.size()) / 2;
  const int r1 = int(w1.size()) / 2;
  const int r2 = int(w2.size()) / 2;
  std::vector<double> line(2 * r4 + 1);
  for (int i = -r4; i <= r4; ++i) line[i + r4] = u(i * h, 0, 0);
  const double u0 = line[r4];
  double ux = 0, uxx = 0, uxxxx = 0, uzz = 0, uxt = 0;
  for (int i = -r1; i <= r1; ++i) ux += w1[i + r1] * line[i + r4];
  for (int i = -r2; i <= r2; ++i) uxx += w2[i + r2] * line[i + r4];
  for (int i = -r4; i <= r4; ++i) uxxxx += w4[i + r4] * line[i + r4];
  for (int i = -r2; i <= r2; ++i) uzz += w2[i + r2] * (i == 0 ? u0 : u(0, i * h, 0));
  for (int i = -r1; i <= r1; ++i) {
    if (w1[i + r1] == 0.0) continue;
    double inner = 0.0;
    for (int j = -r1; j <= r1; ++j) {
      if (w1[j + r1] == 0.0) continue;
      inner += w1[j + r1] * u(i * h, 0, j * h);
    }
    uxt += w1[i + r1] * inner;
  }
  ux /= h;
  uxx /= h * h;
  uxxxx /= h * h * h * h;
  uzz /= h * h;
  uxt /= h * h;
  Terms out{};
  out.zz = 3.0 * uzz;
  out.xt = 4.0 * uxt;
  out.xxxx = uxxxx;
  out.nonlin = 6.0 * (ux * ux + u0 * uxx);
  out.u0 = u0;
  out.r = out.zz - out.xt - out.xxxx - out.nonlin;
  return out;
}

}  // namespace

ResidualReport kpi_residual(const WaveData& w, const BoxSpec& box, double step, int order, unsigned threads) {
  for (int c = 0; c < 3; ++c) {
    if (box.count[c] < 1) throw Error(Errc::kGridTooSmall, "residual box has an empty axis");
  }
  if (!(step > 0.0) || !std::isfinite(step)) throw Error(Errc::kGridTooSmall, "finite-difference step must be positive");
  if (order != 2 && order != 4 && order != 6) throw Error(Errc::kInvalidArgument, "stencil order must be 2, 4 or 6");
  const std::vector<double> w1 = central_weights(1, order), w2 = central_weights(2, order),
                            w4 = central_weights(4, order);
  const int total = box.count[0] * box.count[1] * box.count[2];
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, unsigned(total));
  std::vector<double> worst(threads, 0.0), norm(threads, 0.0), umax(threads, 0.0);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned id) {
    try {
      for (int k = int(id); k < total; k += int(threads)) {
        const int ix = k % box.count[0];
        const int iz = (k / box.count[0]) % box.count[1];
        const int it = k / (box.count[0] * box.count[1]);
        const auto p = box.point(ix, iz, it);
        const Terms tm = residual_at(w, p[0], p[1], p[2], step, w1, w2, w4);
        worst[id] = std::max(worst[id], std::abs(tm.r));
        norm[id] = std::max({norm[id], std::abs(tm.zz), std::abs(tm.xt), std::abs(tm.xxxx), std::abs(tm.nonlin)});
        umax[id] = std::max(umax[id], std::abs(tm.u0));
      }
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(work, i);
  work(0);
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  ResidualReport rep;
  rep.fd_order = order;
  rep.step = step;
  rep.max_abs_residual = *std::max_element(worst.begin(), worst.end());
  rep.normalizer = *std::max_element(norm.begin(), norm.end());
  // Rounding of the field values amplified by the stencils.
  auto l1 = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  };
  const double U = *std::max_element(umax.begin(), umax.end());
  const double h2 = step * step;
  rep.roundoff = std::numeric_limits<double>::epsilon() * U *
                 ((3.0 * l1(w2) + 4.0 * l1(w1) * l1(w1) + 6.0 * U * (l1(w2) + l1(w1) * l1(w1))) / h2 +
                  l1(w4) / (h2 * h2));
  rep.normalized_residual = rep.normalizer > 0.0 ? rep.max_abs_residual / rep.normalizer
                                                 : (rep.max_abs_residual == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return rep;
}

double tuned_step(const WaveData& w, const BoxSpec& box, int order, double lo_factor, double hi_factor, int samples) {
  const double base = default_step(w);
  double best_step = base, best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double f = lo_factor * std::pow(hi_factor / lo_factor, double(i) / double(std::max(1, samples - 1)));
    const ResidualReport r = kpi_residual(w, box, base * f, order);
    if (r.normalized_residual < best) {
      best = r.normalized_residual;
      best_step = base * f;
    }
  }
  return best_step;
}

ConvergenceReport convergence_order(const WaveData& w, const BoxSpec& box, double step, int order) {
  ConvergenceReport rep;
  rep.coarse = kpi_residual(w, box, step, order);
  rep.fine = kpi_residual(w, box, 0.5 * step, order);
  if (rep.coarse.max_abs_residual <= 10.0 * rep.coarse.roundoff && rep.fine.max_abs_residual <= 10.0 * rep.fine.roundoff) {
    std::ostringstream os;
    os << "residuals " << rep.coarse.max_abs_residual << ", " << rep.fine.max_abs_residual
       << " are at the roundoff floor";
    throw Error(Errc::kRoundoffFloor, os.str());
  }
  rep.order_estimate = std::log2(rep.coarse.max_abs_residual / rep.fine.max_abs_residual);
  return rep;
}

std::vector<Sample> random_samples(const BoxSpec& box, int n, unsigned long long seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Sample> out;
  out.reserve(std::size_t(n));
  for (int i = 0; i < n; ++i) {
    std::array<double, 3> p{};
    for (int c = 0; c < 3; ++c) p[c] = box.lo[c] + (box.hi[c] - box.lo[c]) * unit(gen);
    out.push_back({p[0], p[1], p[2]});
  }
  return out;
}

double shift_deviation(const WaveData& w, const Eigen::Vector3d& shift, const std::vector<Sample>& samples) {
  double worst = 0.0;
  for (const Sample& s : samples) {
    const double u0 = eval_field(FieldKind::kKpiU, w, s.x, s.z, s.t);
    const double u1 = eval_field(FieldKind::kKpiU, w, s.x + shift(0), s.z + shift(1), s.t + shift(2));
    worst = std::max(worst, std::abs(u1 - u0) / (1.0 + std::abs(u0)));
  }
  return worst;
}

double periodicity_check(const WaveData& w, const Eigen::Matrix3d& edges, const std::vector<Sample>& samples) {
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) worst = std::max(worst, shift_deviation(w, edges.col(k), samples));
  return worst;
}

namespace {

std::vector<double> boxcar(const std::vector<double>& v, int half_width) {
  std::vector<double> out;
  for (int i = half_width; i + half_width < int(v.size()); ++i) {
    double s = 0.0;
    for (int j = -half_width; j <= half_width; ++j) s += v[std::size_t(i + j)];
    out.push_back(s / double(2 * half_width + 1));
  }
  return out;
}

std::vector<double> smoothed_line(const WaveData& w, const DriftWindow& win, double t, const std::vector<int>& widths) {
  std::vector<double> raw(std::size_t(win.count));
  const double dx = (win.x_max - win.x_min) / double(win.count - 1);
  for (int i = 0; i < win.count; ++i) {
    raw[std::size_t(i)] = eval_field(FieldKind::kKpiU, w, win.x_min + dx * i, win.z, t);
  }
  for (int hw : widths) raw = boxcar(raw, hw);
  return raw;
}

struct Lag {
  double lag;
  double corr;
};

constexpr double kPeakSlack = 0.05;

// Lag (in samples) maximising the normalized correlation of b(i) with a(i - lag).
Lag best_lag(const std::vector<double>& a, const std::vector<double>& b, int max_lag) {
  const int n = int(a.size());
  std::vector<double> corr(2 * std::size_t(max_lag) + 1, -2.0);
  for (int L = -max_lag; L <= max_lag; ++L) {
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    int m = 0;
    for (int i = std::max(0, L); i < std::min(n, n + L); ++i) {
      const double va = a[std::size_t(i - L)], vb = b[std::size_t(i)];
      sa += va;
      sb += vb;
      saa += va * va;
      sbb += vb * vb;
      sab += va * vb;
      ++m;
    }
    const double cov = sab - sa * sb / m;
    const double var = std::sqrt(std::max(0.0, saa - sa * sa / m) * std::max(0.0, sbb - sb * sb / m));
    corr[std::size_t(L + max_lag)] = var > 0.0 ? cov / var : -2.0;
  }
  const auto it = std::max_element(corr.begin(), corr.end());
  if (*it <= -1.5) throw Error(Errc::kFlatField, "smoothed field has no variation");
  // A smoothed quasi-periodic field correlates almost equally well at every
  // envelope period; the increment is the local maximum nearest zero lag that
  // comes close to the global one.
  int k = -1;
  for (int j = 0; j < int(corr.size()); ++j) {
    const bool left = j == 0 || corr[j] >= corr[j - 1];
    const bool right = j + 1 == int(corr.size()) || corr[j] >= corr[j + 1];
    if (!(left && right) || corr[j] < *it - kPeakSlack) continue;
    if (k < 0 || std::abs(j - max_lag) < std::abs(k - max_lag)) {
      k = j;
    } else if (std::abs(j - max_lag) == std::abs(k - max_lag) && corr[j] != corr[k]) {
      if (corr[j] > corr[k]) k = j;
    } else if (std::abs(j - max_lag) == std::abs(k - max_lag)) {
      throw Error(Errc::kFlatField, "cross-correlation peak is not unique");
    }
  }
  double frac = 0.0;
  if (k > 0 && k + 1 < int(corr.size())) {
    const double l = corr[k - 1], c = corr[k], r = corr[k + 1];
    const double d = l - 2 * c + r;
    if (d < 0.0) frac = 0.5 * (l - r) / d;
  }
  return {double(k - max_lag) + frac, corr[std::size_t(k)]};
}

}  // namespace

constexpr int kFilterPasses = 3;

DriftReport envelope_drift(const WaveData& w, double t0, double t1, const DriftWindow& win) {
  DriftReport rep;
  if (t0 == t1) return rep;
  if (win.count < 16 || !(win.x_max > win.x_min)) throw Error(Errc::kInvalidArgument, "drift window too small");
  const double dx = (win.x_max - win.x_min) / double(win.count - 1);
  // One boxcar per short-wave period: each nulls its wave and harmonics.
  std::vector<int> widths;
  int span = 0;
  for (int pass = 0; pass < kFilterPasses; ++pass) {
    for (double k : {w.k1, w.k3}) {
      const int hw = std::max(1, int(std::lround(0.5 / (std::abs(k) * dx))));
      widths.push_back(hw);
      span += 2 * hw;
    }
  }
  if (2 * span >= win.count) throw Error(Errc::kInvalidArgument, "drift window narrower than the filter");

  std::map<int, std::vector<double>> cache;  // keyed by substep index at the finest level
  constexpr int kMaxLevel = 8;
  const int finest = 1 << kMaxLevel;
  auto line_at = [&](int idx) -> const std::vector<double>& {
    auto it = cache.find(idx);
    if (it == cache.end()) {
      const double t = t0 + (t1 - t0) * double(idx) / double(finest);
      it = cache.emplace(idx, smoothed_line(w, win, t, widths)).first;
    }
    return it->second;
  };
  const int n = int(line_at(0).size());
  const int max_lag = n / 4;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int level = 0; level <= kMaxLevel; ++level) {
    const int steps = 1 << level;
    const int stride = finest / steps;
    double total = 0.0, worst_corr = 1.0;
    for (int s = 0; s < steps; ++s) {
      const Lag L = best_lag(line_at(s * stride), line_at((s + 1) * stride), max_lag);
      total += L.lag;
      worst_corr = std::min(worst_corr, L.corr);
    }
    total *= dx;
    rep.shift = total;
    rep.substeps = steps;
    rep.peak_correlation = worst_corr;
    if (level >= 2 && std::abs(total - previous) <= 2.0 * dx) return rep;
    previous = total;
  }
  return rep;
}

}  // namespace freak

namespace freak {

ConvergenceReport auto_convergence_order(const WaveData& w, const BoxSpec& box, int order) {
  const double base = default_step(w);
  std::vector<double> steps;
  std::vector<ResidualReport> reps;
  for (int k = 0; k < 8; ++k) {
    steps.push_back(0.25 * base * double(1 << k));
    reps.push_back(kpi_residual(w, box, steps.back(), order));
  }
  std::size_t kmin = 0;
  for (std::size_t k = 1; k < reps.size(); ++k) {
    if (reps[k].max_abs_residual < reps[kmin].max_abs_residual) kmin = k;
  }
  const double floor = reps[kmin].max_abs_residual;
  std::size_t pick = reps.size() - 1;
  for (std::size_t k = kmin + 1; k < reps.size(); ++k) {
    if (reps[k - 1].max_abs_residual >= 10.0 * floor) {
      pick = k;
      break;
    }
  }
  ConvergenceReport rep;
  rep.coarse = reps[pick];
  rep.fine = reps[pick - 1];
  if (rep.coarse.max_abs_residual <= 10.0 * rep.coarse.roundoff && rep.fine.max_abs_residual <= 10.0 * rep.fine.roundoff) {
    throw Error(Errc::kRoundoffFloor, "residuals are at the roundoff floor at every scanned step");
  }
  rep.order_estimate = std::log2(rep.coarse.max_abs_residual / rep.fine.max_abs_residual);
  return rep;
}

namespace {

double field_at(const FieldGrid& g, double x, double y) {
  const GridSpec& s = g.spec;
  if (s.plane == Plane::kXZ) return eval_field(g.kind, g.wave, x, y, s.fixed);
  return eval_field(g.kind, g.wave, x, s.fixed, y);
}

}  // namespace

std::vector<Peak> find_peaks(const FieldGrid& grid, double frac) {
  const int nx = grid.spec.x.count, ny = grid.spec.y.count;
  const double top = *std::max_element(grid.values.begin(), grid.values.end());
  const double dx = (grid.spec.x.max - grid.spec.x.min) / (nx - 1);
  const double dy = (grid.spec.y.max - grid.spec.y.min) / (ny - 1);
  std::vector<Peak> out;
  for (int iy = 1; iy + 1 < ny; ++iy) {
    for (int ix = 1; ix + 1 < nx; ++ix) {
      const double v = grid.value(ix, iy);
      if (v < frac * top) continue;
      bool is_max = true;
      for (int a = -1; a <= 1 && is_max; ++a) {
        for (int b = -1; b <= 1; ++b) {
          if ((a || b) && grid.value(ix + a, iy + b) >= v) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;
      // Newton on the gradient with central differences.
      double x = grid.spec.x.at(ix), y = grid.spec.y.at(iy);
      const double hx = 1e-3 * dx, hy = 1e-3 * dy;
      for (int it = 0; it < 12; ++it) {
        const double f0 = field_at(grid, x, y);
        const double fxp = field_at(grid, x + hx, y), fxm = field_at(grid, x - hx, y);
        const double fyp = field_at(grid, x, y + hy), fym = field_at(grid, x, y - hy);
        const double gx = (fxp - fxm) / (2 * hx), gy = (fyp - fym) / (2 * hy);
        const double hxx = (fxp - 2 * f0 + fxm) / (hx * hx), hyy = (fyp - 2 * f0 + fym) / (hy * hy);
        const double hxy = (field_at(grid, x + hx, y + hy) - field_at(grid, x + hx, y - hy) -
                            field_at(grid, x - hx, y + hy) + field_at(grid, x - hx, y - hy)) /
                           (4 * hx * hy);
        const double det = hxx * hyy - hxy * hxy;
        if (!(det > 0.0) || !(hxx < 0.0)) break;
        double sx = -(hyy * gx - hxy * gy) / det, sy = -(hxx * gy - hxy * gx) / det;
        // Stay inside the starting cell's neighbourhood.
        sx = std::clamp(sx, -dx, dx);
        sy = std::clamp(sy, -dy, dy);
        x += sx;
        y += sy;
        if (std::abs(sx) < 1e-10 * dx && std::abs(sy) < 1e-10 * dy) break;
      }
      out.push_back({x, y, field_at(grid, x, y)});
    }
  }
  return out;
}

}  // namespace freak
