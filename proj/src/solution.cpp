#include "freak/solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "freak/error.hpp"
#include "freak/quadrature.hpp"

namespace freak {

const char* to_string(FieldKind k) noexcept {
  switch (k) {
    case FieldKind::kNlsAmp2: return "nls_amp2";
    case FieldKind::kKpiU: return "kpi_u";
    case FieldKind::kHirotaAmp2: return "hirota_amp2";
  }
  return "?";
}

FieldKind parse_field_kind(const std::string& s) {
  if (s == "nls_amp2" || s == "nls") return FieldKind::kNlsAmp2;
  if (s == "kpi_u" || s == "kpi") return FieldKind::kKpiU;
  if (s == "hirota_amp2" || s == "hirota") return FieldKind::kHirotaAmp2;
  throw Error(Errc::kInvalidArgument, "unknown field '" + s + "'");
}

std::array<double, 3> phase_at(const WaveData& w, double x, double z, double t) {
  std::array<double, 3> p{};
  for (int j = 0; j < 3; ++j) {
    p[j] = w.phase_rates(j, 0) * x + w.phase_rates(j, 1) * z + w.phase_rates(j, 2) * t + w.z0[j];
  }
  return p;
}

double theta_ratio(const WaveData& w, double x, double z, double t, const EvalOptions& opts) {
  const std::array<double, 3> p = phase_at(w, x, z, t);
  const double den = reduced_f(p, w.h, opts.eps);
  if (!(std::abs(den) > opts.denominator_floor) || den == 0.0) {
    std::ostringstream os;
    os << "f(p) = " << den << " at (" << x << ", " << z << ", " << t << ")";
    throw Error(Errc::kDenominatorUnderflow, os.str());
  }
  std::array<cd, 3> pp, pm;
  for (int j = 0; j < 3; ++j) {
    pp[j] = p[j] + w.delta[j];
    pm[j] = p[j] - w.delta[j];
  }
  const cd num = reduced_f(pp, w.h, opts.eps) * reduced_f(pm, w.h, opts.eps);
  return num.real() / (den * den);
}

double eval_field(FieldKind kind, const WaveData& w, double x, double z, double t, const EvalOptions& opts) {
  switch (kind) {
    case FieldKind::kNlsAmp2: return w.A * theta_ratio(w, x, z, t, opts);
    case FieldKind::kKpiU: return 2.0 * w.A * theta_ratio(w, x, z, t, opts);
    case FieldKind::kHirotaAmp2: return w.A * theta_ratio(w, x, t, -w.alpha * t, opts);
  }
  return 0.0;
}

namespace {

void check_axis(const Axis& a, const char* name) {
  if (a.count < 2) throw Error(Errc::kInvalidArgument, std::string(name) + " axis needs at least 2 points");
  if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.max > a.min)) {
    throw Error(Errc::kInvalidArgument, std::string(name) + " range must be finite and non-empty");
  }
}

}  // namespace

FieldGrid grid_eval(FieldKind kind, const GridSpec& spec, const WaveData& w, unsigned threads, double eps) {
  check_axis(spec.x, "x");
  check_axis(spec.y, spec.plane == Plane::kXZ ? "z" : "t");
  if (!std::isfinite(spec.fixed)) throw Error(Errc::kInvalidArgument, "fixed coordinate is not finite");
  if (kind == FieldKind::kHirotaAmp2 && spec.plane != Plane::kXT) {
    throw Error(Errc::kInvalidArgument, "the Hirota field lives on the (x, t) plane");
  }
  FieldGrid g;
  g.spec = spec;
  g.kind = kind;
  g.wave = w;
  const int nx = spec.x.count, ny = spec.y.count;
  g.values.assign(std::size_t(nx) * ny, 0.0);
  std::vector<double> dens(g.values.size(), 0.0);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, unsigned(ny));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned id) {
    try {
      EvalOptions opts;
      opts.eps = eps;
      for (int iy = int(id); iy < ny; iy += int(threads)) {
        const double yv = spec.y.at(iy);
        for (int ix = 0; ix < nx; ++ix) {
          const double xv = spec.x.at(ix);
          double x = xv, z = 0.0, t = 0.0;
          if (spec.plane == Plane::kXZ) {
            z = yv;
            t = spec.fixed;
          } else {
            t = yv;
            z = spec.fixed;
          }
          if (kind == FieldKind::kHirotaAmp2) z = t;
          const double tt = kind == FieldKind::kHirotaAmp2 ? -w.alpha * t : t;
          const std::size_t k = std::size_t(iy) * nx + ix;
          dens[k] = std::abs(reduced_f(phase_at(w, x, z, tt), w.h, eps));
          const double ratio = theta_ratio(w, x, z, tt, opts);
          g.values[k] = (kind == FieldKind::kKpiU ? 2.0 : 1.0) * w.A * ratio;
        }
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
  const double top = *std::max_element(dens.begin(), dens.end());
  const double low = *std::min_element(dens.begin(), dens.end());
  if (!(low > 1e-12 * top)) {
    std::ostringstream os;
    os << "min |f| = " << low << " against grid max " << top;
    throw Error(Errc::kDenominatorUnderflow, os.str());
  }
  return g;
}

DeltaCandidates delta_offsets(const CurveParams& params, const PeriodMatrices& pm, double tol) {
  AbelianOptions opts;
  opts.tol = tol;
  DeltaCandidates out;
  out.raw = abelian_to_infinity(params, pm.C, pm.B, opts);
  for (int j = 0; j < 3; ++j) {
    const double twice = 2.0 * out.raw[j].real();
    if (std::abs(twice - std::round(twice)) > 1e-6) {
      std::ostringstream os;
      os << "Re Delta_" << j + 1 << " = " << out.raw[j].real() << " is off the half-period lattice";
      throw Error(Errc::kNonRealDelta, os.str());
    }
    // Snap the real part; the deviation is quadrature noise.
    out.raw[j] = cd(0.5 * std::round(twice), out.raw[j].imag());
  }
  out.primary = reduce_args(out.raw);
  for (int e = 1; e < 8; ++e) {
    const std::array<double, 3> half = {0.5 * (e & 1), 0.5 * ((e >> 1) & 1), 0.5 * ((e >> 2) & 1)};
    const std::array<double, 3> shift = reduce_args(half);
    std::array<cd, 3> alt = out.primary;
    for (int j = 0; j < 3; ++j) alt[j] += shift[j];
    out.alternates.push_back(alt);
  }
  return out;
}

namespace {

struct Derivs {
  double f, fx, fxx, fxxxx, fzz, fxt;
};

// Second-order centered differences at steps h and h/2, combined by one
// Richardson step.
Derivs probe_derivatives(const WaveData& w, double x, double z, double t, const std::array<double, 3>& h) {
  auto F = [&](double dx, double dz, double dt) { return theta_ratio(w, x + dx, z + dz, t + dt); };
  auto level = [&](double s) {
    const double hx = h[0] * s, hz = h[1] * s, ht = h[2] * s;
    const double f0 = F(0, 0, 0);
    const double fp = F(hx, 0, 0), fm = F(-hx, 0, 0);
    const double fp2 = F(2 * hx, 0, 0), fm2 = F(-2 * hx, 0, 0);
    Derivs d{};
    d.f = f0;
    d.fx = (fp - fm) / (2 * hx);
    d.fxx = (fp - 2 * f0 + fm) / (hx * hx);
    d.fxxxx = (fp2 - 4 * fp + 6 * f0 - 4 * fm + fm2) / (hx * hx * hx * hx);
    d.fzz = (F(0, hz, 0) - 2 * f0 + F(0, -hz, 0)) / (hz * hz);
    d.fxt = (F(hx, 0, ht) - F(hx, 0, -ht) - F(-hx, 0, ht) + F(-hx, 0, -ht)) / (4 * hx * ht);
    return d;
  };
  const Derivs a = level(1.0), b = level(0.5);
  auto rich = [](double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; };
  return {b.f, rich(a.fx, b.fx), rich(a.fxx, b.fxx), rich(a.fxxxx, b.fxxxx), rich(a.fzz, b.fzz), rich(a.fxt, b.fxt)};
}

}  // namespace

ScaleFit fit_amplitude_scale(const WaveData& w, const ProbeGrid& probes, double step_factor) {
  for (int c = 0; c < 3; ++c) {
    if (probes.count[c] < 1) throw Error(Errc::kInvalidArgument, "probe grid counts must be positive");
  }
  std::array<double, 3> h{};
  for (int c = 0; c < 3; ++c) h[c] = step_factor / w.phase_rates.col(c).cwiseAbs().maxCoeff();

  std::vector<double> num, den;
  auto coord = [&](int c, int i) {
    return probes.count[c] == 1 ? probes.lo[c]
                                : probes.lo[c] + (probes.hi[c] - probes.lo[c]) * double(i) / (probes.count[c] - 1);
  };
  for (int it = 0; it < probes.count[2]; ++it) {
    for (int iz = 0; iz < probes.count[1]; ++iz) {
      for (int ix = 0; ix < probes.count[0]; ++ix) {
        const Derivs d = probe_derivatives(w, coord(0, ix), coord(1, iz), coord(2, it), h);
        num.push_back(3.0 * d.fzz - 4.0 * d.fxt - d.fxxxx);
        den.push_back(12.0 * (d.fx * d.fx + d.f * d.fxx));
      }
    }
  }
  double top = 0.0;
  for (double v : den) top = std::max(top, std::abs(v));
  ScaleFit fit;
  for (std::size_t i = 0; i < den.size(); ++i) {
    if (std::abs(den[i]) < 1e-2 * top) {
      ++fit.excluded;
      continue;
    }
    fit.samples.push_back(num[i] / den[i]);
  }
  fit.used = int(fit.samples.size());
  if (fit.samples.empty()) {
    fit.A = std::numeric_limits<double>::quiet_NaN();
    fit.cv = std::numeric_limits<double>::infinity();
    return fit;
  }
  std::vector<double> sorted = fit.samples;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  fit.A = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / double(n);
  double var = 0.0;
  for (double v : sorted) var += (v - mean) * (v - mean);
  var /= double(n);
  fit.cv = std::sqrt(var) / std::abs(mean);
  return fit;
}

double checked_scale(const ScaleFit& fit, double max_cv) {
  if (!(fit.cv <= max_cv)) {
    std::ostringstream os;
    os << "pointwise scale varies by cv = " << fit.cv << " (bound " << max_cv << ") over " << fit.used << " probes";
    throw Error(Errc::kNonConstantScale, os.str());
  }
  if (!(fit.A > 0.0)) {
    std::ostringstream os;
    os << "fitted scale A = " << fit.A << " is not positive";
    throw Error(Errc::kNegativeScale, os.str());
  }
  return fit.A;
}

}  // namespace freak
