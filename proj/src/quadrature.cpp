#include "freak/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "adaptive_line.hpp"
#include "freak/error.hpp"

namespace freak {

CurveTag DifferentialId::curve() const noexcept {
  switch (tag) {
    case DiffTag::kDtOverChiPlus: return CurveTag::kGamma1;
    case DiffTag::kTdtOverChiMinus: return CurveTag::kGamma2;
    case DiffTag::kDsOverNuPlus: return CurveTag::kGammaPlus;
    case DiffTag::kDsOverNuMinus: return CurveTag::kGammaMinus;
    case DiffTag::kLamPowDlamOverChi: return CurveTag::kGamma3;
  }
  return CurveTag::kGamma3;
}

cd DifferentialId::numerator(cd z) const noexcept {
  switch (tag) {
    case DiffTag::kTdtOverChiMinus: return z;
    case DiffTag::kLamPowDlamOverChi: {
      cd v(1.0, 0.0);
      for (int i = 0; i < power; ++i) v *= z;
      return v;
    }
    default: return cd(1.0, 0.0);
  }
}

RootContinuation::RootContinuation(std::vector<cd> roots, cd lead) : roots_(std::move(roots)), lead_(lead) {}

cd RootContinuation::radicand(cd z) const noexcept {
  cd v = lead_;
  for (const cd& r : roots_) v *= (z - r);
  return v;
}

double RootContinuation::distance_to_roots(cd z) const noexcept {
  double d = std::numeric_limits<double>::infinity();
  for (const cd& r : roots_) d = std::min(d, std::abs(z - r));
  return d;
}

cd RootContinuation::continue_to(cd from, cd root_at_from, cd to) const {
  // Each factor turns by at most asin(step/dist) per step; with step <= dist/4
  // and n roots the square root turns by < n * 7.3 degrees.
  const double frac = roots_.size() > 6 ? 0.15 : 0.25;
  cd z = from;
  cd r = root_at_from;
  const double total = std::abs(to - from);
  if (total == 0.0) return r;
  const cd dir = (to - from) / total;
  double done = 0.0;
  int guard = 0;
  while (done < total) {
    const double d = distance_to_roots(z);
    double step = std::min(total - done, frac * d);
    if (step <= 1e-300 || ++guard > 1000000) {
      throw Error(Errc::kBranchPointProximity, "continuation path runs into a branch point");
    }
    done += step;
    const cd znext = (done >= total) ? to : from + dir * done;
    cd s = std::sqrt(radicand(znext));
    if (std::abs(s - r) > std::abs(s + r)) s = -s;
    r = s;
    z = znext;
  }
  return r;
}

double distance_point_segment(cd point, cd seg_a, cd seg_b) noexcept {
  const cd d = seg_b - seg_a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(point - seg_a);
  double t = std::real((point - seg_a) * std::conj(d)) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(point - (seg_a + t * d));
}

double default_clearance(const CurveParams& params, CurveTag curve) {
  const std::vector<cd> roots = curve_roots(params, curve);
  return 1e-3 * min_pairwise_distance(roots);
}

LineIntegral integrate_segment(const DifferentialId& diff, const PathSpec& path, const CurveParams& params,
                               double tol, std::optional<double> clearance) {
  if (!(tol > 0.0)) throw Error(Errc::kInvalidArgument, "tolerance must be positive");
  if (path.waypoints.size() < 2) throw Error(Errc::kInvalidPath, "a path needs at least two waypoints");
  if (diff.curve() != path.curve) {
    throw Error(Errc::kInvalidPath, std::string("differential lives on ") + to_string(diff.curve()) +
                                        ", path on " + to_string(path.curve));
  }
  if (diff.tag == DiffTag::kLamPowDlamOverChi && (diff.power < 0 || diff.power > 2)) {
    throw Error(Errc::kInvalidArgument, "lambda power must be 0, 1 or 2");
  }
  RootContinuation cont(curve_roots(params, path.curve));
  const double clear = clearance.value_or(default_clearance(params, path.curve));
  for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
    for (const cd& r : cont.roots()) {
      const double d = distance_point_segment(r, path.waypoints[i], path.waypoints[i + 1]);
      if (d < clear) {
        std::ostringstream os;
        os << "segment " << i << " passes within " << d << " of branch point " << r << " (clearance " << clear
           << ")";
        throw Error(Errc::kBranchPointProximity, os.str());
      }
    }
  }
  const cd p0 = cont.radicand(path.waypoints.front());
  if (std::abs(path.sheet_seed * path.sheet_seed - p0) > 1e-10 * std::abs(p0)) {
    throw Error(Errc::kInvalidSheetSeed, "seed does not square to the radicand at the first waypoint");
  }

  // Split the tolerance across segments by length.
  double length = 0.0;
  for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
    length += std::abs(path.waypoints[i + 1] - path.waypoints[i]);
  }
  LineIntegral out{cd(0.0, 0.0), 0.0, path.sheet_seed};
  for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
    const cd za = path.waypoints[i];
    const cd zb = path.waypoints[i + 1];
    const cd dz = zb - za;
    const double seg_tol = tol * std::abs(dz) / length;
    if (std::abs(dz) == 0.0) continue;
    auto point = [&](double s) { return za + s * dz; };
    auto integrand = [&](double s, cd root) { return diff.numerator(za + s * dz) * dz / root; };
    const detail::LineResult r = detail::adaptive_line(cont, point, integrand, 0.0, 1.0, out.end_root, seg_tol);
    out.value += r.value;
    out.error += r.error;
    out.end_root = r.end_root;
  }
  return out;
}

PathSpec loop_around(const CurveParams& params, CurveTag curve, cd p, cd q, double size) {
  if (!(size > 0.0 && size < 0.7)) throw Error(Errc::kInvalidArgument, "loop size must lie in (0, 0.7)");
  const std::vector<cd> roots = curve_roots(params, curve);
  double others = std::numeric_limits<double>::infinity();
  for (const cd& r : roots) {
    if (std::abs(r - p) < 1e-14 * (1.0 + std::abs(p)) || std::abs(r - q) < 1e-14 * (1.0 + std::abs(q))) continue;
    others = std::min(others, distance_point_segment(r, p, q));
  }
  if (!std::isfinite(others)) others = std::abs(q - p);
  const double half = size * others;
  const cd u = (q - p) / std::abs(q - p);
  const cd n = u * cd(0.0, 1.0);
  PathSpec path;
  path.curve = curve;
  path.waypoints = {p - half * u - half * n, q + half * u - half * n, q + half * u + half * n,
                    p - half * u + half * n, p - half * u - half * n};
  RootContinuation cont(roots);
  path.sheet_seed = std::sqrt(cont.radicand(path.waypoints.front()));
  return path;
}

const char* to_string(CycleTag tag) noexcept {
  switch (tag) {
    case CycleTag::kA1: return "a1";
    case CycleTag::kB1: return "b1";
    case CycleTag::kAPlus: return "a+";
    case CycleTag::kBPlus: return "b+";
    case CycleTag::kAMinus: return "a-";
    case CycleTag::kBMinus: return "b-";
  }
  return "?";
}

namespace {

DifferentialId holomorphic_differential(CurveTag curve) {
  switch (curve) {
    case CurveTag::kGamma1: return {DiffTag::kDtOverChiPlus, 0};
    case CurveTag::kGammaPlus: return {DiffTag::kDsOverNuPlus, 0};
    case CurveTag::kGammaMinus: return {DiffTag::kDsOverNuMinus, 0};
    default: break;
  }
  throw Error(Errc::kInvalidArgument, std::string("no elliptic cycle basis on ") + to_string(curve));
}

cd half_loop(const CurveParams& params, CurveTag curve, cd p, cd q, double tol, double size) {
  const PathSpec path = loop_around(params, curve, p, q, size);
  const LineIntegral r = integrate_segment(holomorphic_differential(curve), path, params, 2.0 * tol);
  if (std::abs(r.end_root - path.sheet_seed) > 1e-6 * std::abs(path.sheet_seed)) {
    throw Error(Errc::kInvalidPath, "loop does not close on the same sheet");
  }
  return 0.5 * r.value;
}

bool is_real(cd w, double rel) { return std::abs(w.imag()) <= rel * std::abs(w); }
bool is_imag(cd w, double rel) { return std::abs(w.real()) <= rel * std::abs(w); }

}  // namespace

EllipticCyclePair elliptic_cycle_pair(const CurveParams& params, CurveTag curve, double tol, double loop_size) {
  const BranchData bd = branch_points(params);
  EllipticCyclePair out{};
  constexpr int kRange = 4;
  const double rel = std::max(1e-8, 1e3 * tol);
  if (curve == CurveTag::kGamma1) {
    const cd t1 = bd.t_points[0], t2 = bd.t_points[1];
    out.basic_first = half_loop(params, curve, t2, t1, tol, loop_size);
    out.basic_second = half_loop(params, curve, std::conj(t1), t1, tol, loop_size);
  } else if (curve == CurveTag::kGammaPlus || curve == CurveTag::kGammaMinus) {
    const auto& s = curve == CurveTag::kGammaPlus ? bd.s_plus : bd.s_minus;
    out.basic_first = half_loop(params, curve, s[2], s[1], tol, loop_size);
    out.basic_second = half_loop(params, curve, s[0], s[1], tol, loop_size);
  } else {
    throw Error(Errc::kInvalidArgument, std::string("no elliptic cycle basis on ") + to_string(curve));
  }

  std::optional<cd> a_period, b_period;
  auto smallest = [&](auto&& accept) {
    std::optional<cd> best;
    for (int m = -kRange; m <= kRange; ++m) {
      for (int n = -kRange; n <= kRange; ++n) {
        if (m == 0 && n == 0) continue;
        const cd w = double(m) * out.basic_first + double(n) * out.basic_second;
        if (accept(w) && (!best || std::abs(w) < std::abs(*best) * (1.0 - 1e-9))) best = w;
      }
    }
    return best;
  };
  if (curve == CurveTag::kGamma1) {
    a_period = smallest([&](cd w) { return is_imag(w, rel) && w.imag() > 0.0; });
    if (a_period) {
      b_period = smallest([&](cd w) { return is_real(w, rel) && (w / (cd(0.0, 2.0) * *a_period)).real() > 0.0; });
    }
  } else {
    a_period = smallest([&](cd w) { return is_real(w, rel) && w.real() > 0.0; });
    if (a_period) {
      const double half = 0.5 * a_period->real();
      b_period = smallest(
          [&](cd w) { return std::abs(w.real() - half) <= rel * std::abs(*a_period) && w.imag() > 0.0; });
    }
  }
  if (!a_period || !b_period) {
    throw Error(Errc::kDegeneratePeriods,
                std::string("period lattice of ") + to_string(curve) + " lacks the expected real structure");
  }
  out.a_period = *a_period;
  out.b_period = *b_period;
  return out;
}

cd cycle_integral(CurveTag curve, CycleTag cycle, const CurveParams& params, double tol) {
  CurveTag expected = CurveTag::kGamma1;
  bool want_a = true;
  switch (cycle) {
    case CycleTag::kA1: expected = CurveTag::kGamma1; want_a = true; break;
    case CycleTag::kB1: expected = CurveTag::kGamma1; want_a = false; break;
    case CycleTag::kAPlus: expected = CurveTag::kGammaPlus; want_a = true; break;
    case CycleTag::kBPlus: expected = CurveTag::kGammaPlus; want_a = false; break;
    case CycleTag::kAMinus: expected = CurveTag::kGammaMinus; want_a = true; break;
    case CycleTag::kBMinus: expected = CurveTag::kGammaMinus; want_a = false; break;
  }
  if (curve != expected) {
    throw Error(Errc::kInvalidArgument,
                std::string("cycle ") + to_string(cycle) + " does not live on " + to_string(curve));
  }
  const EllipticCyclePair pair = elliptic_cycle_pair(params, curve, tol);
  return want_a ? pair.a_period : pair.b_period;
}

std::vector<double> ray_angle_candidates(const CurveParams& params) {
  const BranchData bd = branch_points(params);
  const cd start = bd.lambda_points[0];
  const double reach = 3.0 * params.b;
  std::vector<std::pair<double, double>> scored;
  constexpr int kCount = 72;
  for (int i = 0; i < kCount; ++i) {
    const double ang = 2.0 * std::numbers::pi * i / kCount;
    const cd end = start + std::polar(reach, ang);
    double clear = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < bd.lambda_points.size(); ++j) {
      clear = std::min(clear, distance_point_segment(bd.lambda_points[j], start, end));
    }
    scored.emplace_back(-clear, ang);
  }
  std::stable_sort(scored.begin(), scored.end());
  std::vector<double> out;
  for (const auto& s : scored) out.push_back(s.second);
  return out;
}

std::array<cd, 3> abelian_moments_to_infinity(const CurveParams& params, const AbelianOptions& opts) {
  const BranchData bd = branch_points(params);
  const cd start = bd.lambda_points[0];
  const cd l0(params.lambda0, 0.0);
  const double angle = opts.ray_angle.value_or(ray_angle_candidates(params).front());
  const cd dir = std::polar(1.0, angle);
  const double junction = opts.junction_radius > 0.0 ? opts.junction_radius : 3.0 * params.b;
  if (junction <= 2.0 * params.b) throw Error(Errc::kInvalidArgument, "junction radius must exceed 2b");

  // First leg: lambda = E + dir u^2, so chi = sqrt(dir) u sqrt(Q) with Q the
  // radicand stripped of the root at E.
  std::vector<cd> others(bd.lambda_points.begin() + 1, bd.lambda_points.end());
  const RootContinuation q_cont(others);
  for (const cd& r : others) {
    if (distance_point_segment(r, start, start + dir * (junction + std::abs(start - l0))) <
        default_clearance(params, CurveTag::kGamma3)) {
      throw Error(Errc::kBranchPointProximity, "ray to infinity passes a branch point");
    }
  }
  // Leg length so that |lambda_1 - l0| = junction.
  const cd off = start - l0;
  const double bq = 2.0 * std::real(off * std::conj(dir));
  const double cq = std::norm(off) - junction * junction;
  const double leg = 0.5 * (-bq + std::sqrt(bq * bq - 4.0 * cq));
  const double u1 = std::sqrt(leg);
  const cd sqrt_dir = std::sqrt(dir);
  const double tol = opts.tol;

  std::array<cd, 3> moments{};
  cd q_end{};
  for (int k = 0; k < 3; ++k) {
    const int power = 2 - k;
    auto point = [&](double u) { return start + dir * (u * u); };
    auto integrand = [&](double u, cd root_q) {
      const cd lam = start + dir * (u * u);
      cd num(1.0, 0.0);
      for (int i = 0; i < power; ++i) num *= lam;
      return num * 2.0 * sqrt_dir / root_q;
    };
    const cd seed = std::sqrt(q_cont.radicand(start));
    const detail::LineResult r = detail::adaptive_line(q_cont, point, integrand, 0.0, u1, seed, 0.5 * tol);
    moments[k] = r.value;
    q_end = r.end_root;
  }

  // Tail: lambda = l0 + 1/xi, chi = xi^{-4} sqrt(T(xi)),
  // T(xi) = prod (1 - (lambda_j - l0) xi).
  const cd lam1 = start + dir * leg;
  const cd chi1 = sqrt_dir * u1 * q_end;
  const cd xi1 = 1.0 / (lam1 - l0);
  std::vector<cd> xi_roots;
  cd lead(1.0, 0.0);
  for (const cd& r : bd.lambda_points) {
    xi_roots.push_back(1.0 / (r - l0));
    lead *= -(r - l0);
  }
  const RootContinuation t_cont(xi_roots, lead);
  const cd seed_t = xi1 * xi1 * xi1 * xi1 * chi1;
  for (int k = 0; k < 3; ++k) {
    const int power = 2 - k;
    // s in [0, 1] runs xi from xi1 to 0.
    auto point = [&](double s) { return xi1 * (1.0 - s); };
    auto integrand = [&](double s, cd root_t) {
      const cd xi = xi1 * (1.0 - s);
      cd num(1.0, 0.0);
      for (int i = 0; i < power; ++i) num *= (l0 * xi + 1.0);
      cd xpow(1.0, 0.0);
      for (int i = 0; i < 2 - power; ++i) xpow *= xi;
      // d(lambda) = -d(xi)/xi^2 and d(xi) = -xi1 ds.
      return num * xpow * xi1 / root_t;
    };
    try {
      const detail::LineResult r = detail::adaptive_line(t_cont, point, integrand, 0.0, 1.0, seed_t, 0.5 * tol);
      moments[k] += r.value;
    } catch (const Error& e) {
      throw Error(Errc::kTailNotConverged, e.what());
    }
  }
  return moments;
}

std::array<cd, 3> reduce_modulo_lattice(const std::array<cd, 3>& delta, const Eigen::Matrix3cd& B) {
  const Eigen::Matrix3d Y = B.imag();
  const Eigen::Matrix3d Yinv = Y.inverse();
  Eigen::Vector3d y(delta[0].imag(), delta[1].imag(), delta[2].imag());
  // Search around the rounded coordinates of y in the basis Y.
  const Eigen::Vector3d c = (Yinv * y).array().round();
  Eigen::Vector3i best_n = Eigen::Vector3i::Zero();
  double best = std::numeric_limits<double>::infinity();
  for (int i = -3; i <= 3; ++i) {
    for (int j = -3; j <= 3; ++j) {
      for (int k = -3; k <= 3; ++k) {
        const Eigen::Vector3d n = c + Eigen::Vector3d(i, j, k);
        const Eigen::Vector3d r = y - Y * n;
        const double q = r.dot(Yinv * r);
        if (q < best - 1e-12) {
          best = q;
          best_n = n.cast<int>();
        }
      }
    }
  }
  std::array<cd, 3> out{};
  const Eigen::Vector3cd shift = B * best_n.cast<cd>();
  for (int i = 0; i < 3; ++i) {
    cd v = delta[i] - shift[i];
    const double re = v.real() - std::floor(v.real() + 0.5);
    out[i] = cd(re, v.imag());
  }
  return out;
}

std::array<cd, 3> abelian_to_infinity(const CurveParams& params, const Eigen::Matrix3cd& C,
                                      const Eigen::Matrix3cd& B, const AbelianOptions& opts) {
  const std::array<cd, 3> j = abelian_moments_to_infinity(params, opts);
  const Eigen::Vector3cd jv(j[0], j[1], j[2]);
  const Eigen::Vector3cd d = 2.0 * C * jv;
  return reduce_modulo_lattice({d[0], d[1], d[2]}, B);
}

}  // namespace freak
