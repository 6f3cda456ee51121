#pragma once

// Field evaluation for the three-phase family.  With p~ = M (x, z, t) + z0
// and the complex offset delta,
//
//   F    = Re[f(p~ + delta) f(p~ - delta)] / f(p~)^2
//   |psi|^2 = A F,   u_KP = 2 A F,   |psi_H(x, t)|^2 = |psi(x, t, -alpha t)|^2.
//
// Re(delta) lies on the half-period lattice, so f(p~ - delta) is the complex
// conjugate of f(p~ + delta) and F >= 0.

#include <array>
#include <string>
#include <vector>

#include "freak/curve.hpp"
#include "freak/periods.hpp"
#include "freak/theta.hpp"

namespace freak {

enum class FieldKind { kNlsAmp2, kKpiU, kHirotaAmp2 };

const char* to_string(FieldKind k) noexcept;
FieldKind parse_field_kind(const std::string& s);

struct EvalOptions {
  double eps = 1e-16;         // theta series truncation
  double denominator_floor = 0.0;  // absolute floor on |f(p~)|; 0 disables
};

std::array<double, 3> phase_at(const WaveData& w, double x, double z, double t);

// F without the amplitude prefactor.  Throws DenominatorUnderflow.
double theta_ratio(const WaveData& w, double x, double z, double t, const EvalOptions& opts = {});

// For kHirotaAmp2 the z argument is ignored and t plays both roles.
double eval_field(FieldKind kind, const WaveData& w, double x, double z, double t, const EvalOptions& opts = {});

struct Axis {
  double min = 0.0, max = 0.0;
  int count = 0;
  double at(int i) const { return count == 1 ? min : min + (max - min) * double(i) / double(count - 1); }
};

enum class Plane { kXZ, kXT };

struct GridSpec {
  Axis x;
  Axis y;              // z for kXZ, t for kXT
  double fixed = 0.0;  // t for kXZ, z for kXT
  Plane plane = Plane::kXZ;
};

struct FieldGrid {
  GridSpec spec;
  FieldKind kind = FieldKind::kKpiU;
  WaveData wave;
  std::vector<double> values;  // row-major: values[iy * nx + ix]
  double value(int ix, int iy) const { return values[std::size_t(iy) * spec.x.count + ix]; }
};

// Hirota grids must use kXT.  threads = 0 picks the hardware concurrency.
// Throws InvalidArgument (counts < 2 or non-finite ranges) and
// DenominatorUnderflow (|f| below 1e-12 of the grid maximum).
FieldGrid grid_eval(FieldKind kind, const GridSpec& spec, const WaveData& w, unsigned threads = 0,
                    double eps = 1e-16);

struct DeltaCandidates {
  std::array<cd, 3> raw{};                       // Delta in p coordinates, reduced mod the lattice
  std::array<cd, 3> primary{};                   // reduce_args(raw)
  std::vector<std::array<cd, 3>> alternates;     // primary + reduce_args(e)/2, e in {0,1}^3 \ 0
};

// Throws NonRealDelta when 2 Re Delta is not integral to 1e-6.
DeltaCandidates delta_offsets(const CurveParams& params, const PeriodMatrices& pm, double tol = 1e-12);

struct ProbeGrid {
  std::array<double, 3> lo{}, hi{};  // (x, z, t)
  std::array<int, 3> count{5, 5, 3};
};

struct ScaleFit {
  double A = 0.0;       // median of the pointwise ratios
  double cv = 0.0;      // coefficient of variation over used probes
  int used = 0;
  int excluded = 0;     // probes with a near-zero denominator
  std::vector<double> samples;
};

// Pointwise A = (3F_zz - 4F_xt - F_xxxx) / (12 (F F_x)_x), centered
// second-order differences with one Richardson step.  Never throws on
// spread or sign; see checked_scale.
ScaleFit fit_amplitude_scale(const WaveData& w, const ProbeGrid& probes, double step_factor = 1e-2);

// Throws NonConstantScale (cv > max_cv) and NegativeScale.
double checked_scale(const ScaleFit& fit, double max_cv = 1e-3);

}  // namespace freak
