#pragma once

// Independent checks on an evaluated solution: the KP-I residual
//
//   R = 3 u_zz - 4 u_xt - u_xxxx - 6 ((u_x)^2 + u u_xx),
//
// its convergence under step halving, lattice periodicity, and the drift of
// the long-wave envelope.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "freak/periods.hpp"
#include "freak/solution.hpp"

namespace freak {

// Fornberg's weights for the m-th derivative at z from nodes x.
std::vector<double> fornberg_weights(double z, const std::vector<double>& x, int m);

// Weights of the central stencil for the given derivative and even accuracy
// order, on offsets -r..r (unit spacing).
std::vector<double> central_weights(int derivative, int order);

// Points lo + (hi - lo) i / (n - 1) in (x, z, t); n = 1 collapses to lo.
struct BoxSpec {
  std::array<double, 3> lo{}, hi{};
  std::array<int, 3> count{1, 1, 1};
  std::array<double, 3> point(int ix, int iz, int it) const;
};

struct ResidualReport {
  double max_abs_residual = 0.0;
  double normalizer = 0.0;  // max over the grid of the four term magnitudes
  double normalized_residual = 0.0;
  double roundoff = 0.0;    // rounding level of the stencils at this step
  int fd_order = 0;
  double step = 0.0;
};

double default_step(const WaveData& w);

// Stencils of the given order and step are centered at every box point.
// Throws GridTooSmall (empty box, non-positive step), InvalidArgument (order).
ResidualReport kpi_residual(const WaveData& w, const BoxSpec& box, double step, int order, unsigned threads = 0);

// Step in [lo_factor, hi_factor] x default_step minimising the normalized
// residual over a log-spaced scan.
double tuned_step(const WaveData& w, const BoxSpec& box, int order, double lo_factor = 0.25,
                  double hi_factor = 64.0, int samples = 17);

struct ConvergenceReport {
  double order_estimate = 0.0;
  ResidualReport coarse, fine;
};

// log2(R(h) / R(h/2)).  Throws RoundoffFloor when both residuals sit within
// a decade of the stencils' rounding level.
ConvergenceReport convergence_order(const WaveData& w, const BoxSpec& box, double step, int order);

struct Sample {
  double x, z, t;
};

std::vector<Sample> random_samples(const BoxSpec& box, int n, unsigned long long seed);

// max over samples and columns k of |u(s + edges.col(k)) - u(s)| / (1 + |u|).
double periodicity_check(const WaveData& w, const Eigen::Matrix3d& edges, const std::vector<Sample>& samples);

// Same, for one shift vector (x, z, t).
double shift_deviation(const WaveData& w, const Eigen::Vector3d& shift, const std::vector<Sample>& samples);

struct DriftWindow {
  double x_min = -30.0, x_max = 30.0;
  int count = 1201;
  double z = 0.0;
};

struct DriftReport {
  double shift = 0.0;  // signed x displacement of the envelope over [t0, t1]
  int substeps = 0;
  double peak_correlation = 0.0;
};

// The field is smoothed by cascaded moving averages of widths 1/|k1| and
// 1/|k3| (three passes) and cross-correlated between consecutive times of a
// subdivision of [t0, t1], taking the correlation maximum nearest zero lag;
// the subdivision is refined until the accumulated lag stops changing, so
// displacements longer than the envelope spacing are tracked rather than
// aliased.  Throws FlatField when a correlation peak is not unique.
DriftReport envelope_drift(const WaveData& w, double t0, double t1, const DriftWindow& window = {});

}  // namespace freak

namespace freak {

// Convergence order at a step picked from a doubling scan: the smallest step
// above the scan's minimum whose half-step residual still sits a decade above
// that minimum (truncation-dominated on both levels).
ConvergenceReport auto_convergence_order(const WaveData& w, const BoxSpec& box, int order);

struct Peak {
  double x = 0.0, y = 0.0, value = 0.0;
};

// Strict local maxima of the grid (8-neighbourhood) above frac * max,
// refined off-grid by Newton steps on the field itself.
std::vector<Peak> find_peaks(const FieldGrid& grid, double frac = 0.5);

}  // namespace freak
