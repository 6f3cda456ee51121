#pragma once

// Line integrals of the Abelian differentials of the three-phase family with
// the square root continued analytically along the path.

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "freak/curve.hpp"

namespace freak {

enum class DiffTag {
  kDtOverChiPlus,     // dt / chi_+          on Gamma1
  kTdtOverChiMinus,   // t dt / chi_-        on Gamma2
  kDsOverNuPlus,      // ds / nu_+           on Gamma+
  kDsOverNuMinus,     // ds / nu_-           on Gamma-
  kLamPowDlamOverChi  // lambda^k dl / chi   on Gamma3, k in {0, 1, 2}
};

struct DifferentialId {
  DiffTag tag = DiffTag::kDtOverChiPlus;
  int power = 0;  // only for kLamPowDlamOverChi

  CurveTag curve() const noexcept;
  cd numerator(cd z) const noexcept;
};

struct PathSpec {
  std::vector<cd> waypoints;  // straight segments between consecutive points
  cd sheet_seed;              // square-root value at waypoints.front()
  CurveTag curve = CurveTag::kGamma1;
};

struct LineIntegral {
  cd value;
  double error = 0.0;  // absolute error estimate
  cd end_root;         // continued square root at the last waypoint
};

// sqrt(lead * prod (z - r)) continued along straight lines.  Steps are capped
// at a fraction of the distance to the nearest root so that the sign choice
// "closest to the previous value" never flips sheets.
class RootContinuation {
 public:
  explicit RootContinuation(std::vector<cd> roots, cd lead = cd(1.0, 0.0));

  cd radicand(cd z) const noexcept;
  double distance_to_roots(cd z) const noexcept;
  cd continue_to(cd from, cd root_at_from, cd to) const;
  std::span<const cd> roots() const noexcept { return roots_; }

 private:
  std::vector<cd> roots_;
  cd lead_;
};

double default_clearance(const CurveParams& params, CurveTag curve);

double distance_point_segment(cd point, cd seg_a, cd seg_b) noexcept;

// Throws BranchPointProximity, ToleranceNotMet, InvalidSheetSeed, InvalidPath.
LineIntegral integrate_segment(const DifferentialId& diff, const PathSpec& path,
                               const CurveParams& params, double tol,
                               std::optional<double> clearance = std::nullopt);

// Closed rectangular loop around the segment [p, q].  size scales the
// half-width relative to the distance from [p, q] to the other roots; it must
// stay in (0, 0.7) so that no other branch point is enclosed.
PathSpec loop_around(const CurveParams& params, CurveTag curve, cd p, cd q, double size = 0.5);

enum class CycleTag { kA1, kB1, kAPlus, kBPlus, kAMinus, kBMinus };

const char* to_string(CycleTag tag) noexcept;

// Half-loop integrals around the two basic cuts of an elliptic quotient and
// the (a, b) periods selected from the lattice they generate.
struct EllipticCyclePair {
  cd basic_first;   // Gamma1: cut [t2, t1];       Gamma+-: cut [conj(s_c), s_c]
  cd basic_second;  // Gamma1: cut [conj(t1), t1]; Gamma+-: cut [-+2ab, s_c]
  cd a_period;
  cd b_period;
};

// Convention: on Gamma1 the a-period is the primitive purely imaginary
// period with Im > 0 and the b-period the primitive real one with
// b / (2i a) > 0; on Gamma+- the a-period is the primitive positive real
// period and the b-period has Re = a/2 and Im > 0.
EllipticCyclePair elliptic_cycle_pair(const CurveParams& params, CurveTag curve, double tol,
                                      double loop_size = 0.5);

// Half of the closed-cycle integral of the curve's holomorphic differential.
cd cycle_integral(CurveTag curve, CycleTag cycle, const CurveParams& params, double tol);

struct AbelianOptions {
  double tol = 1e-12;
  // Direction of the first leg leaving the branch point; chosen automatically
  // when empty.
  std::optional<double> ray_angle;
  // Distance from lambda0 at which the path switches to the xi = 1/(l - l0)
  // variable; 0 selects 3b.
  double junction_radius = 0.0;
};

// J_k = int_{E}^{P_inf} lambda^{2-k} dl / chi, k = 0, 1, 2, with
// E = lambda0 + a e^{i phi}.  The sheet reached at infinity is not controlled;
// Delta is insensitive to it.
std::array<cd, 3> abelian_moments_to_infinity(const CurveParams& params, const AbelianOptions& opts);

// Candidate ray angles ordered by clearance from the other branch points.
std::vector<double> ray_angle_candidates(const CurveParams& params);

// Representative of delta modulo Z^3 + B Z^3: the B-shift minimising the
// Im B^{-1} norm of the imaginary part (searched within [-3, 3]^3 of the
// rounded Y-coordinates of Im delta), then Re wrapped into [-1/2, 1/2).
std::array<cd, 3> reduce_modulo_lattice(const std::array<cd, 3>& delta, const Eigen::Matrix3cd& B);

// Delta = 2 C J reduced modulo the lattice.
std::array<cd, 3> abelian_to_infinity(const CurveParams& params, const Eigen::Matrix3cd& C,
                                      const Eigen::Matrix3cd& B, const AbelianOptions& opts = {});

}  // namespace freak
