#pragma once

#include <stdexcept>
#include <string>

namespace freak {

enum class Errc {
  // parameter validation
  kNonPositiveModulus,
  kModulusOrder,
  kAngleRange,
  kNonFinite,
  kInvalidArgument,
  // quadrature
  kBranchPointProximity,
  kToleranceNotMet,
  kInvalidSheetSeed,
  kInvalidPath,
  kTailNotConverged,
  // periods
  kDegeneratePeriods,
  kNonRealWaveNumber,
  kSingularUVW,
  // theta
  kNomeOutOfRange,
  kNotPositiveDefinite,
  kTruncationOverflow,
  // solution
  kNonRealDelta,
  kNonConstantScale,
  kNegativeScale,
  kDenominatorUnderflow,
  // verify
  kGridTooSmall,
  kRoundoffFloor,
  kFlatField,
  // internal cross-checks between independent routes
  kSelfCheckFailed,
  kIo,
};

const char* to_string(Errc code) noexcept;

// True for errors caused by bad user input rather than numerical trouble.
bool is_validation_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace freak
