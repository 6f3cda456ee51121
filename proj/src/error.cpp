#include "freak/error.hpp"

namespace freak {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::kNonPositiveModulus: return "NonPositiveModulus";
    case Errc::kModulusOrder: return "ModulusOrder";
    case Errc::kAngleRange: return "AngleRange";
    case Errc::kNonFinite: return "NonFinite";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kBranchPointProximity: return "BranchPointProximity";
    case Errc::kToleranceNotMet: return "ToleranceNotMet";
    case Errc::kInvalidSheetSeed: return "InvalidSheetSeed";
    case Errc::kInvalidPath: return "InvalidPath";
    case Errc::kTailNotConverged: return "TailNotConverged";
    case Errc::kDegeneratePeriods: return "DegeneratePeriods";
    case Errc::kNonRealWaveNumber: return "NonRealWaveNumber";
    case Errc::kSingularUVW: return "SingularUVW";
    case Errc::kNomeOutOfRange: return "NomeOutOfRange";
    case Errc::kNotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::kTruncationOverflow: return "TruncationOverflow";
    case Errc::kNonRealDelta: return "NonRealDelta";
    case Errc::kNonConstantScale: return "NonConstantScale";
    case Errc::kNegativeScale: return "NegativeScale";
    case Errc::kDenominatorUnderflow: return "DenominatorUnderflow";
    case Errc::kGridTooSmall: return "GridTooSmall";
    case Errc::kRoundoffFloor: return "RoundoffFloor";
    case Errc::kFlatField: return "FlatField";
    case Errc::kSelfCheckFailed: return "SelfCheckFailed";
    case Errc::kIo: return "Io";
  }
  return "Unknown";
}

bool is_validation_error(Errc code) noexcept {
  switch (code) {
    case Errc::kNonPositiveModulus:
    case Errc::kModulusOrder:
    case Errc::kAngleRange:
    case Errc::kNonFinite:
    case Errc::kInvalidArgument:
    case Errc::kGridTooSmall:
      return true;
    default:
      return false;
  }
}

}  // namespace freak
