#pragma once

// The eight end-to-end acceptance checks, shared by the acceptance test
// binary and `freakwave verify`.

#include <memory>
#include <string>
#include <vector>

#include "freak/pipeline.hpp"

namespace freak {

struct AcResult {
  std::string id;       // "AC-1" .. "AC-8"
  bool pass = false;
  std::string detail;   // measured numbers with the bounds they were held to
  std::vector<std::string> diagnostics;
};

struct AcceptanceOptions {
  double a = 1.0 / 1.3, b = 1.3, phi = 0.3 * 3.14159265358979323846, alpha = 0.1;
  double tol = 1e-13;
  NomeConvention nome = NomeConvention::kPi;
  double corrupt_A = 1.0;  // multiplies the fitted scale before AC-4 (sensitivity harness)
  bool paranoid = false;
  unsigned long long seed = 20240611;
};

class AcceptanceSuite {
 public:
  explicit AcceptanceSuite(AcceptanceOptions opts);

  AcResult ac1();
  AcResult ac2();
  AcResult ac3();
  AcResult ac4();
  AcResult ac5();
  AcResult ac6();
  AcResult ac7();
  AcResult ac8();
  std::vector<AcResult> run_all();

  // Solutions at lambda0 = 0 and lambda0 = k2/(4k1), built on first use.
  const Solution& at_zero();
  const Solution& at_resonance();

  static BoxSpec residual_box();

 private:
  AcceptanceOptions opts_;
  std::unique_ptr<Solution> zero_, resonance_;
};

std::string format_result(const AcResult& r);

}  // namespace freak
