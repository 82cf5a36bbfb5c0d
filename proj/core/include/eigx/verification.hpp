#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eigx {

struct CheckResult {
  std::string id;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool informational = false;  // reported, never fails the suite
  std::string detail;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool all_passed() const;
  std::string to_json() const;
};

/// Identity and invariant checks on small meshes with a fixed seed.
VerificationReport run_verification_suite(std::uint64_t seed);

}  // namespace eigx
