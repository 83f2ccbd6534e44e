#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scpsim::verify {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// The ten oracle-anchored property checks. `scale` multiplies trial counts
// (1.0 = full scale); the time limits that are part of a check apply only at
// full scale.
CheckResult run_check(int id, double scale, std::uint64_t seed);

std::vector<CheckResult> run_all(double scale, std::uint64_t seed);

constexpr int kCheckCount = 10;

}  // namespace scpsim::verify
