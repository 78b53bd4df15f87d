#pragma once

#include <functional>
#include <string>
#include <vector>

namespace dgles {

struct VerifyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Built-in property suites (quadrature, basis, filters, limiter, time
/// stepping, freestream). Each result is reported as soon as it is known.
std::vector<VerifyResult> run_verification(const std::function<void(const VerifyResult&)>& report = {});

}  // namespace dgles
