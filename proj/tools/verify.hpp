#ifndef SKEWMIX_TOOLS_VERIFY_HPP
#define SKEWMIX_TOOLS_VERIFY_HPP

#include <string>
#include <string_view>
#include <vector>

namespace skewmix::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// suite is one of blockalg, cocycle, mixstat, all; max_n >= 1.
std::vector<CheckResult> run_suite(std::string_view suite, int max_n);

}  // namespace skewmix::cli

#endif  // SKEWMIX_TOOLS_VERIFY_HPP
