#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ewc::verify {

struct PropertyResult {
  std::string suite;
  std::string name;
  bool passed;
  double measured;   // the statistic compared against the threshold
  double threshold;
};

/// Known suite names, in the order `all` runs them.
const std::vector<std::string>& suite_names();

/// Runs one suite (or "all"); throws DomainError for an unknown name.
std::vector<PropertyResult> run_suite(const std::string& suite, std::uint64_t seed);

}  // namespace ewc::verify
