#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ewc/core.hpp"

namespace ewc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Runs one command line (without the program name) against the given streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

/// Named parameter sweeps emitted by `plotdata --preset`.
struct Curve {
  std::string label;
  EwcParams params;
};
std::vector<std::string> preset_names();
std::vector<Curve> preset_curves(const std::string& name);

}  // namespace ewc::cli
