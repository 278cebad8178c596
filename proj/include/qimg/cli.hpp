#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qimg/common.hpp"
#include "qimg/mpe.hpp"

namespace qimg {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitResourceCap = 3;

struct RunConfig {
  std::string command;
  std::string carrier_path;
  std::string embedder_path;
  std::string output_path;
  std::string report_path;
  int n1 = 16;
  int n2 = 16;
  NoiseMode mode = NoiseMode::Analytic;
  std::string operator_kind = "corrected";  // corrected | naive | both
  std::uint64_t seed = 1;
  double epsilon = kDefaultEpsilon;
  std::vector<int> resources = {1, 4, 16};  // mpe-bench N list
  std::uint64_t trials = 100000;            // mpe-bench draws per row
};

// Runs the tool on the given arguments (program name excluded) and returns
// the process exit code. Never throws; errors map to the exit codes above.
int run_cli(const std::vector<std::string>& args);

}  // namespace qimg
