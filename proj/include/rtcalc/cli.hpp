#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rtcalc/cycles.hpp"

namespace rtcalc::cli {

enum class Format { Json, Latex, Text };

// Validated before any work starts; equal configs give byte-identical output.
struct RunConfig {
  std::string subcommand;
  std::string suite;  // verify only
  int n = 0, i = 0, j = 0, m = 1;
  int max_n = 0;  // 0: suite default
  std::string k = "sym";
  std::string g = "sym";
  std::vector<int> multiplicities;
  std::string graph, coda, klass, stratum;
  Format format = Format::Text;
  int jobs = 0;  // 0: OpenMP default
  bool fail_fast = false;
  bool brute = false;
  bool genus_root = false;  // trees: rational-tails graphs instead of rooted trees
  bool truncated = false;   // zcycle: Z^t
};

inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kUsage = 2;

// Runs a grid of checks, writing reports in task order; witnesses of
// failures go to err.  Returns kVerifyFailed if any check failed.
using Task = std::function<VerificationReport()>;
[[nodiscard]] int run_tasks(const std::vector<Task>& tasks, const RunConfig& c, std::ostream& out,
                            std::ostream& err);

// args excludes the program name.
[[nodiscard]] int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
[[nodiscard]] int run(int argc, char** argv);

}  // namespace rtcalc::cli
