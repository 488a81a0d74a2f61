#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dickman {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;  // measured values; on failure, why
};

struct AcceptanceOptions {
  unsigned workers = 8;
  std::uint64_t master_seed = 1;
  // Path to the CLI binary; enables the manifest-rerun leg of the
  // reproducibility criterion. In-process worker invariance runs regardless.
  std::string cli_path;
  std::string scratch_dir;  // work area for CLI runs; temp dir when empty
};

// Runs the ten release criteria, streaming one pass/fail line each to `out`.
// Statistical criteria run at the fixed master seed, not a searched one, and
// failing lines carry the measured values.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace dickman
