#pragma once

#include <string>
#include <vector>

namespace heckeops {

// One numbered check of the built-in golden suite.
struct VerifyResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  int h_prec = 24;
  int p_prec = 12;
  int q_prec = 60;
  bool concurrent = true;
};

// Runs the twelve golden checks against the built-in level-4 model at p = 5.
// Independent checks may run concurrently; results come back ordered by
// index either way, and the report text is deterministic.
std::vector<VerifyResult> run_verification(const VerifyOptions& opt = {});

std::string format_report(const std::vector<VerifyResult>& results, bool json);

}  // namespace heckeops
