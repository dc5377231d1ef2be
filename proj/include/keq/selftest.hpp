#pragma once

#include <string>
#include <vector>

namespace keq {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Built-in fixture checks: exact vs brute-force oracle agreement, bound
// sandwich ordering, and the coset law for single-symbol pairs. Used by the
// CLI `verify` subcommand.
std::vector<CheckResult> run_selftest();

}  // namespace keq
