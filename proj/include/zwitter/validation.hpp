#pragma once

#include "zwitter/core.hpp"
#include "zwitter/state.hpp"

#include <string>
#include <vector>

// The cross-module validation suites behind the `validate` CLI command and
// the acceptance test binary. Each criterion is self-contained, prints one
// pass/fail line, and pins its tolerances in code.

namespace zwitter::validation {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
  double seconds = 0;
};

struct Verdict {
  std::vector<CriterionResult> criteria;
  bool all_pass() const;
  std::string to_json() const;
};

/// Criteria ids are 1..10.
CriterionResult run_criterion(int id);

/// Selector -> criteria ids. Known selectors: identities, oracles,
/// structural, purestate, energy, spectroscopy, doubleslit, convergence,
/// transforms, all. Throws UsageError otherwise.
std::vector<int> selector_criteria(const std::string& selector);

/// Run and print one line per criterion.
Verdict run(const std::vector<int>& ids, bool print = true);

/// Small zoo of normalized classical wave functions for identity suites
/// (pure states plus evolved zwitter states, all on one square grid).
std::vector<RealPhaseField> test_state_zoo(const GridSpec& g,
                                           bool include_evolved = true);

}  // namespace zwitter::validation
