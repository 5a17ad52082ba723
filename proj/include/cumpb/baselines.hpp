#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cumpb/model.hpp"
#include "cumpb/trace.hpp"

namespace cumpb {

struct SnwResult {
  Bundle bundle;
  std::vector<std::size_t> selected;
  Rational objective;               // prod_j (v*_j + v_j(B))
  std::vector<Rational> best_value;  // v*_j per voter
};

/// Smoothed Nash welfare by exhaustive search over inclusion-maximal feasible
/// bundles. The objective is monotone in B, so the optimum is attained on one;
/// ties go to the lexicographically smallest id list. Throws ModelError when
/// the scenario has more than max_projects projects.
SnwResult run_snw(const BudgetingScenario& scenario, std::size_t max_projects = 20);

/// SNW objective of an arbitrary bundle, given v*.
Rational snw_objective(const BudgetingScenario& scenario, const std::vector<std::size_t>& bundle,
                       const std::vector<Rational>& best_value);

/// Warsaw method: rank by approval count (ties: ascending id), fund whatever
/// fits. Selected indices refer to `projects`.
RuleOutcome run_wm(const std::vector<Project>& projects,
                   const std::vector<std::vector<std::string>>& approvals, Cost budget);

}  // namespace cumpb
