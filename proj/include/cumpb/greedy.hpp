#pragma once

#include <cstddef>
#include <string>

#include "cumpb/model.hpp"
#include "cumpb/trace.hpp"

namespace cumpb {

/// Greedy-by-Support, Greedy-by-Support-over-Cost, Greedy-by-Excess.
enum class PriorityKind { GS, GSC, GE };

std::string to_string(PriorityKind kind);

/// Priority from a project's summed ballot value (column sum) and cost:
/// GS = column, GSC = support / cost, GE = support - cost.
Rational priority_value(PriorityKind kind, const Rational& column_sum, Cost cost, const Rational& endowment);

/// Priority of a project under the scenario's original ballots.
Rational priority(const BudgetingScenario& scenario, std::size_t project, PriorityKind kind);
Rational priority(const BudgetingScenario& scenario, std::string_view project_id, PriorityKind kind);

/// Ranks projects by descending priority (ties: ascending id) and funds each one
/// that still fits in the remaining budget. The trace holds one Selected or
/// Skipped event per ranked project, in ranking order.
RuleOutcome run_greedy(const BudgetingScenario& scenario, PriorityKind kind);

}  // namespace cumpb
