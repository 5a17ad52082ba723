#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cumpb/model.hpp"
#include "cumpb/trace.hpp"

namespace cumpb {

/// Every rule that takes a cumulative scenario. WM takes approval ballots and
/// lives in baselines.hpp.
enum class Rule { GS, GSC, GE, EwT, EwTC, MT, MTC, SNW };

std::string to_string(Rule rule);

/// Case-insensitive: "gs", "gsc", "ge", "ewt", "ewtc", "mt", "mtc", "snw".
Rule parse_rule(std::string_view name);

/// Comma-separated list of rule names.
std::vector<Rule> parse_rule_list(std::string_view list);

bool is_cstv(Rule rule);

RuleOutcome run_rule(Rule rule, const BudgetingScenario& scenario);
Bundle run_rule_bundle(Rule rule, const BudgetingScenario& scenario);

}  // namespace cumpb
