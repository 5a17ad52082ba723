#include "cumpb/rules.hpp"

#include <algorithm>
#include <cctype>

#include "cumpb/baselines.hpp"
#include "cumpb/cstv.hpp"
#include "cumpb/greedy.hpp"

namespace cumpb {

std::string to_string(Rule rule) {
  switch (rule) {
    case Rule::GS: return "GS";
    case Rule::GSC: return "GSC";
    case Rule::GE: return "GE";
    case Rule::EwT: return "EwT";
    case Rule::EwTC: return "EwTC";
    case Rule::MT: return "MT";
    case Rule::MTC: return "MTC";
    case Rule::SNW: return "SNW";
  }
  return "?";
}

Rule parse_rule(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "gs") return Rule::GS;
  if (lower == "gsc") return Rule::GSC;
  if (lower == "ge") return Rule::GE;
  if (lower == "ewt") return Rule::EwT;
  if (lower == "ewtc") return Rule::EwTC;
  if (lower == "mt") return Rule::MT;
  if (lower == "mtc") return Rule::MTC;
  if (lower == "snw") return Rule::SNW;
  throw ModelError("unknown rule '" + std::string(name) + "'");
}

std::vector<Rule> parse_rule_list(std::string_view list) {
  std::vector<Rule> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto comma = list.find(',', start);
    if (comma == std::string_view::npos) comma = list.size();
    auto item = list.substr(start, comma - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (!item.empty()) out.push_back(parse_rule(item));
    start = comma + 1;
  }
  if (out.empty()) throw ModelError("empty rule list");
  return out;
}

bool is_cstv(Rule rule) {
  return rule == Rule::EwT || rule == Rule::EwTC || rule == Rule::MT || rule == Rule::MTC;
}

RuleOutcome run_rule(Rule rule, const BudgetingScenario& s) {
  switch (rule) {
    case Rule::GS: return run_greedy(s, PriorityKind::GS);
    case Rule::GSC: return run_greedy(s, PriorityKind::GSC);
    case Rule::GE: return run_greedy(s, PriorityKind::GE);
    case Rule::EwT: return run_cstv(s, CstvConfig::ewt());
    case Rule::EwTC: return run_cstv(s, CstvConfig::ewtc());
    case Rule::MT: return run_cstv(s, CstvConfig::mt());
    case Rule::MTC: return run_cstv(s, CstvConfig::mtc());
    case Rule::SNW: {
      RuleOutcome out;
      out.selected = run_snw(s).selected;
      return out;
    }
  }
  throw ModelError("unhandled rule");
}

Bundle run_rule_bundle(Rule rule, const BudgetingScenario& s) {
  return run_rule(rule, s).bundle(s);
}

}  // namespace cumpb
