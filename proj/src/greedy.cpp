#include "cumpb/greedy.hpp"

#include <algorithm>
#include <numeric>

namespace cumpb {

std::string to_string(PriorityKind kind) {
  switch (kind) {
    case PriorityKind::GS: return "GS";
    case PriorityKind::GSC: return "GSC";
    case PriorityKind::GE: return "GE";
  }
  return "?";
}

Rational priority_value(PriorityKind kind, const Rational& column_sum, Cost cost, const Rational& endowment) {
  switch (kind) {
    case PriorityKind::GS: return column_sum;
    case PriorityKind::GSC: return Rational(column_sum * endowment / cost);
    case PriorityKind::GE: return Rational(column_sum * endowment - cost);
  }
  return 0;
}

Rational priority(const BudgetingScenario& s, std::size_t project, PriorityKind kind) {
  if (project >= s.num_projects()) throw ModelError("unknown project index " + std::to_string(project));
  Rational column = 0;
  for (const auto& row : s.ballots()) column += row[project];
  return priority_value(kind, column, s.projects()[project].cost, s.endowment());
}

Rational priority(const BudgetingScenario& s, std::string_view project_id, PriorityKind kind) {
  return priority(s, s.index_of(project_id), kind);
}

RuleOutcome run_greedy(const BudgetingScenario& s, PriorityKind kind) {
  require_valid(s);
  const std::size_t m = s.num_projects();
  const auto ranks = s.tie_ranks();

  std::vector<Rational> prio(m);
  for (std::size_t p = 0; p < m; ++p) prio[p] = priority(s, p, kind);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (prio[a] != prio[b]) return prio[a] > prio[b];
    return ranks[a] < ranks[b];
  });

  RuleOutcome out;
  Cost remaining = s.budget();
  for (auto p : order) {
    TraceEvent ev;
    ev.project = p;
    ev.priority = prio[p];
    if (s.projects()[p].cost <= remaining) {
      remaining -= s.projects()[p].cost;
      out.selected.push_back(p);
      ev.kind = EventKind::Selected;
    } else {
      ev.kind = EventKind::Skipped;
    }
    out.trace.events.push_back(std::move(ev));
  }
  return out;
}

}  // namespace cumpb
