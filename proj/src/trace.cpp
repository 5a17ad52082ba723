#include "cumpb/trace.hpp"

#include <ostream>
#include <sstream>

namespace cumpb {

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Selected: return "selected";
    case EventKind::Skipped: return "skipped";
    case EventKind::Eliminated: return "eliminated";
    case EventKind::ExcessRedistributed: return "excess";
    case EventKind::TransferIn: return "transfer_in";
    case EventKind::PostAdded: return "post_added";
  }
  return "unknown";
}

TraceAudit audit_trace(const BudgetingScenario& s, const RuleOutcome& outcome) {
  TraceAudit audit{{}, WorkingProfile(s), Rational(0), Rational(0), 0};
  WorkingProfile& profile = audit.final_profile;
  const Rational endowment = s.endowment();
  const std::size_t n = s.num_voters();

  std::vector<Rational> rows(n);
  for (std::size_t j = 0; j < n; ++j) rows[j] = profile.row_sum(j);

  auto fail = [&](std::size_t step, const std::string& what) {
    audit.problems.push_back("event " + std::to_string(step) + ": " + what);
  };

  std::size_t step = 0;
  for (const auto& ev : outcome.trace.events) {
    ++step;
    for (const auto& ch : ev.changes) profile.add(ch.voter, ch.project, ch.delta);
    audit.paid += ev.paid;
    audit.forfeited += ev.forfeited;
    if (ev.forfeited < 0) fail(step, "negative forfeit");

    switch (ev.kind) {
      case EventKind::Selected:
      case EventKind::PostAdded: profile.set_status(ev.project, ProjectStatus::Selected); break;
      case EventKind::Eliminated: profile.set_status(ev.project, ProjectStatus::Eliminated); break;
      default: break;
    }

    Rational money = audit.paid + audit.forfeited;
    for (std::size_t p = 0; p < s.num_projects(); ++p) {
      if (profile.status(p) == ProjectStatus::Selected && profile.column_sum(p) != 0) {
        fail(step, "funded project " + s.projects()[p].id + " still carries value");
      }
      money += profile.column_sum(p) * endowment;
    }
    if (money != s.budget()) fail(step, "money not conserved: " + format_rational(money));

    for (std::size_t j = 0; j < n; ++j) {
      Rational row = profile.row_sum(j);
      if (row > rows[j]) fail(step, "row sum of voter " + s.voter_ids()[j] + " increased");
      rows[j] = row;
      for (std::size_t p = 0; p < s.num_projects(); ++p) {
        if (profile.value(j, p) < 0) fail(step, "negative value");
      }
    }
    if (ev.kind == EventKind::TransferIn) {
      if (profile.column_sum(ev.project) * endowment != s.projects()[ev.project].cost) {
        fail(step, "transfer-in did not end at support = cost");
      }
    }
    ++audit.steps_checked;
  }

  Cost total = 0;
  for (auto p : outcome.selected) total += s.projects().at(p).cost;
  if (total > s.budget()) audit.problems.push_back("bundle cost exceeds budget");
  return audit;
}

void write_trace_log(std::ostream& out, const BudgetingScenario& s, const TransferTrace& trace) {
  for (const auto& ev : trace.events) {
    out << to_string(ev.kind) << ' ' << s.projects().at(ev.project).id;
    if (ev.priority) out << " priority=" << format_fraction(*ev.priority);
    if (ev.gamma) out << " gamma=" << format_fraction(*ev.gamma);
    if (ev.kind == EventKind::TransferIn) out << " rounds=" << ev.rounds;
    if (!ev.phase.empty()) out << " phase=" << ev.phase;
    if (ev.paid != 0) out << " paid=" << format_fraction(ev.paid);
    if (ev.forfeited != 0) out << " forfeited=" << format_fraction(ev.forfeited);
    if (!ev.changes.empty()) {
      out << " |";
      for (const auto& ch : ev.changes) {
        out << ' ' << s.voter_ids().at(ch.voter) << ':' << s.projects().at(ch.project).id << ':'
            << format_fraction(ch.delta);
      }
    }
    out << '\n';
  }
}

std::string trace_log(const BudgetingScenario& scenario, const TransferTrace& trace) {
  std::ostringstream out;
  write_trace_log(out, scenario, trace);
  return out.str();
}

}  // namespace cumpb
