#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cumpb/model.hpp"

namespace cumpb {

/// One cell update of the working profile, in ballot units.
struct ValueChange {
  std::size_t voter = 0;
  std::size_t project = 0;
  Rational delta;
};

enum class EventKind {
  Selected,             // funded by the main loop (or by a greedy rule)
  Skipped,              // greedy rules only: ranked but unaffordable
  Eliminated,
  ExcessRedistributed,
  TransferIn,
  PostAdded,
};

std::string to_string(EventKind kind);

/// Money fields (paid, forfeited) are in currency units; changes are in ballot units.
struct TraceEvent {
  EventKind kind = EventKind::Selected;
  std::size_t project = 0;
  std::vector<ValueChange> changes;
  Rational paid;                 // money voters paid for this project
  Rational forfeited;            // money that left the system unspent
  std::optional<Rational> gamma;
  std::optional<Rational> priority;
  int rounds = 0;
  std::string phase;             // "RE" | "AUP" for PostAdded
};

struct TransferTrace {
  std::vector<TraceEvent> events;
};

struct RuleOutcome {
  std::vector<std::size_t> selected;  // selection order
  TransferTrace trace;

  Bundle bundle(const BudgetingScenario& scenario) const { return make_bundle(scenario, selected); }
};

/// Result of replaying a trace against the scenario's initial ballots.
struct TraceAudit {
  std::vector<std::string> problems;
  WorkingProfile final_profile;
  Rational paid;
  Rational forfeited;
  std::size_t steps_checked = 0;

  bool ok() const { return problems.empty(); }
};

/// Replays every event and checks after each one: money conservation
/// (supports + paid + forfeited = L), nonnegative cells, non-increasing voter
/// row sums, nonnegative forfeits, zero columns on funded projects, and
/// support = cost after every transfer-in. Also checks the bundle is feasible.
TraceAudit audit_trace(const BudgetingScenario& scenario, const RuleOutcome& outcome);

/// One event per line:
///   <kind> <project> [key=num/den ...] [| voter:project:num/den ...]
void write_trace_log(std::ostream& out, const BudgetingScenario& scenario, const TransferTrace& trace);
std::string trace_log(const BudgetingScenario& scenario, const TransferTrace& trace);

}  // namespace cumpb
