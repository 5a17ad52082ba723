#pragma once

// Cumulative single transferable vote (CSTV).
//
// Main loop: while a project is eligible (support >= cost, and affordable),
// fund the highest-priority one after redistributing its excess; otherwise run
// the no-eligible procedure (eliminate a project, or pull support onto one that
// is eligible by transfers). A postprocedure then spends what is left.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cumpb/greedy.hpp"
#include "cumpb/model.hpp"
#include "cumpb/trace.hpp"

namespace cumpb {

enum class NoEligible { EliminationWithTransfers, MinimalTransfers };
enum class PostProcedure { ReverseEliminations, AcceptUndersupported };

struct CstvConfig {
  PriorityKind selection = PriorityKind::GE;  // GE or GSC
  NoEligible no_eligible = NoEligible::EliminationWithTransfers;
  PostProcedure post = PostProcedure::ReverseEliminations;

  static CstvConfig ewt() { return {PriorityKind::GE, NoEligible::EliminationWithTransfers, PostProcedure::ReverseEliminations}; }
  static CstvConfig ewtc() { return {PriorityKind::GSC, NoEligible::EliminationWithTransfers, PostProcedure::ReverseEliminations}; }
  static CstvConfig mt() { return {PriorityKind::GE, NoEligible::MinimalTransfers, PostProcedure::AcceptUndersupported}; }
  static CstvConfig mtc() { return {PriorityKind::GSC, NoEligible::MinimalTransfers, PostProcedure::AcceptUndersupported}; }

  /// Throws ModelError unless selection is GE/GSC and the no-eligible procedure
  /// is paired with its postprocedure (EwT with RE, MT with AUP).
  void validate() const;
};

/// Mutable state of one CSTV run.
struct CstvState {
  explicit CstvState(const BudgetingScenario& scenario);

  const BudgetingScenario& scenario;
  WorkingProfile profile;
  Cost remaining;
  std::vector<std::size_t> selected;
  std::vector<std::size_t> elimination_order;
  TransferTrace trace;
  std::vector<std::size_t> tie_rank;
  Rational endowment;  // L / n

  Rational support(std::size_t project) const;
  Cost cost(std::size_t project) const { return scenario.projects()[project].cost; }

  /// Money the supporters of p could move onto p: (L/n) * sum of their row sums.
  Rational pooled_support(std::size_t project) const;
};

/// Moves (1 - gamma) of each transferable supporter's value on p to her other
/// Active projects, gamma solving
///   gamma*(L/n)*sum_tran v(p) + (L/n)*sum_rest v(p) = c(p),
/// clamped to [0, 1]. Throws when support(p) < c(p).
TraceEvent redistribute_excess(CstvState& state, std::size_t project);

/// Pays for p: zeroes its column, marks it Selected and charges the budget.
/// Money above c(p) left on the column is forfeited.
TraceEvent fund_project(CstvState& state, std::size_t project);

/// Eliminates the Active project with minimal excess (GE) or excess/cost (GSC)
/// and moves each supporter's value to her other Active projects. Throws when
/// no project is Active.
TraceEvent eliminate_with_transfers(CstvState& state, PriorityKind mode);

/// Picks the project eligible by transfers with maximal excess (GE) or
/// support/cost (GSC) and pulls the least support needed onto it so that
/// support = cost exactly. nullopt when no project is eligible by transfers.
std::optional<TraceEvent> minimal_transfers_step(CstvState& state, PriorityKind mode);

/// Re-admits eliminated projects in reverse elimination order while they fit.
std::vector<TraceEvent> reverse_eliminations(CstvState& state);

/// Funds the best affordable Active project (by pooled supporter money), pulling
/// all of its supporters' value onto it, until nothing fits.
std::vector<TraceEvent> accept_undersupported(CstvState& state, PriorityKind mode);

RuleOutcome run_cstv(const BudgetingScenario& scenario, const CstvConfig& config);

}  // namespace cumpb
