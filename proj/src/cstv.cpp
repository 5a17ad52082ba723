#include "cumpb/cstv.hpp"

#include <algorithm>

namespace cumpb {

namespace {

// Moves `amount` of voter j's value away from `source` onto her other Active
// projects with positive value, proportionally to those values. Returns false
// (and moves nothing) when she has no such project.
bool spread_to_others(CstvState& st, std::size_t voter, std::size_t source, const Rational& amount,
                      std::vector<ValueChange>& changes) {
  const auto& prof = st.profile;
  Rational rest = 0;
  std::vector<std::size_t> recipients;
  for (std::size_t q = 0; q < prof.num_projects(); ++q) {
    if (q != source && prof.is_active(q) && prof.value(voter, q) > 0) {
      recipients.push_back(q);
      rest += prof.value(voter, q);
    }
  }
  if (recipients.empty()) return false;
  if (amount == 0) return true;
  std::vector<Rational> shares;
  shares.reserve(recipients.size());
  for (auto q : recipients) shares.push_back(amount * prof.value(voter, q) / rest);
  for (std::size_t i = 0; i < recipients.size(); ++i) {
    st.profile.add(voter, recipients[i], shares[i]);
    changes.push_back({voter, recipients[i], shares[i]});
  }
  st.profile.add(voter, source, -amount);
  changes.push_back({voter, source, -amount});
  return true;
}

// Pulls `amount` of voter j's value from her other Active projects onto
// `target`, proportionally to her values there.
void drain_from_others(CstvState& st, std::size_t voter, std::size_t target, const Rational& amount,
                       std::vector<ValueChange>& changes) {
  if (amount == 0) return;
  const auto& prof = st.profile;
  const Rational rest = prof.row_sum(voter) - prof.value(voter, target);
  std::vector<std::pair<std::size_t, Rational>> takes;
  for (std::size_t q = 0; q < prof.num_projects(); ++q) {
    if (q != target && prof.value(voter, q) > 0) {
      takes.emplace_back(q, Rational(amount * prof.value(voter, q) / rest));
    }
  }
  for (auto& [q, take] : takes) {
    st.profile.add(voter, q, -take);
    changes.push_back({voter, q, -take});
  }
  st.profile.add(voter, target, amount);
  changes.push_back({voter, target, amount});
}

bool has_other_active(const CstvState& st, std::size_t voter, std::size_t project) {
  for (std::size_t q = 0; q < st.profile.num_projects(); ++q) {
    if (q != project && st.profile.is_active(q) && st.profile.value(voter, q) > 0) return true;
  }
  return false;
}

// True when (a_value, a) should be preferred over (b_value, b) when maximizing.
bool better_max(const Rational& a_value, std::size_t a, const Rational& b_value, std::size_t b,
                const std::vector<std::size_t>& rank) {
  if (a_value != b_value) return a_value > b_value;
  return rank[a] < rank[b];
}

Rational selection_priority(const CstvState& st, std::size_t p, PriorityKind mode) {
  return priority_value(mode, st.profile.column_sum(p), st.cost(p), st.endowment);
}

}  // namespace

void CstvConfig::validate() const {
  if (selection == PriorityKind::GS) throw ModelError("CSTV selection must be GE or GSC");
  if ((no_eligible == NoEligible::EliminationWithTransfers) != (post == PostProcedure::ReverseEliminations)) {
    throw ModelError("EwT must be paired with RE and MT with AUP");
  }
}

CstvState::CstvState(const BudgetingScenario& s)
    : scenario(s),
      profile(s),
      remaining(s.budget()),
      tie_rank(s.tie_ranks()),
      endowment(s.endowment()) {}

Rational CstvState::support(std::size_t project) const {
  return profile.column_sum(project) * endowment;
}

Rational CstvState::pooled_support(std::size_t project) const {
  Rational pooled = 0;
  for (std::size_t j = 0; j < profile.num_voters(); ++j) {
    if (profile.value(j, project) > 0) pooled += profile.row_sum(j);
  }
  return pooled * endowment;
}

TraceEvent redistribute_excess(CstvState& st, std::size_t p) {
  const Rational cost = st.cost(p);
  if (st.support(p) < cost) throw ModelError("excess redistribution on an undersupported project");

  TraceEvent ev;
  ev.kind = EventKind::ExcessRedistributed;
  ev.project = p;

  std::vector<std::size_t> tran;
  Rational tran_sum = 0, rest_sum = 0;
  for (std::size_t j = 0; j < st.profile.num_voters(); ++j) {
    const Rational& v = st.profile.value(j, p);
    if (v <= 0) continue;
    if (has_other_active(st, j, p)) {
      tran.push_back(j);
      tran_sum += v;
    } else {
      rest_sum += v;
    }
  }

  Rational gamma = 1;
  if (tran_sum > 0) {
    gamma = (cost / st.endowment - rest_sum) / tran_sum;
    if (gamma < 0) gamma = 0;
    if (gamma > 1) gamma = 1;
  }
  ev.gamma = gamma;
  if (gamma < 1) {
    for (auto j : tran) {
      const Rational moved = (1 - gamma) * st.profile.value(j, p);
      spread_to_others(st, j, p, moved, ev.changes);
    }
  }
  return ev;
}

TraceEvent fund_project(CstvState& st, std::size_t p) {
  TraceEvent ev;
  ev.kind = EventKind::Selected;
  ev.project = p;
  const Rational money = st.support(p);
  const Rational cost = st.cost(p);
  for (std::size_t j = 0; j < st.profile.num_voters(); ++j) {
    const Rational v = st.profile.value(j, p);
    if (v != 0) {
      st.profile.add(j, p, -v);
      ev.changes.push_back({j, p, -v});
    }
  }
  ev.paid = money < cost ? money : cost;
  ev.forfeited = money - ev.paid;
  st.profile.set_status(p, ProjectStatus::Selected);
  st.remaining -= st.cost(p);
  st.selected.push_back(p);
  return ev;
}

TraceEvent eliminate_with_transfers(CstvState& st, PriorityKind mode) {
  std::optional<std::size_t> worst;
  Rational worst_value;
  for (auto p : st.profile.active_projects()) {
    Rational value = st.support(p) - st.cost(p);
    if (mode == PriorityKind::GSC) value /= st.cost(p);
    // minimizing: negate to reuse the max comparator
    if (!worst || better_max(-value, p, -worst_value, *worst, st.tie_rank)) {
      worst = p;
      worst_value = value;
    }
  }
  if (!worst) throw ModelError("no Active project to eliminate");
  const std::size_t p = *worst;

  TraceEvent ev;
  ev.kind = EventKind::Eliminated;
  ev.project = p;
  for (std::size_t j = 0; j < st.profile.num_voters(); ++j) {
    const Rational v = st.profile.value(j, p);
    if (v <= 0) continue;
    if (!spread_to_others(st, j, p, v, ev.changes)) {
      st.profile.add(j, p, -v);
      ev.changes.push_back({j, p, -v});
      ev.forfeited += v * st.endowment;
    }
  }
  st.profile.set_status(p, ProjectStatus::Eliminated);
  st.elimination_order.push_back(p);
  return ev;
}

std::optional<TraceEvent> minimal_transfers_step(CstvState& st, PriorityKind mode) {
  std::optional<std::size_t> best;
  Rational best_value;
  for (auto p : st.profile.active_projects()) {
    if (st.cost(p) > st.remaining) continue;
    if (st.pooled_support(p) < st.cost(p)) continue;
    Rational value = selection_priority(st, p, mode);
    if (!best || better_max(value, p, best_value, *best, st.tie_rank)) {
      best = p;
      best_value = value;
    }
  }
  if (!best) return std::nullopt;
  const std::size_t p = *best;

  TraceEvent ev;
  ev.kind = EventKind::TransferIn;
  ev.project = p;
  const Rational needed = st.cost(p) / st.endowment;  // in ballot units
  if (st.profile.column_sum(p) >= needed) return ev;  // r = 1 already

  // The iteration v(p) := min(total, v(p) / r) converges to a uniform scale s
  // applied to every supporter, capped at her total. Each round either caps
  // another supporter or lands exactly on the cost.
  std::vector<std::size_t> supporters;
  for (std::size_t j = 0; j < st.profile.num_voters(); ++j) {
    if (st.profile.value(j, p) > 0) supporters.push_back(j);
  }
  std::vector<bool> capped(supporters.size(), false);
  Rational scale;
  while (true) {
    ++ev.rounds;
    Rational uncapped = 0, fixed = 0;
    for (std::size_t i = 0; i < supporters.size(); ++i) {
      const auto j = supporters[i];
      if (capped[i]) {
        fixed += st.profile.row_sum(j);
      } else {
        uncapped += st.profile.value(j, p);
      }
    }
    if (uncapped == 0) break;
    scale = (needed - fixed) / uncapped;
    bool newly = false;
    for (std::size_t i = 0; i < supporters.size(); ++i) {
      const auto j = supporters[i];
      if (!capped[i] && scale * st.profile.value(j, p) >= st.profile.row_sum(j)) {
        capped[i] = true;
        newly = true;
      }
    }
    if (!newly) break;
  }

  for (std::size_t i = 0; i < supporters.size(); ++i) {
    const auto j = supporters[i];
    const Rational current = st.profile.value(j, p);
    const Rational target = capped[i] ? st.profile.row_sum(j) : Rational(scale * current);
    drain_from_others(st, j, p, target - current, ev.changes);
  }
  return ev;
}

std::vector<TraceEvent> reverse_eliminations(CstvState& st) {
  std::vector<TraceEvent> out;
  for (auto it = st.elimination_order.rbegin(); it != st.elimination_order.rend(); ++it) {
    const std::size_t p = *it;
    if (st.profile.status(p) != ProjectStatus::Eliminated || st.cost(p) > st.remaining) continue;
    st.remaining -= st.cost(p);
    st.selected.push_back(p);
    st.profile.set_status(p, ProjectStatus::Selected);
    TraceEvent ev;
    ev.kind = EventKind::PostAdded;
    ev.project = p;
    ev.phase = "RE";
    out.push_back(std::move(ev));
  }
  return out;
}

std::vector<TraceEvent> accept_undersupported(CstvState& st, PriorityKind mode) {
  std::vector<TraceEvent> out;
  while (true) {
    std::optional<std::size_t> best;
    Rational best_value;
    for (auto p : st.profile.active_projects()) {
      if (st.cost(p) > st.remaining) continue;
      Rational value = st.pooled_support(p);
      if (mode == PriorityKind::GSC) {
        value /= st.cost(p);
      } else {
        value -= st.cost(p);
      }
      if (!best || better_max(value, p, best_value, *best, st.tie_rank)) {
        best = p;
        best_value = value;
      }
    }
    if (!best) break;
    const std::size_t p = *best;

    TraceEvent ev;
    ev.kind = EventKind::PostAdded;
    ev.project = p;
    ev.phase = "AUP";
    for (std::size_t j = 0; j < st.profile.num_voters(); ++j) {
      if (st.profile.value(j, p) <= 0) continue;
      for (std::size_t q = 0; q < st.profile.num_projects(); ++q) {
        const Rational v = st.profile.value(j, q);
        if (v != 0) {
          st.profile.add(j, q, -v);
          ev.changes.push_back({j, q, -v});
          ev.paid += v * st.endowment;
        }
      }
    }
    st.profile.set_status(p, ProjectStatus::Selected);
    st.remaining -= st.cost(p);
    st.selected.push_back(p);
    out.push_back(std::move(ev));
  }
  return out;
}

RuleOutcome run_cstv(const BudgetingScenario& scenario, const CstvConfig& cfg) {
  require_valid(scenario);
  cfg.validate();
  CstvState st(scenario);
  auto& events = st.trace.events;

  while (!st.profile.active_projects().empty()) {
    std::optional<std::size_t> chosen;
    Rational chosen_value;
    for (auto p : st.profile.active_projects()) {
      if (st.cost(p) > st.remaining || st.support(p) < st.cost(p)) continue;
      Rational value = selection_priority(st, p, cfg.selection);
      if (!chosen || better_max(value, p, chosen_value, *chosen, st.tie_rank)) {
        chosen = p;
        chosen_value = value;
      }
    }
    if (chosen) {
      if (st.support(*chosen) > st.cost(*chosen)) events.push_back(redistribute_excess(st, *chosen));
      events.push_back(fund_project(st, *chosen));
      continue;
    }
    if (cfg.no_eligible == NoEligible::EliminationWithTransfers) {
      events.push_back(eliminate_with_transfers(st, cfg.selection));
    } else {
      auto step = minimal_transfers_step(st, cfg.selection);
      if (!step) break;
      events.push_back(std::move(*step));
    }
  }

  auto post = cfg.post == PostProcedure::ReverseEliminations ? reverse_eliminations(st)
                                                               : accept_undersupported(st, cfg.selection);
  for (auto& ev : post) events.push_back(std::move(ev));

  return RuleOutcome{std::move(st.selected), std::move(st.trace)};
}

}  // namespace cumpb
