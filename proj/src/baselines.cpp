#include "cumpb/baselines.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>

namespace cumpb {

namespace {

struct VoterGroup {
  std::vector<Rational> row;
  unsigned long count = 0;
};

std::vector<VoterGroup> group_identical(const BudgetingScenario& s) {
  std::map<std::vector<Rational>, unsigned long> counts;
  for (const auto& row : s.ballots()) ++counts[row];
  std::vector<VoterGroup> out;
  for (auto& [row, count] : counts) out.push_back({row, count});
  return out;
}

// Depth-first enumeration of inclusion-maximal feasible bundles over projects
// in `order`. `visit` receives the chosen positions and per-group values.
class MaximalBundles {
 public:
  MaximalBundles(const BudgetingScenario& s, const std::vector<VoterGroup>& groups,
                 std::vector<std::size_t> order)
      : s_(s), groups_(groups), order_(std::move(order)), chosen_(order_.size(), false),
        values_(groups.size(), Rational(0)) {}

  template <class Visit>
  void run(Visit&& visit) {
    dfs(0, s_.budget(), visit);
  }

 private:
  template <class Visit>
  void dfs(std::size_t depth, Cost remaining, Visit& visit) {
    if (depth == order_.size()) {
      for (std::size_t i = 0; i < order_.size(); ++i) {
        if (!chosen_[i] && s_.projects()[order_[i]].cost <= remaining) return;  // not maximal
      }
      visit(chosen_, values_);
      return;
    }
    const std::size_t p = order_[depth];
    const Cost c = s_.projects()[p].cost;
    if (c <= remaining) {
      chosen_[depth] = true;
      for (std::size_t g = 0; g < groups_.size(); ++g) values_[g] += groups_[g].row[p];
      dfs(depth + 1, remaining - c, visit);
      for (std::size_t g = 0; g < groups_.size(); ++g) values_[g] -= groups_[g].row[p];
      chosen_[depth] = false;
    }
    dfs(depth + 1, remaining, visit);
  }

  const BudgetingScenario& s_;
  const std::vector<VoterGroup>& groups_;
  std::vector<std::size_t> order_;
  std::vector<bool> chosen_;
  std::vector<Rational> values_;
};

Rational power(const Rational& base, unsigned long exponent) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  return out;
}

}  // namespace

Rational snw_objective(const BudgetingScenario& s, const std::vector<std::size_t>& bundle,
                       const std::vector<Rational>& best_value) {
  Rational product = 1;
  for (std::size_t j = 0; j < s.num_voters(); ++j) {
    Rational v = best_value.at(j);
    for (auto p : bundle) v += s.weight(j, p);
    product *= v;
  }
  return product;
}

SnwResult run_snw(const BudgetingScenario& s, std::size_t max_projects) {
  require_valid(s);
  if (s.num_projects() > max_projects) {
    throw ModelError("SNW is exhaustive; " + std::to_string(s.num_projects()) + " projects exceed the guard of " +
                     std::to_string(max_projects));
  }
  const auto groups = group_identical(s);
  const auto ranks = s.tie_ranks();
  std::vector<std::size_t> order(s.num_projects());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ranks[a] < ranks[b]; });

  // v*: best value each group can reach in any feasible bundle.
  std::vector<Rational> best(groups.size(), Rational(0));
  {
    MaximalBundles enumerate(s, groups, order);
    enumerate.run([&](const std::vector<bool>&, const std::vector<Rational>& values) {
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (values[g] > best[g]) best[g] = values[g];
      }
    });
  }

  // Enumeration visits bundles in lexicographic order of their sorted id
  // lists, so keeping the first maximizer realizes the tie-break.
  std::optional<Rational> best_objective;
  std::vector<bool> best_chosen;
  MaximalBundles enumerate(s, groups, order);
  enumerate.run([&](const std::vector<bool>& chosen, const std::vector<Rational>& values) {
    Rational product = 1;
    for (std::size_t g = 0; g < groups.size(); ++g) product *= power(best[g] + values[g], groups[g].count);
    if (!best_objective || product > *best_objective) {
      best_objective = product;
      best_chosen = chosen;
    }
  });

  SnwResult result;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (best_chosen[i]) result.selected.push_back(order[i]);
  }
  result.bundle = make_bundle(s, result.selected);
  result.objective = *best_objective;
  for (std::size_t j = 0; j < s.num_voters(); ++j) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (groups[g].row == s.ballots()[j]) {
        result.best_value.push_back(best[g]);
        break;
      }
    }
  }
  return result;
}

RuleOutcome run_wm(const std::vector<Project>& projects,
                   const std::vector<std::vector<std::string>>& approvals, Cost budget) {
  std::vector<std::size_t> counts(projects.size(), 0);
  for (const auto& ballot : approvals) {
    for (const auto& id : ballot) {
      auto it = std::find_if(projects.begin(), projects.end(), [&](const Project& p) { return p.id == id; });
      if (it == projects.end()) throw ModelError("approval of unknown project '" + id + "'");
      ++counts[static_cast<std::size_t>(it - projects.begin())];
    }
  }
  std::vector<std::size_t> order(projects.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (counts[a] != counts[b]) return counts[a] > counts[b];
    return id_less(projects[a].id, projects[b].id);
  });

  RuleOutcome out;
  Cost remaining = budget;
  for (auto p : order) {
    TraceEvent ev;
    ev.project = p;
    ev.priority = Rational(static_cast<unsigned long>(counts[p]));
    if (projects[p].cost <= remaining) {
      remaining -= projects[p].cost;
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
