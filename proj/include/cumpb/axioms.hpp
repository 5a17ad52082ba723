#pragma once

// Scenario transformations and checkers for the monotonicity and proportional
// representation axioms.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cumpb/model.hpp"
#include "cumpb/rules.hpp"

namespace cumpb {

class PreconditionError : public ModelError {
 public:
  using ModelError::ModelError;
};

using RuleFn = std::function<Bundle(const BudgetingScenario&)>;
RuleFn rule_fn(Rule rule);

struct SplitPart {
  std::string id;
  Cost cost = 0;
};

struct SplitSpec {
  std::string target;
  std::vector<SplitPart> parts;
  /// voter_weights[j][k]: voter j's weight on parts[k]; must sum to her weight on target.
  std::vector<std::vector<Rational>> voter_weights;
};

/// Replaces target with the parts (appended at the target's position).
BudgetingScenario split_project(const BudgetingScenario& scenario, const SplitSpec& spec);

/// Replaces `ids` with one project of their summed cost and summed weights.
BudgetingScenario merge_projects(const BudgetingScenario& scenario, const std::vector<std::string>& ids,
                                 const std::string& new_id);

struct VoterShift {
  std::size_t voter = 0;
  std::map<std::string, Rational> take;  // amount taken from each project
};

/// Moves weight from other projects onto target for one voter.
BudgetingScenario shift_support(const BudgetingScenario& scenario, std::size_t voter, const std::string& target,
                                const std::map<std::string, Rational>& take);
/// Applies several single-voter shifts in sequence.
BudgetingScenario shift_support(const BudgetingScenario& scenario, const std::string& target,
                                const std::vector<VoterShift>& shifts);

enum class MonotonicityKind { Splitting, Merging, Support };
std::string to_string(MonotonicityKind kind);

struct Transformation {
  MonotonicityKind kind = MonotonicityKind::Splitting;
  BudgetingScenario result;
  std::vector<std::string> premise;  // must all be funded before
  std::vector<std::string> watch;    // holds iff any of these is funded after
};

Transformation make_split(const BudgetingScenario& scenario, const SplitSpec& spec);
Transformation make_merge(const BudgetingScenario& scenario, const std::vector<std::string>& ids,
                          const std::string& new_id);
Transformation make_shift(const BudgetingScenario& scenario, const std::string& target,
                          const std::vector<VoterShift>& shifts);

struct MonotonicityVerdict {
  bool holds = true;
  Bundle before;
  Bundle after;
};

/// Throws PreconditionError when the premise projects are not funded in rule(s).
MonotonicityVerdict check_monotonicity(const RuleFn& rule, const BudgetingScenario& scenario,
                                       const Transformation& transformation);

struct CohesiveGroup {
  std::vector<std::size_t> voters;
  std::vector<std::size_t> projects;  // exact positive-support set shared by the voters
  Cost level = 0;                     // l with |voters| >= l * n / L

  Cost project_cost(const BudgetingScenario& scenario) const;
};

/// Voters grouped by identical positive-support sets, one entry per admissible level.
std::vector<CohesiveGroup> enumerate_cohesive_groups(const BudgetingScenario& scenario);

struct PrViolation {
  CohesiveGroup group;
  std::vector<std::size_t> unfunded;
};

std::string describe(const BudgetingScenario& scenario, const PrViolation& violation);

/// Groups with c(P') <= l must have P' funded.
std::vector<PrViolation> check_pr(const RuleFn& rule, const BudgetingScenario& scenario);
std::vector<PrViolation> check_pr(const BudgetingScenario& scenario, const Bundle& outcome);

/// Every unfunded p in P' must satisfy c(p) + c(P' cap B) > l.
std::vector<PrViolation> check_strong_pr(const RuleFn& rule, const BudgetingScenario& scenario);
std::vector<PrViolation> check_strong_pr(const BudgetingScenario& scenario, const Bundle& outcome);

struct WeakPrVerdict {
  bool holds = true;
  Bundle outcome;  // rule outcome on the rewritten ballots
};

/// Rewrites each voter in V' to weight c(p)/c(P') on p in P' and checks P' is
/// funded. A sufficient witness for the existential in Weak-PR.
WeakPrVerdict check_weak_pr_constructive(const RuleFn& rule, const BudgetingScenario& scenario,
                                         const std::vector<std::size_t>& voters,
                                         const std::vector<std::string>& projects, Cost level);

struct RandomInstanceParams {
  std::size_t max_voters = 20;
  std::size_t max_projects = 8;
  Cost max_cost = 10;
  Cost max_budget = 20;
  std::size_t max_planted_groups = 3;
};

/// Small random scenario with planted cohesive groups (voters sharing an exact
/// support set). Weights are small-denominator rationals.
BudgetingScenario random_instance(std::mt19937_64& rng, const RandomInstanceParams& params = {});

enum class AxiomKind { Splitting, Merging, Support, WeakPr, Pr, StrongPr };
std::string to_string(AxiomKind kind);
AxiomKind parse_axiom(std::string_view name);

struct AxiomCheck {
  bool applicable = true;
  bool holds = true;
  std::string detail;
};

/// Checks one axiom on one scenario. For the monotonicity axioms and Weak-PR a
/// transformation or witness group is drawn from `rng`; not applicable when the
/// scenario admits none.
AxiomCheck check_axiom(AxiomKind kind, Rule rule, const BudgetingScenario& scenario, std::mt19937_64& rng);

}  // namespace cumpb
