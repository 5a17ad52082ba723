#include "cumpb/axioms.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

namespace cumpb {

namespace {

std::string ids_of(const BudgetingScenario& s, const std::vector<std::size_t>& indices) {
  std::vector<std::size_t> copy = indices;
  return to_string(make_bundle(s, copy));
}

bool funded(const Bundle& b, const std::string& id) { return b.contains(id); }

BudgetingScenario rebuild(std::vector<Project> projects, Cost budget, const std::vector<std::vector<Rational>>& rows,
                          const std::vector<std::string>& voter_ids) {
  BudgetingScenario out(std::move(projects), budget);
  for (std::size_t j = 0; j < rows.size(); ++j) out.add_voter_row(rows[j], voter_ids[j]);
  return out;
}

}  // namespace

RuleFn rule_fn(Rule rule) {
  return [rule](const BudgetingScenario& s) { return run_rule_bundle(rule, s); };
}

BudgetingScenario split_project(const BudgetingScenario& s, const SplitSpec& spec) {
  const std::size_t t = s.index_of(spec.target);
  if (spec.parts.empty()) throw PreconditionError("split into zero parts");
  Cost total = 0;
  std::set<std::string> ids;
  for (const auto& part : spec.parts) {
    if (part.cost < 1) throw PreconditionError("split part " + part.id + " has cost < 1");
    if (!ids.insert(part.id).second) throw PreconditionError("duplicate split part id " + part.id);
    if (part.id != spec.target && s.has_project(part.id)) {
      throw PreconditionError("split part id " + part.id + " already exists");
    }
    total += part.cost;
  }
  if (total != s.projects()[t].cost) throw PreconditionError("split part costs do not sum to the original cost");
  if (spec.voter_weights.size() != s.num_voters()) throw PreconditionError("split needs one weight row per voter");

  std::vector<Project> projects;
  for (std::size_t p = 0; p < s.num_projects(); ++p) {
    if (p == t) {
      for (const auto& part : spec.parts) projects.push_back({part.id, part.cost});
    } else {
      projects.push_back(s.projects()[p]);
    }
  }
  std::vector<std::vector<Rational>> rows;
  for (std::size_t j = 0; j < s.num_voters(); ++j) {
    const auto& w = spec.voter_weights[j];
    if (w.size() != spec.parts.size()) throw PreconditionError("split weight row has wrong length");
    Rational sum = 0;
    for (const auto& x : w) {
      if (x < 0) throw PreconditionError("negative split weight");
      sum += x;
    }
    if (sum != s.weight(j, t)) {
      throw PreconditionError("split weights of voter " + s.voter_ids()[j] + " do not sum to her weight on " +
                              spec.target);
    }
    std::vector<Rational> row;
    for (std::size_t p = 0; p < s.num_projects(); ++p) {
      if (p == t) {
        row.insert(row.end(), w.begin(), w.end());
      } else {
        row.push_back(s.weight(j, p));
      }
    }
    rows.push_back(std::move(row));
  }
  return rebuild(std::move(projects), s.budget(), rows, s.voter_ids());
}

BudgetingScenario merge_projects(const BudgetingScenario& s, const std::vector<std::string>& ids,
                                 const std::string& new_id) {
  if (ids.empty()) throw PreconditionError("merge of an empty project set");
  std::vector<bool> merged(s.num_projects(), false);
  for (const auto& id : ids) {
    const auto p = s.index_of(id);
    if (merged[p]) throw PreconditionError("project " + id + " listed twice in merge");
    merged[p] = true;
  }
  for (std::size_t p = 0; p < s.num_projects(); ++p) {
    if (!merged[p] && s.projects()[p].id == new_id) throw PreconditionError("merged id " + new_id + " already exists");
  }
  const auto first = static_cast<std::size_t>(std::find(merged.begin(), merged.end(), true) - merged.begin());

  Cost cost = 0;
  for (std::size_t p = 0; p < s.num_projects(); ++p) {
    if (merged[p]) cost += s.projects()[p].cost;
  }
  std::vector<Project> projects;
  for (std::size_t p = 0; p < s.num_projects(); ++p) {
    if (p == first) projects.push_back({new_id, cost});
    if (!merged[p]) projects.push_back(s.projects()[p]);
  }
  std::vector<std::vector<Rational>> rows;
  for (std::size_t j = 0; j < s.num_voters(); ++j) {
    Rational combined = 0;
    for (std::size_t p = 0; p < s.num_projects(); ++p) {
      if (merged[p]) combined += s.weight(j, p);
    }
    std::vector<Rational> row;
    for (std::size_t p = 0; p < s.num_projects(); ++p) {
      if (p == first) row.push_back(combined);
      if (!merged[p]) row.push_back(s.weight(j, p));
    }
    rows.push_back(std::move(row));
  }
  return rebuild(std::move(projects), s.budget(), rows, s.voter_ids());
}

BudgetingScenario shift_support(const BudgetingScenario& s, std::size_t voter, const std::string& target,
                                const std::map<std::string, Rational>& take) {
  if (voter >= s.num_voters()) throw PreconditionError("unknown voter index " + std::to_string(voter));
  const std::size_t t = s.index_of(target);
  BudgetingScenario out = s;
  Rational total = 0;
  for (const auto& [id, amount] : take) {
    const auto p = s.index_of(id);
    if (p == t) throw PreconditionError("cannot take support from the target itself");
    if (amount < 0) throw PreconditionError("negative take");
    if (amount > s.weight(voter, p)) throw PreconditionError("take exceeds the weight on " + id);
    out.set_weight(voter, p, s.weight(voter, p) - amount);
    total += amount;
  }
  if (total <= 0) throw PreconditionError("support shift must move a positive amount");
  out.set_weight(voter, t, s.weight(voter, t) + total);
  return out;
}

BudgetingScenario shift_support(const BudgetingScenario& s, const std::string& target,
                                const std::vector<VoterShift>& shifts) {
  BudgetingScenario out = s;
  for (const auto& shift : shifts) out = shift_support(out, shift.voter, target, shift.take);
  return out;
}

std::string to_string(MonotonicityKind kind) {
  switch (kind) {
    case MonotonicityKind::Splitting: return "splitting";
    case MonotonicityKind::Merging: return "merging";
    case MonotonicityKind::Support: return "support";
  }
  return "?";
}

Transformation make_split(const BudgetingScenario& s, const SplitSpec& spec) {
  Transformation t;
  t.kind = MonotonicityKind::Splitting;
  t.result = split_project(s, spec);
  t.premise = {spec.target};
  for (const auto& part : spec.parts) t.watch.push_back(part.id);
  return t;
}

Transformation make_merge(const BudgetingScenario& s, const std::vector<std::string>& ids, const std::string& new_id) {
  Transformation t;
  t.kind = MonotonicityKind::Merging;
  t.result = merge_projects(s, ids, new_id);
  t.premise = ids;
  t.watch = {new_id};
  return t;
}

Transformation make_shift(const BudgetingScenario& s, const std::string& target, const std::vector<VoterShift>& shifts) {
  Transformation t;
  t.kind = MonotonicityKind::Support;
  t.result = shift_support(s, target, shifts);
  t.premise = {target};
  t.watch = {target};
  return t;
}

MonotonicityVerdict check_monotonicity(const RuleFn& rule, const BudgetingScenario& s, const Transformation& tr) {
  MonotonicityVerdict v;
  v.before = rule(s);
  for (const auto& id : tr.premise) {
    if (!funded(v.before, id)) {
      throw PreconditionError(to_string(tr.kind) + " monotonicity needs " + id + " funded, got " + to_string(v.before));
    }
  }
  v.after = rule(tr.result);
  v.holds = std::any_of(tr.watch.begin(), tr.watch.end(), [&](const auto& id) { return funded(v.after, id); });
  return v;
}

Cost CohesiveGroup::project_cost(const BudgetingScenario& s) const {
  Cost c = 0;
  for (auto p : projects) c += s.projects()[p].cost;
  return c;
}

std::vector<CohesiveGroup> enumerate_cohesive_groups(const BudgetingScenario& s) {
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> by_support;
  for (std::size_t j = 0; j < s.num_voters(); ++j) {
    std::vector<std::size_t> support_set;
    for (std::size_t p = 0; p < s.num_projects(); ++p) {
      if (s.weight(j, p) > 0) support_set.push_back(p);
    }
    by_support[support_set].push_back(j);
  }
  std::vector<CohesiveGroup> out;
  const auto n = static_cast<Cost>(s.num_voters());
  for (const auto& [projects, voters] : by_support) {
    if (projects.empty()) continue;
    // |V'| >= l * n / L  <=>  l <= |V'| * L / n
    const Cost max_level = std::min<Cost>(static_cast<Cost>(voters.size()) * s.budget() / n, s.budget());
    for (Cost level = 1; level <= max_level; ++level) out.push_back({voters, projects, level});
  }
  return out;
}

std::string describe(const BudgetingScenario& s, const PrViolation& v) {
  std::ostringstream out;
  out << "voters {";
  for (std::size_t i = 0; i < v.group.voters.size(); ++i) out << (i ? ", " : "") << s.voter_ids()[v.group.voters[i]];
  out << "} P'=" << ids_of(s, v.group.projects) << " l=" << v.group.level << " unfunded=" << ids_of(s, v.unfunded);
  return out.str();
}

namespace {

// One entry per voter group: the highest level at which it is violated.
std::vector<PrViolation> collect(const BudgetingScenario& s, const Bundle& outcome, bool strong) {
  std::vector<PrViolation> out;
  auto groups = enumerate_cohesive_groups(s);
  std::reverse(groups.begin(), groups.end());  // highest level first within each group
  std::set<std::vector<std::size_t>> reported;
  for (const auto& g : groups) {
    if (reported.count(g.voters)) continue;
    const Cost group_cost = g.project_cost(s);
    if (!strong && group_cost > g.level) continue;
    Cost funded_cost = 0;
    std::vector<std::size_t> unfunded;
    for (auto p : g.projects) {
      if (outcome.contains(s.projects()[p].id)) {
        funded_cost += s.projects()[p].cost;
      } else {
        unfunded.push_back(p);
      }
    }
    std::vector<std::size_t> bad;
    for (auto p : unfunded) {
      if (!strong || s.projects()[p].cost + funded_cost <= g.level) bad.push_back(p);
    }
    if (!bad.empty()) {
      out.push_back({g, bad});
      reported.insert(g.voters);
    }
  }
  return out;
}

}  // namespace

std::vector<PrViolation> check_pr(const BudgetingScenario& s, const Bundle& outcome) { return collect(s, outcome, false); }
std::vector<PrViolation> check_pr(const RuleFn& rule, const BudgetingScenario& s) { return check_pr(s, rule(s)); }

std::vector<PrViolation> check_strong_pr(const BudgetingScenario& s, const Bundle& outcome) {
  return collect(s, outcome, true);
}
std::vector<PrViolation> check_strong_pr(const RuleFn& rule, const BudgetingScenario& s) {
  return check_strong_pr(s, rule(s));
}

WeakPrVerdict check_weak_pr_constructive(const RuleFn& rule, const BudgetingScenario& s,
                                         const std::vector<std::size_t>& voters,
                                         const std::vector<std::string>& projects, Cost level) {
  if (level < 1 || level > s.budget()) throw PreconditionError("level must lie in [1, L]");
  std::set<std::size_t> unique_voters(voters.begin(), voters.end());
  if (unique_voters.size() != voters.size()) throw PreconditionError("duplicate voter in V'");
  for (auto j : voters) {
    if (j >= s.num_voters()) throw PreconditionError("unknown voter index");
  }
  if (static_cast<Cost>(voters.size()) * s.budget() < level * static_cast<Cost>(s.num_voters())) {
    throw PreconditionError("|V'| < l * n / L");
  }
  std::vector<std::size_t> indices;
  Cost cost = 0;
  for (const auto& id : projects) {
    indices.push_back(s.index_of(id));
    cost += s.projects()[indices.back()].cost;
  }
  if (cost > level) throw PreconditionError("c(P') > l");

  WeakPrVerdict verdict;
  if (projects.empty()) {
    verdict.outcome = rule(s);
    return verdict;
  }
  BudgetingScenario rewritten = s;
  for (auto j : voters) {
    for (std::size_t p = 0; p < s.num_projects(); ++p) rewritten.set_weight(j, p, 0);
    for (auto p : indices) rewritten.set_weight(j, p, ratio(s.projects()[p].cost, cost));
  }
  verdict.outcome = rule(rewritten);
  verdict.holds = std::all_of(projects.begin(), projects.end(), [&](const auto& id) { return verdict.outcome.contains(id); });
  return verdict;
}

namespace {

template <class T>
T uniform(std::mt19937_64& rng, T lo, T hi) {
  return std::uniform_int_distribution<T>(lo, hi)(rng);
}

std::vector<std::size_t> random_subset(std::mt19937_64& rng, std::size_t m, std::size_t size) {
  std::vector<std::size_t> all(m);
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(size);
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<Rational> random_row(std::mt19937_64& rng, std::size_t m, const std::vector<std::size_t>& support_set) {
  std::vector<Rational> row(m, Rational(0));
  unsigned long total = 0;
  std::vector<unsigned long> raw;
  for (std::size_t i = 0; i < support_set.size(); ++i) {
    raw.push_back(uniform<unsigned long>(rng, 1, 9));
    total += raw.back();
  }
  for (std::size_t i = 0; i < support_set.size(); ++i) {
    row[support_set[i]] = Rational(raw[i], total);
    row[support_set[i]].canonicalize();
  }
  return row;
}

}  // namespace

BudgetingScenario random_instance(std::mt19937_64& rng, const RandomInstanceParams& params) {
  const auto n = uniform<std::size_t>(rng, 2, params.max_voters);
  const auto m = uniform<std::size_t>(rng, 2, params.max_projects);
  const Cost budget = uniform<Cost>(rng, std::min<Cost>(5, params.max_budget), params.max_budget);
  std::vector<Project> projects;
  for (std::size_t p = 0; p < m; ++p) {
    projects.push_back({"p" + std::to_string(p + 1), uniform<Cost>(rng, 1, params.max_cost)});
  }
  BudgetingScenario s(std::move(projects), budget);

  std::size_t assigned = 0;
  const auto groups = uniform<std::size_t>(rng, 1, params.max_planted_groups);
  for (std::size_t g = 0; g < groups && assigned < n; ++g) {
    const auto set = random_subset(rng, m, uniform<std::size_t>(rng, 1, std::min<std::size_t>(3, m)));
    const auto size = std::min(n - assigned, uniform<std::size_t>(rng, 1, std::max<std::size_t>(1, n / 2)));
    for (std::size_t i = 0; i < size; ++i) s.add_voter_row(random_row(rng, m, set));
    assigned += size;
  }
  for (; assigned < n; ++assigned) {
    const auto set = random_subset(rng, m, uniform<std::size_t>(rng, 1, std::min<std::size_t>(4, m)));
    s.add_voter_row(random_row(rng, m, set));
  }
  return s;
}

std::string to_string(AxiomKind kind) {
  switch (kind) {
    case AxiomKind::Splitting: return "splitting";
    case AxiomKind::Merging: return "merging";
    case AxiomKind::Support: return "support";
    case AxiomKind::WeakPr: return "weak-pr";
    case AxiomKind::Pr: return "pr";
    case AxiomKind::StrongPr: return "strong-pr";
  }
  return "?";
}

AxiomKind parse_axiom(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "splitting") return AxiomKind::Splitting;
  if (lower == "merging") return AxiomKind::Merging;
  if (lower == "support") return AxiomKind::Support;
  if (lower == "weak-pr") return AxiomKind::WeakPr;
  if (lower == "pr") return AxiomKind::Pr;
  if (lower == "strong-pr") return AxiomKind::StrongPr;
  throw ModelError("unknown axiom '" + std::string(name) + "'");
}

namespace {

std::string fresh_id(const BudgetingScenario& s, const std::string& base) {
  std::string id = base;
  for (int k = 2; s.has_project(id); ++k) id = base + "_" + std::to_string(k);
  return id;
}

AxiomCheck monotonicity_check(const RuleFn& rule, const BudgetingScenario& s, const Transformation& tr) {
  AxiomCheck out;
  auto v = check_monotonicity(rule, s, tr);
  out.holds = v.holds;
  out.detail = to_string(tr.kind) + ": before " + to_string(v.before) + " after " + to_string(v.after);
  return out;
}

AxiomCheck report_pr(const BudgetingScenario& s, const std::vector<PrViolation>& violations, bool any_group) {
  AxiomCheck out;
  out.applicable = any_group;
  out.holds = violations.empty();
  for (const auto& v : violations) out.detail += (out.detail.empty() ? "" : "\n") + describe(s, v);
  return out;
}

}  // namespace

AxiomCheck check_axiom(AxiomKind kind, Rule rule, const BudgetingScenario& s, std::mt19937_64& rng) {
  const RuleFn fn = rule_fn(rule);
  const auto groups = enumerate_cohesive_groups(s);
  switch (kind) {
    case AxiomKind::Pr: {
      const bool any = std::any_of(groups.begin(), groups.end(), [&](const auto& g) { return g.project_cost(s) <= g.level; });
      return report_pr(s, check_pr(fn, s), any);
    }
    case AxiomKind::StrongPr: return report_pr(s, check_strong_pr(fn, s), !groups.empty());
    case AxiomKind::WeakPr: {
      const auto n = static_cast<Cost>(s.num_voters());
      const Cost level = uniform<Cost>(rng, 1, s.budget());
      const auto needed = static_cast<std::size_t>((level * n + s.budget() - 1) / s.budget());
      std::vector<std::size_t> order(s.num_projects());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<std::string> projects;
      Cost cost = 0;
      for (auto p : order) {
        if (cost + s.projects()[p].cost <= level) {
          cost += s.projects()[p].cost;
          projects.push_back(s.projects()[p].id);
        }
      }
      if (projects.empty() || needed > s.num_voters()) return {false, true, "no witness group"};
      const auto voters = random_subset(rng, s.num_voters(), needed);
      auto v = check_weak_pr_constructive(fn, s, voters, projects, level);
      std::string detail = "l=" + std::to_string(level) + " |V'|=" + std::to_string(voters.size()) + " P'={";
      for (std::size_t i = 0; i < projects.size(); ++i) detail += (i ? ", " : "") + projects[i];
      return {true, v.holds, detail + "} outcome " + to_string(v.outcome)};
    }
    case AxiomKind::Splitting: {
      const Bundle b = fn(s);
      std::vector<std::size_t> candidates;
      for (const auto& id : b.ids) {
        if (s.projects()[s.index_of(id)].cost >= 2) candidates.push_back(s.index_of(id));
      }
      if (candidates.empty()) return {false, true, "no splittable funded project"};
      const auto t = candidates[uniform<std::size_t>(rng, 0, candidates.size() - 1)];
      const Cost c = s.projects()[t].cost;
      const Cost first = uniform<Cost>(rng, 1, c - 1);
      SplitSpec spec;
      spec.target = s.projects()[t].id;
      spec.parts = {{fresh_id(s, spec.target + "a"), first}, {fresh_id(s, spec.target + "b"), c - first}};
      for (std::size_t j = 0; j < s.num_voters(); ++j) {
        const Rational frac = ratio(uniform<long>(rng, 0, 4), 4);
        Rational a = s.weight(j, t) * frac;
        spec.voter_weights.push_back({a, s.weight(j, t) - a});
      }
      return monotonicity_check(fn, s, make_split(s, spec));
    }
    case AxiomKind::Merging: {
      const Bundle b = fn(s);
      if (b.ids.size() < 2) return {false, true, "fewer than two funded projects"};
      std::vector<std::string> ids = b.ids;
      std::shuffle(ids.begin(), ids.end(), rng);
      ids.resize(uniform<std::size_t>(rng, 2, ids.size()));
      return monotonicity_check(fn, s, make_merge(s, ids, fresh_id(s, "merged")));
    }
    case AxiomKind::Support: {
      const Bundle b = fn(s);
      if (b.ids.empty()) return {false, true, "nothing funded"};
      const auto& target = b.ids[uniform<std::size_t>(rng, 0, b.ids.size() - 1)];
      const auto t = s.index_of(target);
      std::vector<std::size_t> donors;
      for (std::size_t j = 0; j < s.num_voters(); ++j) {
        if (s.weight(j, t) < 1) donors.push_back(j);
      }
      if (donors.empty()) return {false, true, "no voter can shift support"};
      const auto j = donors[uniform<std::size_t>(rng, 0, donors.size() - 1)];
      const Rational frac = ratio(uniform<long>(rng, 1, 4), 4);
      VoterShift shift{j, {}};
      for (std::size_t p = 0; p < s.num_projects(); ++p) {
        if (p != t && s.weight(j, p) > 0) shift.take.emplace(s.projects()[p].id, s.weight(j, p) * frac);
      }
      return monotonicity_check(fn, s, make_shift(s, target, {shift}));
    }
  }
  return {false, true, "unknown axiom"};
}

}  // namespace cumpb
