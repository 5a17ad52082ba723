#include "cumpb/fixtures.hpp"

#include <algorithm>

namespace cumpb {

namespace {

const Rational kEps(1, 100);

Rational q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Adds `count` voters with identical ballots given as (project id, weight).
void add_voters(BudgetingScenario& s, std::size_t count, const std::vector<std::pair<std::string, Rational>>& ballot) {
  CumulativeBallot b;
  for (const auto& [id, w] : ballot) {
    if (w != 0) b.weights[id] += w;
  }
  for (std::size_t i = 0; i < count; ++i) s.add_voter(b);
}

std::vector<Project> unit_projects(const std::vector<std::pair<std::string, Cost>>& spec) {
  std::vector<Project> out;
  for (const auto& [id, cost] : spec) out.push_back({id, cost});
  return out;
}

Fixture gs_split() {
  Fixture f;
  f.name = "gs_split";
  f.description = "GS fails splitting monotonicity: splitting p1 hands the budget to p2";
  f.scenario = BudgetingScenario(unit_projects({{"p1", 2}, {"p2", 2}}), 2);
  add_voters(f.scenario, 1, {{"p1", q(6, 10)}, {"p2", q(4, 10)}});
  SplitSpec spec{"p1", {{"pa", 1}, {"pb", 1}}, {{q(3, 10), q(3, 10)}}};
  f.transformation = make_split(f.scenario, spec);
  f.expectations = {{Rule::GS, {"p1"}, std::vector<std::string>{"p2"}}};
  return f;
}

Fixture ewtc_split() {
  Fixture f;
  f.name = "ewtc_split";
  f.description = "EwTC fails splitting monotonicity";
  f.scenario = BudgetingScenario(unit_projects({{"p1", 199}, {"p2", 102}, {"p3", 200}}), 200);
  add_voters(f.scenario, 140, {{"p1", q(9, 14)}, {"p2", q(5, 14)}});
  add_voters(f.scenario, 60, {{"p1", q(1, 6) - kEps}, {"p2", kEps}, {"p3", q(5, 6)}});
  SplitSpec spec{"p1", {{"pa", 100}, {"pb", 99}}, {}};
  for (std::size_t j = 0; j < 140; ++j) spec.voter_weights.push_back({0, q(9, 14)});
  for (std::size_t j = 0; j < 60; ++j) spec.voter_weights.push_back({q(1, 6) - kEps, 0});
  f.transformation = make_split(f.scenario, spec);
  f.expectations = {{Rule::EwTC, {"p1"}, std::vector<std::string>{"p2"}}};
  return f;
}

// With c(p2) = 151 the 150 supporters of p2 pool only 150, so p2 is never
// eligible by transfers and the split funds both parts. c(p2) = 150 (ties
// broken towards p1) shows the intended failure.
Fixture mtc_split(bool equal_costs) {
  Fixture f;
  f.name = equal_costs ? "mtc_split_equal" : "mtc_split";
  f.description = equal_costs ? "MTC fails splitting monotonicity (c(p2) = 150)"
                              : "MTC splitting instance with c(p2) = 151: p2 never eligible by transfers";
  f.scenario = BudgetingScenario(unit_projects({{"p1", 150}, {"p2", equal_costs ? 150 : 151}}), 200);
  add_voters(f.scenario, 150, {{"p1", q(1, 3)}, {"p2", q(2, 3)}});
  add_voters(f.scenario, 50, {{"p1", q(1)}});
  SplitSpec spec{"p1", {{"pa", 51}, {"pb", 99}}, {}};
  for (std::size_t j = 0; j < 150; ++j) spec.voter_weights.push_back({0, q(1, 3)});
  for (std::size_t j = 0; j < 50; ++j) spec.voter_weights.push_back({q(1), 0});
  f.transformation = make_split(f.scenario, spec);
  f.expectations = {{Rule::MTC, {"p1"},
                     equal_costs ? std::vector<std::string>{"p2"} : std::vector<std::string>{"pa", "pb"}}};
  return f;
}

Fixture mt_merge() {
  Fixture f;
  f.name = "mt_merge";
  f.description = "MT and MTC fail merging monotonicity: merging p and r leaves x unfunded";
  f.scenario = BudgetingScenario(unit_projects({{"p", 10}, {"q", 10}, {"r", 10}, {"s", 10}, {"z", 10}}), 20);
  add_voters(f.scenario, 10, {{"p", q(1, 2) + kEps}, {"q", q(1, 2) - kEps}});
  add_voters(f.scenario, 9, {{"r", q(1, 2) + kEps}, {"s", q(1, 2) - kEps}});
  add_voters(f.scenario, 1, {{"z", q(1)}});
  f.transformation = make_merge(f.scenario, {"p", "r"}, "x");
  f.expectations = {{Rule::MT, {"p", "r"}, std::vector<std::string>{"q", "s"}},
                    {Rule::MTC, {"p", "r"}, std::vector<std::string>{"q", "s"}}};
  return f;
}

Fixture ewt_merge(bool cost_variant) {
  Fixture f;
  f.name = cost_variant ? "ewtc_merge" : "ewt_merge";
  // x is eliminated after the merge; r gets funded and reverse eliminations
  // then re-admit q.
  f.description = cost_variant ? "EwTC fails merging monotonicity (c(q) = 30)"
                               : "EwT fails merging monotonicity (c(q) = 35)";
  f.scenario = BudgetingScenario(
      unit_projects({{"p", 30}, {"q", cost_variant ? 30 : 35}, {"r", 40}, {"s", 30}, {"z", 30}}), 95);
  add_voters(f.scenario, 30, {{"p", q(1)}});
  add_voters(f.scenario, 1, {{"p", 1 - kEps}, {"q", kEps}});
  add_voters(f.scenario, 15, {{"q", 1 - kEps}, {"r", kEps}});
  add_voters(f.scenario, 40, {{"r", q(1, 2)}, {"s", q(1, 2)}});
  add_voters(f.scenario, 9, {{"z", q(1)}});
  f.transformation = make_merge(f.scenario, {"p", "s"}, "x");
  f.expectations = {{cost_variant ? Rule::EwTC : Rule::EwT, {"p", "q", "s"}, std::vector<std::string>{"q", "r"}}};
  return f;
}

Fixture gsc_merge() {
  Fixture f;
  f.name = "gsc_merge";
  f.description = "GSC fails merging monotonicity";
  f.scenario = BudgetingScenario(unit_projects({{"p1", 5}, {"p2", 10}, {"p3", 5}}), 10);
  add_voters(f.scenario, 10, {{"p1", q(35, 100)}, {"p2", q(6, 10)}, {"p3", q(5, 100)}});
  f.transformation = make_merge(f.scenario, {"p1", "p3"}, "x");
  f.expectations = {{Rule::GSC, {"p1", "p3"}, std::vector<std::string>{"p2"}}};
  return f;
}

Fixture ewt_support() {
  Fixture f;
  f.name = "ewt_support";
  f.description = "EwT and EwTC fail support monotonicity: moving 2 eps from q to r costs r its funding";
  f.scenario = BudgetingScenario(unit_projects({{"p", 10}, {"q", 10}, {"r", 10}}), 12);
  add_voters(f.scenario, 8, {{"p", q(1, 2) - kEps}, {"q", q(1, 4)}, {"r", q(1, 4) + kEps}});
  add_voters(f.scenario, 2, {{"q", q(1)}});
  add_voters(f.scenario, 2, {{"r", q(1)}});
  std::vector<VoterShift> shifts;
  for (std::size_t j = 0; j < 8; ++j) shifts.push_back({j, {{"q", 2 * kEps}}});
  f.transformation = make_shift(f.scenario, "r", shifts);
  f.expectations = {{Rule::EwT, {"r"}, std::vector<std::string>{"p"}},
                    {Rule::EwTC, {"r"}, std::vector<std::string>{"p"}}};
  return f;
}

Fixture mt_support() {
  Fixture f;
  f.name = "mt_support";
  // After the shift p and r tie exactly on excess (-3/2 - 10 eps); the tie goes
  // to p, so q stays funded. The failure needs the tie broken towards r.
  f.description = "MT support instance: after the shift p and r tie, q stays funded under id tie-breaking";
  f.scenario = BudgetingScenario(unit_projects({{"p", 4}, {"q", 4}, {"r", 8}}), 10);
  add_voters(f.scenario, 10, {{"p", q(1, 4) + kEps}, {"q", q(1, 10)}, {"r", q(65, 100) - kEps}});
  std::vector<VoterShift> shifts;
  for (std::size_t j = 0; j < 10; ++j) shifts.push_back({j, {{"p", 2 * kEps}}});
  f.transformation = make_shift(f.scenario, "q", shifts);
  f.expectations = {{Rule::MT, {"p", "q"}, std::vector<std::string>{"p", "q"}}};
  return f;
}

Fixture gs_support() {
  Fixture f;
  f.name = "gs_support";
  f.description = "GS fails support monotonicity: moving 2 eps from p to q costs q its funding";
  f.scenario = BudgetingScenario(unit_projects({{"p", 4}, {"q", 4}, {"r", 8}}), 10);
  add_voters(f.scenario, 10, {{"p", q(1, 3) + 2 * kEps}, {"q", q(1, 3) - 3 * kEps}, {"r", q(1, 3) + kEps}});
  std::vector<VoterShift> shifts;
  for (std::size_t j = 0; j < 10; ++j) shifts.push_back({j, {{"p", 2 * kEps}}});
  f.transformation = make_shift(f.scenario, "q", shifts);
  f.expectations = {{Rule::GS, {"p", "q"}, std::vector<std::string>{"r"}}};
  return f;
}

Fixture weak_pr() {
  Fixture f;
  f.name = "weak_pr";
  f.description = "GS fails Weak-PR: v1 alone deserves a but GS funds only b";
  f.scenario = BudgetingScenario(unit_projects({{"a", 1}, {"b", 3}}), 3);
  add_voters(f.scenario, 1, {{"a", q(1)}});
  add_voters(f.scenario, 2, {{"b", q(1)}});
  f.expectations = {{Rule::GS, {"b"}, std::nullopt}};
  return f;
}

Fixture pr() {
  Fixture f;
  f.name = "pr";
  f.description = "GSC fails PR ({a, b} deserved by v1); EwT and EwTC fund both";
  f.scenario = BudgetingScenario(unit_projects({{"a", 1}, {"b", 1}, {"c", 3}}), 4);
  add_voters(f.scenario, 1, {{"a", 1 - kEps}, {"b", kEps}});
  add_voters(f.scenario, 1, {{"c", q(1)}});
  f.expectations = {{Rule::GSC, {"a", "c"}, std::nullopt},
                    {Rule::EwT, {"a", "b"}, std::nullopt},
                    {Rule::EwTC, {"a", "b"}, std::nullopt}};
  return f;
}

Fixture strong_pr() {
  Fixture f;
  f.name = "strong_pr";
  f.description = "EwT and EwTC fail Strong-PR (only q funded); MT and MTC fund p1";
  f.scenario = BudgetingScenario(unit_projects({{"p1", 5}, {"p2", 7}, {"q", 6}}), 10);
  add_voters(f.scenario, 1, {{"p1", kEps}, {"p2", 1 - kEps}});
  add_voters(f.scenario, 1, {{"q", q(1)}});
  f.expectations = {{Rule::EwT, {"q"}, std::nullopt},
                    {Rule::EwTC, {"q"}, std::nullopt},
                    {Rule::MT, {"p1"}, std::nullopt},
                    {Rule::MTC, {"p1"}, std::nullopt}};
  return f;
}

std::vector<std::string> range_ids(int from, int to) {
  std::vector<std::string> out;
  for (int i = from; i <= to; ++i) out.push_back("p" + std::to_string(i));
  return out;
}

Fixture example_fixture() {
  Fixture f;
  f.name = "example_split_votes";
  f.description = "60/40 electorate spreading votes over ten projects each";
  f.scenario = example_split_votes();
  auto majority = range_ids(1, 10);
  f.expectations = {{Rule::GS, majority, std::nullopt},
                    {Rule::GSC, majority, std::nullopt},
                    {Rule::GE, majority, std::nullopt}};
  return f;
}

}  // namespace

Rational fixture_epsilon() { return kEps; }

BudgetingScenario example_split_votes() {
  std::vector<Project> projects;
  for (int i = 1; i <= 20; ++i) projects.push_back({"p" + std::to_string(i), 1});
  BudgetingScenario s(std::move(projects), 10);
  std::vector<std::pair<std::string, Rational>> majority, minority;
  for (int i = 1; i <= 10; ++i) majority.emplace_back("p" + std::to_string(i), q(1, 10));
  for (int i = 11; i <= 20; ++i) minority.emplace_back("p" + std::to_string(i), q(1, 10));
  add_voters(s, 60, majority);
  add_voters(s, 40, minority);
  return s;
}

std::vector<Fixture> proof_fixtures() {
  return {example_fixture(), gs_split(),         ewtc_split(),   mtc_split(false), mtc_split(true),
          mt_merge(),        ewt_merge(false),   ewt_merge(true), gsc_merge(),     ewt_support(),
          mt_support(),      gs_support(),       weak_pr(),      pr(),             strong_pr()};
}

const Fixture& find_fixture(const std::string& name) {
  static const std::vector<Fixture> all = proof_fixtures();
  for (const auto& f : all) {
    if (f.name == name) return f;
  }
  throw ModelError("unknown fixture '" + name + "'");
}

std::vector<FixtureResult> run_fixture(const Fixture& f) {
  std::vector<FixtureResult> out;
  for (const auto& e : f.expectations) {
    FixtureResult r;
    r.fixture = f.name;
    r.rule = e.rule;
    r.before = run_rule_bundle(e.rule, f.scenario);
    const Bundle want_before = make_bundle(f.scenario, [&] {
      std::vector<std::size_t> idx;
      for (const auto& id : e.before) idx.push_back(f.scenario.index_of(id));
      return idx;
    }());
    if (r.before != want_before) {
      r.ok = false;
      r.message += "before: expected " + to_string(want_before) + " got " + to_string(r.before) + "; ";
    }
    if (e.after && f.transformation) {
      const auto& s2 = f.transformation->result;
      r.after = run_rule_bundle(e.rule, s2);
      std::vector<std::size_t> idx;
      for (const auto& id : *e.after) idx.push_back(s2.index_of(id));
      const Bundle want_after = make_bundle(s2, idx);
      if (*r.after != want_after) {
        r.ok = false;
        r.message += "after: expected " + to_string(want_after) + " got " + to_string(*r.after) + "; ";
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace cumpb
