#include <doctest.h>

#include <random>

#include "cumpb/axioms.hpp"
#include "cumpb/fixtures.hpp"

using namespace cumpb;

namespace {

Rational q(long n, long d = 1) { return ratio(n, d); }

std::vector<std::string> ids(std::initializer_list<const char*> l) { return {l.begin(), l.end()}; }

}  // namespace

TEST_CASE("split_project") {
  const auto& f = find_fixture("gs_split");
  const auto& s = f.scenario;
  SUBCASE("GS proof split is valid and keeps ballots summing to 1") {
    const auto& after = f.transformation->result;
    CHECK(validate_scenario(after).ok());
    CHECK(after.has_project("pa"));
    CHECK_FALSE(after.has_project("p1"));
    CHECK(after.projects()[after.index_of("pa")].cost == 1);
  }
  SUBCASE("one part is the identity up to renaming") {
    SplitSpec spec{"p1", {{"p1", 2}}, {}};
    for (std::size_t j = 0; j < s.num_voters(); ++j) spec.voter_weights.push_back({s.weight(j, 0)});
    CHECK(split_project(s, spec) == s);
  }
  SUBCASE("part costs must add up") {
    SplitSpec spec{"p1", {{"x", 1}, {"y", 2}}, {}};
    for (std::size_t j = 0; j < s.num_voters(); ++j) spec.voter_weights.push_back({s.weight(j, 0), q(0)});
    CHECK_THROWS_AS(split_project(s, spec), ModelError);
  }
  SUBCASE("voter weights must add up") {
    SplitSpec spec{"p1", {{"x", 1}, {"y", 1}}, {}};
    for (std::size_t j = 0; j < s.num_voters(); ++j) spec.voter_weights.push_back({q(0), q(0)});
    if (s.weight(0, 0) != 0) CHECK_THROWS_AS(split_project(s, spec), ModelError);
  }
}

TEST_CASE("merge_projects") {
  const auto& f = find_fixture("mt_merge");
  const auto& after = f.transformation->result;
  CHECK(after.projects()[after.index_of("x")].cost == 20);
  CHECK_FALSE(after.has_project("p"));
  for (std::size_t j = 0; j < after.num_voters(); ++j) CHECK(after.ballot(j).total() == 1);
  CHECK_THROWS_AS(merge_projects(f.scenario, {}, "x"), ModelError);

  // merging one project renames it
  const auto renamed = merge_projects(f.scenario, {"z"}, "zz");
  CHECK(renamed.has_project("zz"));
  CHECK(renamed.num_projects() == f.scenario.num_projects());
}

TEST_CASE("split then merge is the identity up to renaming") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const auto s = random_instance(rng);
    std::size_t target = 0;
    while (target < s.num_projects() && s.projects()[target].cost < 2) ++target;
    if (target == s.num_projects()) continue;
    const auto& p = s.projects()[target];
    SplitSpec spec{p.id, {{"sa", 1}, {"sb", p.cost - 1}}, {}};
    for (std::size_t j = 0; j < s.num_voters(); ++j) {
      const Rational a = s.weight(j, target) / 3;
      spec.voter_weights.push_back({a, s.weight(j, target) - a});
    }
    const auto merged = merge_projects(split_project(s, spec), {"sa", "sb"}, p.id);
    CHECK(merged == s);
  }
}

TEST_CASE("shift_support") {
  const auto& f = find_fixture("mt_support");
  const auto& after = f.transformation->result;
  const Rational eps = fixture_epsilon();
  CHECK(after.weight(0, after.index_of("p")) == q(1, 4) - eps);
  CHECK(after.weight(0, after.index_of("q")) == q(1, 10) + 2 * eps);
  CHECK_THROWS_AS(shift_support(f.scenario, 0, "q", {}), ModelError);
  CHECK_THROWS_AS(shift_support(f.scenario, 0, "q", {{"p", q(0)}}), ModelError);
  CHECK_THROWS_AS(shift_support(f.scenario, 0, "q", {{"p", q(1)}}), ModelError);

  const auto all = shift_support(f.scenario, 0, "q", {{"p", q(1, 4) + eps}});
  CHECK(all.weight(0, all.index_of("p")) == 0);
}

TEST_CASE("check_monotonicity verdicts") {
  SUBCASE("GS fails splitting on its proof instance") {
    const auto& f = find_fixture("gs_split");
    CHECK_FALSE(check_monotonicity(rule_fn(Rule::GS), f.scenario, *f.transformation).holds);
  }
  SUBCASE("identity split holds for every rule") {
    const auto& s = find_fixture("pr").scenario;
    for (Rule r : {Rule::GS, Rule::GSC, Rule::GE, Rule::EwT, Rule::EwTC, Rule::MT, Rule::MTC, Rule::SNW}) {
      const auto funded = rule_fn(r)(s);
      const auto& id = funded.ids.front();
      const auto idx = s.index_of(id);
      SplitSpec spec{id, {{id, s.projects()[idx].cost}}, {}};
      for (std::size_t j = 0; j < s.num_voters(); ++j) spec.voter_weights.push_back({s.weight(j, idx)});
      CHECK(check_monotonicity(rule_fn(r), s, make_split(s, spec)).holds);
    }
  }
  SUBCASE("premise must be funded") {
    // GSC funds a, never b
    const auto& s = find_fixture("weak_pr").scenario;
    CHECK_THROWS_AS(check_monotonicity(rule_fn(Rule::GSC), s, make_merge(s, {"b"}, "x")), PreconditionError);
  }
  SUBCASE("GSC splitting on random instances holds") {
    std::mt19937_64 rng(21);
    int applicable = 0;
    for (int t = 0; t < 150; ++t) {
      const auto s = random_instance(rng);
      const auto c = check_axiom(AxiomKind::Splitting, Rule::GSC, s, rng);
      if (!c.applicable) continue;
      ++applicable;
      CHECK_MESSAGE(c.holds, c.detail);
    }
    CHECK(applicable > 50);
  }
}

TEST_CASE("cohesive groups") {
  SUBCASE("PR instance: {v1} on {a, b} at level 2") {
    const auto& s = find_fixture("pr").scenario;
    bool found = false;
    for (const auto& g : enumerate_cohesive_groups(s)) {
      if (g.voters == std::vector<std::size_t>{0} && g.level == 2) {
        found = true;
        CHECK(g.projects == std::vector<std::size_t>{s.index_of("a"), s.index_of("b")});
      }
    }
    CHECK(found);
  }
  SUBCASE("disjoint singletons with n = L: one group per voter at level 1") {
    BudgetingScenario s({{"a", 1}, {"b", 1}, {"c", 1}}, 3);
    s.add_voter_row({q(1), q(0), q(0)});
    s.add_voter_row({q(0), q(1), q(0)});
    s.add_voter_row({q(0), q(0), q(1)});
    const auto groups = enumerate_cohesive_groups(s);
    CHECK(groups.size() == 3);
    for (const auto& g : groups) {
      CHECK(g.voters.size() == 1);
      CHECK(g.level == 1);
    }
  }
  SUBCASE("identical supports group together") {
    BudgetingScenario s({{"a", 1}, {"b", 1}}, 4);
    s.add_voter_row({q(1, 2), q(1, 2)});
    s.add_voter_row({q(1, 3), q(2, 3)});
    const auto groups = enumerate_cohesive_groups(s);
    REQUIRE_FALSE(groups.empty());
    for (const auto& g : groups) CHECK(g.voters.size() == 2);
    CHECK(groups.back().level == 4);
  }
}

TEST_CASE("PR checks") {
  const auto& s = find_fixture("pr").scenario;
  const auto v = check_pr(rule_fn(Rule::GSC), s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].unfunded == std::vector<std::size_t>{s.index_of("b")});
  CHECK(describe(s, v[0]).find("{a, b}") != std::string::npos);
  CHECK(check_pr(rule_fn(Rule::EwT), s).empty());
  CHECK(check_pr(rule_fn(Rule::EwTC), s).empty());

  BudgetingScenario none({{"a", 1}, {"b", 1}}, 1);
  none.add_voter_row({q(1, 2), q(1, 2)});
  none.add_voter_row({q(1), q(0)});
  // n = 2, L = 1: a group needs both voters, and they disagree
  CHECK(enumerate_cohesive_groups(none).empty());
  CHECK(check_pr(rule_fn(Rule::GS), none).empty());
}

TEST_CASE("Strong-PR checks") {
  const auto& s = find_fixture("strong_pr").scenario;
  const auto v = check_strong_pr(rule_fn(Rule::EwT), s);
  REQUIRE_FALSE(v.empty());
  bool p1 = false;
  for (const auto& x : v) {
    for (auto u : x.unfunded) p1 |= s.projects()[u].id == "p1";
  }
  CHECK(p1);
  CHECK(check_strong_pr(rule_fn(Rule::MT), s).empty());
  CHECK(check_strong_pr(rule_fn(Rule::MTC), s).empty());

  // everything funded: nothing to report
  Bundle all = make_bundle(s, {0, 1, 2});
  CHECK(check_strong_pr(s, all).empty());
}

TEST_CASE("Strong-PR without violations implies PR without violations") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 80; ++t) {
    const auto s = random_instance(rng);
    for (Rule r : {Rule::GS, Rule::GSC, Rule::EwT, Rule::MT}) {
      const auto b = rule_fn(r)(s);
      if (check_strong_pr(s, b).empty()) CHECK(check_pr(s, b).empty());
    }
  }
}

TEST_CASE("Weak-PR constructive witness") {
  const auto& s = find_fixture("weak_pr").scenario;
  SUBCASE("GS fails even constructively") {
    const auto v = check_weak_pr_constructive(rule_fn(Rule::GS), s, {0}, {"a"}, 1);
    CHECK_FALSE(v.holds);
    CHECK(v.outcome.ids == ids({"b"}));
  }
  SUBCASE("GSC holds") { CHECK(check_weak_pr_constructive(rule_fn(Rule::GSC), s, {0}, {"a"}, 1).holds); }
  SUBCASE("empty P' holds vacuously") { CHECK(check_weak_pr_constructive(rule_fn(Rule::GS), s, {0}, {}, 1).holds); }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(check_weak_pr_constructive(rule_fn(Rule::GS), s, {0}, {"b"}, 1), PreconditionError);
    CHECK_THROWS_AS(check_weak_pr_constructive(rule_fn(Rule::GS), s, {0}, {"a"}, 2), PreconditionError);
  }
}

TEST_CASE("random instances respect the generator bounds and plant groups") {
  std::mt19937_64 rng(99);
  int with_groups = 0;
  for (int t = 0; t < 100; ++t) {
    const auto s = random_instance(rng);
    CHECK(validate_scenario(s).ok());
    CHECK(s.num_voters() <= 20);
    CHECK(s.num_projects() <= 8);
    CHECK(s.budget() <= 20);
    for (const auto& p : s.projects()) CHECK(p.cost <= 10);
    for (const auto& g : enumerate_cohesive_groups(s)) with_groups += g.voters.size() >= 2;
  }
  CHECK(with_groups > 50);
}

TEST_CASE("axiom names") {
  CHECK(parse_axiom("weak-pr") == AxiomKind::WeakPr);
  CHECK(parse_axiom("Strong-PR") == AxiomKind::StrongPr);
  CHECK_THROWS_AS(parse_axiom("core"), ModelError);
}
