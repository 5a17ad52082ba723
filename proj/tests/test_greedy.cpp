#include <doctest.h>

#include <algorithm>
#include <random>

#include "cumpb/fixtures.hpp"
#include "cumpb/greedy.hpp"
#include "cumpb/rules.hpp"

using namespace cumpb;

namespace {

Rational q(long n, long d = 1) { return ratio(n, d); }

std::vector<std::string> ids(std::initializer_list<const char*> l) { return {l.begin(), l.end()}; }

std::vector<std::string> first_ten() {
  std::vector<std::string> out;
  for (int i = 1; i <= 10; ++i) out.push_back("p" + std::to_string(i));
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return id_less(a, b); });
  return out;
}

}  // namespace

TEST_CASE("priorities on the GSC merging instance") {
  const auto& s = find_fixture("gsc_merge").scenario;
  // 10 voters at (0.35, 0.6, 0.05), costs (5, 10, 5), L = 10
  CHECK(priority(s, "p1", PriorityKind::GSC) == q(7, 10));
  CHECK(priority(s, "p2", PriorityKind::GSC) == q(6, 10));
  CHECK(priority(s, "p3", PriorityKind::GSC) == q(1, 10));
  CHECK(priority(s, "p1", PriorityKind::GS) == q(35, 10));
  CHECK(priority(s, "p2", PriorityKind::GE) == -4);
}

TEST_CASE("priority edge cases") {
  BudgetingScenario s({{"a", 3}, {"b", 2}}, 2);
  s.add_voter_row({q(0), q(1)});
  CHECK(priority(s, "a", PriorityKind::GS) == 0);
  CHECK(priority(s, "a", PriorityKind::GE) == -3);
  CHECK(priority(s, "b", PriorityKind::GE) == 0);  // support exactly c(b)
  CHECK_THROWS_AS(priority(s, "zz", PriorityKind::GS), ModelError);
}

TEST_CASE("Example 1: GS, GSC and GE fund the ten majority projects") {
  const auto s = example_split_votes();
  for (auto kind : {PriorityKind::GS, PriorityKind::GSC, PriorityKind::GE}) {
    CAPTURE(to_string(kind));
    CHECK(run_greedy(s, kind).bundle(s).ids == first_ten());
  }
}

TEST_CASE("Weak-PR instance: GS funds only b") {
  const auto& s = find_fixture("weak_pr").scenario;
  CHECK(run_greedy(s, PriorityKind::GS).bundle(s).ids == ids({"b"}));
}

TEST_CASE("GSC merging instance: p1 and p3") {
  const auto& s = find_fixture("gsc_merge").scenario;
  CHECK(run_greedy(s, PriorityKind::GSC).bundle(s).ids == ids({"p1", "p3"}));
}

TEST_CASE("greedy trace ranks every project and records skips") {
  const auto& s = find_fixture("gsc_merge").scenario;
  const auto out = run_greedy(s, PriorityKind::GSC);
  REQUIRE(out.trace.events.size() == 3);
  CHECK(out.trace.events[0].kind == EventKind::Selected);
  CHECK(s.projects()[out.trace.events[0].project].id == "p1");
  CHECK(out.trace.events[1].kind == EventKind::Skipped);
  CHECK(s.projects()[out.trace.events[1].project].id == "p2");
  CHECK(*out.trace.events[1].priority == q(6, 10));
}

TEST_CASE("ties go to the smaller id, naturally ordered") {
  BudgetingScenario s({{"p10", 1}, {"p2", 1}}, 1);
  s.add_voter_row({q(1, 2), q(1, 2)});
  CHECK(run_greedy(s, PriorityKind::GS).bundle(s).ids == ids({"p2"}));
}

TEST_CASE("greedy is invariant under voter order and stays within budget") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto s = random_instance(rng);
    auto rows = s.ballots();
    std::shuffle(rows.begin(), rows.end(), rng);
    BudgetingScenario shuffled(s.projects(), s.budget());
    for (auto& r : rows) shuffled.add_voter_row(r);
    for (auto kind : {PriorityKind::GS, PriorityKind::GSC, PriorityKind::GE}) {
      const auto b = run_greedy(s, kind).bundle(s);
      CHECK(b.total_cost <= s.budget());
      CHECK(b == run_greedy(shuffled, kind).bundle(shuffled));
    }
  }
}

TEST_CASE("rule names") {
  CHECK(parse_rule("EwTc") == Rule::EwTC);
  CHECK(to_string(Rule::MTC) == "MTC");
  CHECK(parse_rule_list("gs, mt") == std::vector<Rule>{Rule::GS, Rule::MT});
  CHECK_THROWS_AS(parse_rule("wm"), ModelError);
  CHECK(is_cstv(Rule::EwT));
  CHECK_FALSE(is_cstv(Rule::SNW));
}
