#include <doctest.h>

#include <algorithm>
#include <random>

#include "cumpb/baselines.hpp"
#include "cumpb/fixtures.hpp"
#include "cumpb/greedy.hpp"

using namespace cumpb;

namespace {

Rational q(long n, long d = 1) { return ratio(n, d); }

// Every feasible bundle, by brute force over subsets.
std::vector<std::vector<std::size_t>> feasible_bundles(const BudgetingScenario& s) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t m = s.num_projects();
  for (unsigned long mask = 0; mask < (1UL << m); ++mask) {
    std::vector<std::size_t> b;
    Cost c = 0;
    for (std::size_t p = 0; p < m; ++p) {
      if (mask & (1UL << p)) {
        b.push_back(p);
        c += s.projects()[p].cost;
      }
    }
    if (c <= s.budget()) out.push_back(b);
  }
  return out;
}

}  // namespace

TEST_CASE("SNW on Example 1: eight majority and two minority projects") {
  const auto s = example_split_votes();
  const auto r = run_snw(s);
  int maj = 0, min = 0;
  for (const auto& id : r.bundle.ids) (std::stoi(id.substr(1)) <= 10 ? maj : min) += 1;
  CHECK(maj == 8);
  CHECK(min == 2);
  CHECK(r.bundle.total_cost == 10);
}

TEST_CASE("SNW trivial cases") {
  BudgetingScenario one({{"a", 2}}, 3);
  one.add_voter_row({q(1)});
  CHECK(run_snw(one).bundle.ids == std::vector<std::string>{"a"});

  BudgetingScenario all({{"a", 1}, {"b", 2}, {"c", 3}}, 6);
  all.add_voter_row({q(1), q(0), q(0)});
  all.add_voter_row({q(0), q(1, 2), q(1, 2)});
  CHECK(run_snw(all).bundle.ids.size() == 3);
}

TEST_CASE("SNW guard") {
  std::vector<Project> ps;
  for (int i = 0; i < 21; ++i) ps.push_back({"p" + std::to_string(i), 1});
  BudgetingScenario s(ps, 5);
  std::vector<Rational> row(21, Rational(0));
  row[0] = 1;
  s.add_voter_row(row);
  CHECK_THROWS_AS(run_snw(s), ModelError);
  CHECK_NOTHROW(run_snw(s, 21));
}

TEST_CASE("SNW is optimal among all feasible bundles (brute force)") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    RandomInstanceParams params;
    params.max_projects = 6;
    params.max_voters = 6;
    const auto s = random_instance(rng, params);
    const auto r = run_snw(s);
    CHECK(r.bundle.total_cost <= s.budget());
    // v* from brute force
    std::vector<Rational> best(s.num_voters(), Rational(0));
    const auto all = feasible_bundles(s);
    for (const auto& b : all) {
      for (std::size_t j = 0; j < s.num_voters(); ++j) {
        Rational v = 0;
        for (auto p : b) v += s.weight(j, p);
        if (v > best[j]) best[j] = v;
      }
    }
    CHECK(r.best_value == best);
    for (const auto& b : all) CHECK(snw_objective(s, b, best) <= r.objective);
    CHECK(snw_objective(s, r.selected, best) == r.objective);
  }
}

TEST_CASE("WM examples") {
  std::vector<Project> ps{{"a", 1}, {"b", 1}};
  std::vector<std::vector<std::string>> ballots{{"a"}, {"a"}, {"a"}, {"b"}, {"b"}};
  auto out = run_wm(ps, ballots, 1);
  REQUIRE(out.selected.size() == 1);
  CHECK(ps[out.selected[0]].id == "a");
  CHECK(run_wm(ps, ballots, 0).selected.empty());
  CHECK_THROWS_AS(run_wm(ps, {{"zz"}}, 1), ModelError);
}

// Approval counts and 1/k-normalized support rank alike only when every ballot
// has the same size k.
TEST_CASE("WM equals GS on converted approval ballots of equal size") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, m)(rng);
    std::vector<Project> ps;
    for (std::size_t p = 0; p < m; ++p) ps.push_back({"p" + std::to_string(p + 1), std::uniform_int_distribution<Cost>(1, 6)(rng)});
    BudgetingScenario s(ps, std::uniform_int_distribution<Cost>(1, 15)(rng));
    std::vector<std::vector<std::string>> approvals;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::string> ids;
      for (const auto& p : ps) ids.push_back(p.id);
      std::shuffle(ids.begin(), ids.end(), rng);
      ids.resize(k);
      s.add_voter(convert_approval(ids));
      approvals.push_back(ids);
    }
    CHECK(make_bundle(s, run_wm(ps, approvals, s.budget()).selected) == run_greedy(s, PriorityKind::GS).bundle(s));
  }
}

TEST_CASE("WM and GS part ways when ballot sizes differ") {
  // p2 has two approvals, p1 one; normalized, both have support 1 and the
  // tie goes to p1.
  std::vector<Project> ps{{"p1", 1}, {"p2", 1}, {"x", 1}, {"y", 1}};
  std::vector<std::vector<std::string>> approvals{{"p2", "x"}, {"p2", "y"}, {"p1"}};
  BudgetingScenario s(ps, 1);
  for (const auto& a : approvals) s.add_voter(convert_approval(a));
  CHECK(make_bundle(s, run_wm(ps, approvals, 1).selected).ids == std::vector<std::string>{"p2"});
  CHECK(run_greedy(s, PriorityKind::GS).bundle(s).ids == std::vector<std::string>{"p1"});
}
