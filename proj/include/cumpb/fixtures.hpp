#pragma once

// Counterexample and proof instances for the axioms, with the outcomes each
// rule is expected to produce before and after the transformation.

#include <optional>
#include <string>
#include <vector>

#include "cumpb/axioms.hpp"
#include "cumpb/model.hpp"
#include "cumpb/rules.hpp"

namespace cumpb {

struct FixtureExpectation {
  Rule rule;
  std::vector<std::string> before;
  std::optional<std::vector<std::string>> after;
};

struct Fixture {
  std::string name;
  std::string description;
  BudgetingScenario scenario;
  std::optional<Transformation> transformation;
  std::vector<FixtureExpectation> expectations;
};

/// epsilon used by every instance that has one.
Rational fixture_epsilon();

/// Example with 20 unit-cost projects: 60 voters spread 1/10 over p1..p10,
/// 40 voters over p11..p20, L = 10.
BudgetingScenario example_split_votes();

std::vector<Fixture> proof_fixtures();
const Fixture& find_fixture(const std::string& name);

struct FixtureResult {
  std::string fixture;
  Rule rule;
  bool ok = true;
  Bundle before;
  std::optional<Bundle> after;
  std::string message;
};

std::vector<FixtureResult> run_fixture(const Fixture& fixture);

}  // namespace cumpb
