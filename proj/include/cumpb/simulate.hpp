#pragma once

// 2-D Euclidean instance generator. Voters and projects get ideal points in
// the plane; each voter spreads her ballot over her k nearest projects,
// inversely to distance.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cumpb/model.hpp"
#include "cumpb/rules.hpp"

namespace cumpb {

enum class SpatialScenario { One, Two };

/// Scenario 1: center disc + 8 suburbs. Scenario 2: left (cheap) and right
/// (expensive) discs.
enum class Region { Center, Suburb, LeftDisc, RightDisc };
std::string to_string(Region region);

struct Point {
  double x = 0;
  double y = 0;
};

struct LabeledPoint {
  Point point;
  Region region = Region::Center;
  int suburb = -1;  // 0..7 for Region::Suburb
};

/// Inverse: v_j(p) proportional to 1/d (the described model). Distance:
/// proportional to d, the formula as literally printed; kept for comparison.
enum class BallotWeighting { Inverse, Distance };

struct SpatialConfig {
  SpatialScenario scenario = SpatialScenario::One;
  std::size_t voters = 100;
  std::size_t projects = 100;
  Cost budget = 500000;
  std::uint64_t seed = 0;
  double cost_mean = 50000;  // scenario 1
  double cost_sd = 20000;
  double left_mean = 30000;  // scenario 2
  double right_mean = 70000;
  double disc_sd = 10000;
  std::size_t k = 10;
  BallotWeighting weighting = BallotWeighting::Inverse;

  /// Throws ModelError on nonpositive sizes, negative sd or k > projects.
  void validate() const;
};

constexpr double kCenterRadius = 0.25;
constexpr double kSuburbRadius = 0.06;
constexpr double kSuburbRing = 0.75;
constexpr double kDiscRadius = 0.25;
constexpr double kDiscOffset = 0.5;

std::vector<LabeledPoint> gen_points_scenario1(std::size_t count, std::mt19937_64& rng);
std::vector<LabeledPoint> gen_points_scenario2(std::size_t count, std::mt19937_64& rng);

/// Gaussian draw rounded to the nearest integer, clamped below at 1.
Cost draw_cost(double mean, double sd, std::mt19937_64& rng);
Cost round_cost(double draw);

struct SpatialInstance {
  BudgetingScenario scenario;
  std::vector<LabeledPoint> voter_points;
  std::vector<LabeledPoint> project_points;  // region labels per project
};

SpatialInstance generate_instance(const SpatialConfig& cfg, std::mt19937_64& rng);

/// One dense row per voter: weight 1/d over the k nearest projects, normalized,
/// snapped to denominator 10^9 with the largest entry absorbing the residual.
/// A project at distance 0 takes the whole ballot (inverse weighting only).
std::vector<std::vector<Rational>> build_ballots(const std::vector<Point>& voters,
                                                 const std::vector<Point>& projects, std::size_t k,
                                                 BallotWeighting weighting = BallotWeighting::Inverse);

/// Same projects and support sets, each voter uniform over her positive entries.
BudgetingScenario flatten_ballots(const BudgetingScenario& scenario);

struct StatsReport {
  Rational vs;  // mean v_j(B)
  Rational ar;  // fraction of voters with v_j(B) = 0
  Rational ac;  // c(B)/|B|
  std::map<Region, Rational> shares;  // c(B cap region)/c(B)
};

StatsReport compute_stats(const BudgetingScenario& scenario, const Bundle& bundle,
                          const std::vector<LabeledPoint>& project_points);

enum class BallotMode { Cumulative, Approval };
std::string to_string(BallotMode mode);

struct ExperimentRow {
  std::size_t instance = 0;
  Rule rule = Rule::GS;
  BallotMode mode = BallotMode::Cumulative;
  StatsReport stats;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;  // instance-major, then rule, then mode

  /// Mean of each statistic over instances.
  StatsReport mean(Rule rule, BallotMode mode) const;
};

/// Per-instance seed, independent of scheduling.
std::uint64_t instance_seed(std::uint64_t master, std::size_t instance);

/// Runs every rule on cumulative and on flattened ballots. Statistics are
/// always measured against the cumulative ballots. threads = 0 picks
/// hardware concurrency.
ExperimentResult run_experiment(const SpatialConfig& cfg, const std::vector<Rule>& rules, std::size_t instances,
                                unsigned threads = 0);

void write_csv(std::ostream& out, const ExperimentResult& result);

}  // namespace cumpb
