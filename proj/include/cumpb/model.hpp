#pragma once

// Domain model for participatory budgeting with cumulative ballots.
//
// A scenario is a set of projects with integer costs, one cumulative ballot per
// voter (nonnegative weights summing to exactly 1) and a budget limit L. Each
// voter controls an L/n share of the budget and spreads it according to her
// ballot. Every value is an exact rational.

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace cumpb {

using Rational = mpq_class;
using Cost = std::int64_t;

/// num/den in canonical form (GMP arithmetic requires canonical operands).
inline Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "3", "0.35", "-1.5", "7/20" into an exact rational.
Rational parse_rational(std::string_view text);

/// "num/den" always, including integers ("3/1").
std::string format_fraction(const Rational& value);

/// "num" for integers, otherwise "num/den".
std::string format_rational(const Rational& value);

/// Fixed-point rendering rounded half away from zero.
std::string format_decimal(const Rational& value, int digits);

/// Ordering used for every tie-break: digit runs compare numerically, the rest
/// lexicographically, so "p2" < "p10".
bool id_less(std::string_view lhs, std::string_view rhs);

struct Project {
  std::string id;
  Cost cost = 0;

  bool operator==(const Project&) const = default;
};

/// Sparse ballot keyed by project id.
struct CumulativeBallot {
  std::map<std::string, Rational> weights;

  Rational total() const;
  bool operator==(const CumulativeBallot&) const = default;
};

class BudgetingScenario {
 public:
  BudgetingScenario() = default;
  BudgetingScenario(std::vector<Project> projects, Cost budget);

  void add_voter(const CumulativeBallot& ballot, std::string voter_id = {});
  void add_voter_row(std::vector<Rational> row, std::string voter_id = {});

  const std::vector<Project>& projects() const { return projects_; }
  const std::vector<std::vector<Rational>>& ballots() const { return ballots_; }
  const std::vector<std::string>& voter_ids() const { return voter_ids_; }
  Cost budget() const { return budget_; }
  void set_budget(Cost budget) { budget_ = budget; }

  std::size_t num_projects() const { return projects_.size(); }
  std::size_t num_voters() const { return ballots_.size(); }

  /// Throws ModelError for an unknown id.
  std::size_t index_of(std::string_view id) const;
  bool has_project(std::string_view id) const;

  const Rational& weight(std::size_t voter, std::size_t project) const {
    return ballots_.at(voter).at(project);
  }
  void set_weight(std::size_t voter, std::size_t project, Rational value);

  CumulativeBallot ballot(std::size_t voter) const;

  /// L/n, the money each voter controls.
  Rational endowment() const;

  /// Rank of each project under id_less (0 = smallest id).
  std::vector<std::size_t> tie_ranks() const;

  bool operator==(const BudgetingScenario&) const = default;

 private:
  std::vector<Project> projects_;
  std::vector<std::vector<Rational>> ballots_;
  std::vector<std::string> voter_ids_;
  Cost budget_ = 0;
};

struct Violation {
  std::string subject;  // "voter v3", "project p1", "scenario"
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate_scenario(const BudgetingScenario& scenario);

/// Throws ModelError carrying the report text when validation fails.
void require_valid(const BudgetingScenario& scenario);

struct Bundle {
  std::vector<std::string> ids;  // sorted by id_less
  Cost total_cost = 0;

  bool contains(std::string_view id) const;
  bool operator==(const Bundle&) const = default;
};

Bundle make_bundle(const BudgetingScenario& scenario, const std::vector<std::size_t>& indices);
std::string to_string(const Bundle& bundle);

enum class ProjectStatus { Active, Selected, Eliminated };

/// Mutable voter x project values consumed by transfer-based rules. Row and
/// column sums are maintained incrementally.
class WorkingProfile {
 public:
  explicit WorkingProfile(const BudgetingScenario& scenario);

  std::size_t num_voters() const { return values_.size(); }
  std::size_t num_projects() const { return column_sums_.size(); }

  const Rational& value(std::size_t voter, std::size_t project) const {
    return values_[voter][project];
  }
  void add(std::size_t voter, std::size_t project, const Rational& delta);
  void set(std::size_t voter, std::size_t project, const Rational& value);

  const Rational& column_sum(std::size_t project) const;
  const Rational& row_sum(std::size_t voter) const { return row_sums_.at(voter); }

  ProjectStatus status(std::size_t project) const { return status_.at(project); }
  void set_status(std::size_t project, ProjectStatus status) { status_.at(project) = status; }
  bool is_active(std::size_t project) const { return status_.at(project) == ProjectStatus::Active; }
  std::vector<std::size_t> active_projects() const;

  bool operator==(const WorkingProfile&) const = default;

 private:
  std::vector<std::vector<Rational>> values_;
  std::vector<Rational> column_sums_;
  std::vector<Rational> row_sums_;
  std::vector<ProjectStatus> status_;
};

/// L * (sum of current values on p) / n.
Rational support(const WorkingProfile& profile, std::size_t project, Cost budget, std::size_t voters);

/// support(p) - c(p).
Rational excess(const WorkingProfile& profile, std::size_t project, Cost cost, Cost budget,
                std::size_t voters);

/// Uniform split over a nonempty approval set.
CumulativeBallot convert_approval(const std::vector<std::string>& approved);

/// Weight of the i-th ranked project is scoring[i] / sum(scoring).
CumulativeBallot convert_ordinal(const std::vector<std::string>& ranking,
                                 const std::vector<Rational>& scoring);

/// Borda scores (m-1, m-2, ...) for the first ranking.size() positions out of m.
std::vector<Rational> borda_scoring(std::size_t ranking_length, std::size_t num_projects);

}  // namespace cumpb
