#include "cumpb/model.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

namespace cumpb {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

mpz_class parse_integer(std::string_view s) {
  if (!all_digits(s)) {
    throw ModelError("not a number: '" + std::string(s) + "'");
  }
  return mpz_class(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw ModelError("empty number: '" + std::string(text) + "'");

  Rational result;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(s.substr(0, slash));
    mpz_class den = parse_integer(s.substr(slash + 1));
    if (den == 0) throw ModelError("zero denominator: '" + std::string(text) + "'");
    result = Rational(num, den);
    result.canonicalize();
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw ModelError("not a number: '" + std::string(text) + "'");
    mpz_class w = whole.empty() ? mpz_class(0) : parse_integer(whole);
    mpz_class f = frac.empty() ? mpz_class(0) : parse_integer(frac);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    result = Rational(w * scale + f, scale);
    result.canonicalize();
  } else {
    result = Rational(parse_integer(s));
  }
  return negative ? Rational(-result) : result;
}

std::string format_fraction(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string format_rational(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return format_fraction(value);
}

std::string format_decimal(const Rational& value, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rational scaled = abs(value) * scale;
  // round half away from zero
  mpz_class twice = (scaled.get_num() * 2 + scaled.get_den()) / (scaled.get_den() * 2);
  std::string body = twice.get_str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits)) {
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  return (value < 0 && twice != 0 ? "-" : "") + body;
}

bool id_less(std::string_view lhs, std::string_view rhs) {
  std::size_t i = 0, j = 0;
  while (i < lhs.size() && j < rhs.size()) {
    const bool ld = std::isdigit(static_cast<unsigned char>(lhs[i]));
    const bool rd = std::isdigit(static_cast<unsigned char>(rhs[j]));
    if (ld && rd) {
      std::size_t ie = i, je = j;
      while (ie < lhs.size() && std::isdigit(static_cast<unsigned char>(lhs[ie]))) ++ie;
      while (je < rhs.size() && std::isdigit(static_cast<unsigned char>(rhs[je]))) ++je;
      std::string_view a = lhs.substr(i, ie - i), b = rhs.substr(j, je - j);
      while (a.size() > 1 && a.front() == '0') a.remove_prefix(1);
      while (b.size() > 1 && b.front() == '0') b.remove_prefix(1);
      if (a.size() != b.size()) return a.size() < b.size();
      if (a != b) return a < b;
      i = ie;
      j = je;
    } else {
      if (lhs[i] != rhs[j]) return lhs[i] < rhs[j];
      ++i;
      ++j;
    }
  }
  if ((lhs.size() - i) != (rhs.size() - j)) return (lhs.size() - i) < (rhs.size() - j);
  return lhs < rhs;  // leading-zero variants
}

Rational CumulativeBallot::total() const {
  Rational sum = 0;
  for (const auto& [id, w] : weights) sum += w;
  return sum;
}

BudgetingScenario::BudgetingScenario(std::vector<Project> projects, Cost budget)
    : projects_(std::move(projects)), budget_(budget) {}

void BudgetingScenario::add_voter(const CumulativeBallot& ballot, std::string voter_id) {
  std::vector<Rational> row(projects_.size(), Rational(0));
  for (const auto& [id, w] : ballot.weights) {
    row[index_of(id)] = w;
  }
  add_voter_row(std::move(row), std::move(voter_id));
}

void BudgetingScenario::add_voter_row(std::vector<Rational> row, std::string voter_id) {
  if (row.size() != projects_.size()) {
    throw ModelError("ballot row has " + std::to_string(row.size()) + " entries, expected " +
                     std::to_string(projects_.size()));
  }
  if (voter_id.empty()) voter_id = "v" + std::to_string(ballots_.size() + 1);
  ballots_.push_back(std::move(row));
  voter_ids_.push_back(std::move(voter_id));
}

std::size_t BudgetingScenario::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < projects_.size(); ++i) {
    if (projects_[i].id == id) return i;
  }
  throw ModelError("unknown project id '" + std::string(id) + "'");
}

bool BudgetingScenario::has_project(std::string_view id) const {
  return std::any_of(projects_.begin(), projects_.end(), [&](const Project& p) { return p.id == id; });
}

void BudgetingScenario::set_weight(std::size_t voter, std::size_t project, Rational value) {
  ballots_.at(voter).at(project) = std::move(value);
}

CumulativeBallot BudgetingScenario::ballot(std::size_t voter) const {
  CumulativeBallot out;
  const auto& row = ballots_.at(voter);
  for (std::size_t p = 0; p < row.size(); ++p) {
    if (row[p] != 0) out.weights.emplace(projects_[p].id, row[p]);
  }
  return out;
}

Rational BudgetingScenario::endowment() const {
  if (ballots_.empty()) throw ModelError("scenario has no voters");
  Rational e(budget_, static_cast<unsigned long>(ballots_.size()));
  e.canonicalize();
  return e;
}

std::vector<std::size_t> BudgetingScenario::tie_ranks() const {
  std::vector<std::size_t> order(projects_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return id_less(projects_[a].id, projects_[b].id); });
  std::vector<std::size_t> rank(projects_.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v.subject << ": " << v.message << '\n';
  return out.str();
}

ValidationReport validate_scenario(const BudgetingScenario& s) {
  ValidationReport report;
  auto add = [&](std::string subject, std::string message) {
    report.violations.push_back({std::move(subject), std::move(message)});
  };
  if (s.num_projects() == 0) add("scenario", "no projects");
  if (s.num_voters() == 0) add("scenario", "no voters");
  if (s.budget() < 1) add("scenario", "budget < 1");

  std::set<std::string> seen;
  for (const auto& p : s.projects()) {
    if (p.id.empty()) add("project", "empty id");
    if (!seen.insert(p.id).second) add("project " + p.id, "duplicate id");
    if (p.cost < 1) add("project " + p.id, "cost < 1");
  }
  for (std::size_t j = 0; j < s.num_voters(); ++j) {
    const auto& row = s.ballots()[j];
    const std::string who = "voter " + s.voter_ids()[j];
    if (row.size() != s.num_projects()) {
      add(who, "ballot length mismatch");
      continue;
    }
    Rational sum = 0;
    for (std::size_t p = 0; p < row.size(); ++p) {
      if (row[p] < 0) add(who, "negative weight on " + s.projects()[p].id);
      sum += row[p];
    }
    if (sum != 1) add(who, "ballot sum != 1 (" + format_rational(sum) + ")");
  }
  return report;
}

void require_valid(const BudgetingScenario& scenario) {
  auto report = validate_scenario(scenario);
  if (!report.ok()) throw ModelError("invalid scenario:\n" + report.to_string());
}

bool Bundle::contains(std::string_view id) const {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

Bundle make_bundle(const BudgetingScenario& scenario, const std::vector<std::size_t>& indices) {
  Bundle b;
  for (auto i : indices) {
    b.ids.push_back(scenario.projects().at(i).id);
    b.total_cost += scenario.projects()[i].cost;
  }
  std::sort(b.ids.begin(), b.ids.end(), [](const auto& a, const auto& c) { return id_less(a, c); });
  return b;
}

std::string to_string(const Bundle& bundle) {
  std::string out = "{";
  for (std::size_t i = 0; i < bundle.ids.size(); ++i) {
    if (i) out += ", ";
    out += bundle.ids[i];
  }
  return out + "}";
}

WorkingProfile::WorkingProfile(const BudgetingScenario& scenario)
    : values_(scenario.ballots()),
      column_sums_(scenario.num_projects(), Rational(0)),
      row_sums_(scenario.num_voters(), Rational(0)),
      status_(scenario.num_projects(), ProjectStatus::Active) {
  for (std::size_t j = 0; j < values_.size(); ++j) {
    for (std::size_t p = 0; p < values_[j].size(); ++p) {
      column_sums_[p] += values_[j][p];
      row_sums_[j] += values_[j][p];
    }
  }
}

void WorkingProfile::add(std::size_t voter, std::size_t project, const Rational& delta) {
  values_.at(voter).at(project) += delta;
  column_sums_[project] += delta;
  row_sums_[voter] += delta;
}

void WorkingProfile::set(std::size_t voter, std::size_t project, const Rational& value) {
  Rational& slot = values_.at(voter).at(project);
  const Rational delta = value - slot;
  column_sums_[project] += delta;
  row_sums_[voter] += delta;
  slot = value;
}

const Rational& WorkingProfile::column_sum(std::size_t project) const {
  if (project >= column_sums_.size()) throw ModelError("unknown project index " + std::to_string(project));
  return column_sums_[project];
}

std::vector<std::size_t> WorkingProfile::active_projects() const {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < status_.size(); ++p) {
    if (status_[p] == ProjectStatus::Active) out.push_back(p);
  }
  return out;
}

Rational support(const WorkingProfile& profile, std::size_t project, Cost budget, std::size_t voters) {
  Rational s = profile.column_sum(project) * budget;
  s /= static_cast<unsigned long>(voters);
  return s;
}

Rational excess(const WorkingProfile& profile, std::size_t project, Cost cost, Cost budget,
                std::size_t voters) {
  return support(profile, project, budget, voters) - cost;
}

CumulativeBallot convert_approval(const std::vector<std::string>& approved) {
  if (approved.empty()) throw ModelError("empty approval set");
  std::set<std::string> unique(approved.begin(), approved.end());
  if (unique.size() != approved.size()) throw ModelError("duplicate project in approval set");
  CumulativeBallot b;
  Rational share(1, static_cast<unsigned long>(approved.size()));
  for (const auto& id : approved) b.weights.emplace(id, share);
  return b;
}

CumulativeBallot convert_ordinal(const std::vector<std::string>& ranking,
                                 const std::vector<Rational>& scoring) {
  if (ranking.size() != scoring.size()) throw ModelError("scoring length differs from ranking length");
  std::set<std::string> unique(ranking.begin(), ranking.end());
  if (unique.size() != ranking.size()) throw ModelError("duplicate project in ranking");
  Rational total = 0;
  for (const auto& s : scoring) {
    if (s < 0) throw ModelError("negative score");
    total += s;
  }
  if (total == 0) throw ModelError("scoring vector sums to zero");
  CumulativeBallot b;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    Rational w = scoring[i] / total;
    if (w != 0) b.weights.emplace(ranking[i], w);
  }
  return b;
}

std::vector<Rational> borda_scoring(std::size_t ranking_length, std::size_t num_projects) {
  if (ranking_length > num_projects) throw ModelError("ranking longer than project list");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < ranking_length; ++i) {
    out.emplace_back(static_cast<unsigned long>(num_projects - 1 - i));
  }
  return out;
}

}  // namespace cumpb
