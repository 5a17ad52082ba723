#include "cumpb/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <thread>

namespace cumpb {

namespace {

constexpr long kSnapDenominator = 1000000000;

Point uniform_in_disc(Point center, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double theta = 2 * std::numbers::pi * unit(rng);
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

Point suburb_center(int i) {
  const double theta = 2 * std::numbers::pi * i / 8;
  return {kSuburbRing * std::cos(theta), kSuburbRing * std::sin(theta)};
}

std::string project_id(std::size_t i) { return "p" + std::to_string(i + 1); }

}  // namespace

std::string to_string(Region region) {
  switch (region) {
    case Region::Center: return "center";
    case Region::Suburb: return "suburb";
    case Region::LeftDisc: return "left";
    case Region::RightDisc: return "right";
  }
  return "?";
}

std::string to_string(BallotMode mode) { return mode == BallotMode::Cumulative ? "cumulative" : "approval"; }

void SpatialConfig::validate() const {
  if (voters == 0 || projects == 0 || budget <= 0 || k == 0) {
    throw ModelError("voters, projects, budget and k must be positive");
  }
  if (cost_sd < 0 || disc_sd < 0) throw ModelError("cost standard deviation must be nonnegative");
  if (k > projects) throw ModelError("k exceeds the number of projects");
}

std::vector<LabeledPoint> gen_points_scenario1(std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<LabeledPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = unit(rng);
    LabeledPoint lp;
    if (u < 0.6) {
      lp.point = uniform_in_disc({0, 0}, kCenterRadius, rng);
      lp.region = Region::Center;
    } else {
      // 8 suburbs, 0.05 each
      const int s = std::min(7, static_cast<int>((u - 0.6) / 0.05));
      lp.point = uniform_in_disc(suburb_center(s), kSuburbRadius, rng);
      lp.region = Region::Suburb;
      lp.suburb = s;
    }
    out.push_back(lp);
  }
  return out;
}

std::vector<LabeledPoint> gen_points_scenario2(std::size_t count, std::mt19937_64& rng) {
  std::bernoulli_distribution left(0.5);
  std::vector<LabeledPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    LabeledPoint lp;
    if (left(rng)) {
      lp.point = uniform_in_disc({-kDiscOffset, 0}, kDiscRadius, rng);
      lp.region = Region::LeftDisc;
    } else {
      lp.point = uniform_in_disc({kDiscOffset, 0}, kDiscRadius, rng);
      lp.region = Region::RightDisc;
    }
    out.push_back(lp);
  }
  return out;
}

Cost round_cost(double draw) {
  const double r = std::round(draw);
  return r < 1 ? 1 : static_cast<Cost>(r);
}

Cost draw_cost(double mean, double sd, std::mt19937_64& rng) {
  if (sd == 0) return round_cost(mean);
  std::normal_distribution<double> gauss(mean, sd);
  return round_cost(gauss(rng));
}

std::vector<std::vector<Rational>> build_ballots(const std::vector<Point>& voters,
                                                 const std::vector<Point>& projects, std::size_t k,
                                                 BallotWeighting weighting) {
  if (k == 0 || k > projects.size()) throw ModelError("k must be in 1..m");
  std::vector<std::vector<Rational>> rows;
  rows.reserve(voters.size());
  std::vector<std::size_t> order(projects.size());
  std::vector<double> dist(projects.size());
  for (const auto& v : voters) {
    for (std::size_t p = 0; p < projects.size(); ++p) {
      dist[p] = std::hypot(projects[p].x - v.x, projects[p].y - v.y);
    }
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(k), order.end(),
                      [&](std::size_t a, std::size_t b) { return dist[a] != dist[b] ? dist[a] < dist[b] : a < b; });

    std::vector<Rational> row(projects.size(), Rational(0));
    const bool inverse = weighting == BallotWeighting::Inverse;
    auto raw = [&](std::size_t p) { return inverse ? 1 / dist[p] : dist[p]; };
    double total = 0;
    for (std::size_t i = 0; i < k; ++i) total += inverse ? 0 : dist[order[i]];
    if (inverse ? dist[order[0]] == 0 : total == 0) {
      row[order[0]] = 1;
      rows.push_back(std::move(row));
      continue;
    }
    if (inverse) {
      for (std::size_t i = 0; i < k; ++i) total += raw(order[i]);
    }
    long assigned = 0;
    std::size_t largest = order[0];
    long largest_units = -1;
    std::vector<long> units(k);
    for (std::size_t i = 0; i < k; ++i) {
      units[i] = std::lround(kSnapDenominator * (raw(order[i]) / total));
      assigned += units[i];
      if (units[i] > largest_units) {
        largest_units = units[i];
        largest = i;
      }
    }
    units[largest] += kSnapDenominator - assigned;
    for (std::size_t i = 0; i < k; ++i) {
      row[order[i]] = Rational(units[i], kSnapDenominator);
      row[order[i]].canonicalize();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

BudgetingScenario flatten_ballots(const BudgetingScenario& s) {
  BudgetingScenario out(s.projects(), s.budget());
  for (std::size_t j = 0; j < s.num_voters(); ++j) {
    std::vector<Rational> row(s.num_projects(), Rational(0));
    long positive = 0;
    for (std::size_t p = 0; p < s.num_projects(); ++p) positive += s.weight(j, p) > 0;
    for (std::size_t p = 0; p < s.num_projects(); ++p) {
      if (s.weight(j, p) > 0) row[p] = Rational(1, positive);
    }
    out.add_voter_row(std::move(row), s.voter_ids()[j]);
  }
  return out;
}

SpatialInstance generate_instance(const SpatialConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  SpatialInstance inst;
  const bool one = cfg.scenario == SpatialScenario::One;
  inst.project_points = one ? gen_points_scenario1(cfg.projects, rng) : gen_points_scenario2(cfg.projects, rng);
  inst.voter_points = one ? gen_points_scenario1(cfg.voters, rng) : gen_points_scenario2(cfg.voters, rng);

  std::vector<Project> projects;
  for (std::size_t p = 0; p < cfg.projects; ++p) {
    Cost c;
    if (one) {
      c = draw_cost(cfg.cost_mean, cfg.cost_sd, rng);
    } else {
      const bool left = inst.project_points[p].region == Region::LeftDisc;
      c = draw_cost(left ? cfg.left_mean : cfg.right_mean, cfg.disc_sd, rng);
    }
    projects.push_back({project_id(p), c});
  }
  inst.scenario = BudgetingScenario(std::move(projects), cfg.budget);

  std::vector<Point> vp, pp;
  for (const auto& v : inst.voter_points) vp.push_back(v.point);
  for (const auto& p : inst.project_points) pp.push_back(p.point);
  auto rows = build_ballots(vp, pp, cfg.k, cfg.weighting);
  for (std::size_t j = 0; j < rows.size(); ++j) inst.scenario.add_voter_row(std::move(rows[j]), "v" + std::to_string(j + 1));
  return inst;
}

StatsReport compute_stats(const BudgetingScenario& s, const Bundle& bundle,
                          const std::vector<LabeledPoint>& project_points) {
  StatsReport r;
  std::vector<std::size_t> funded;
  for (const auto& id : bundle.ids) funded.push_back(s.index_of(id));

  const std::size_t n = s.num_voters();
  std::size_t angry = 0;
  Rational total_vs = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Rational got = 0;
    for (auto p : funded) got += s.weight(j, p);
    total_vs += got;
    if (got == 0) ++angry;
  }
  if (n > 0) {
    r.vs = total_vs / static_cast<long>(n);
    r.ar = ratio(static_cast<long>(angry), static_cast<long>(n));
  }

  Cost spent = 0;
  std::map<Region, Cost> by_region;
  for (auto p : funded) {
    const Cost c = s.projects()[p].cost;
    spent += c;
    if (p < project_points.size()) by_region[project_points[p].region] += c;
  }
  if (!funded.empty()) r.ac = Rational(spent) / static_cast<long>(funded.size());
  for (Region g : {Region::Center, Region::Suburb, Region::LeftDisc, Region::RightDisc}) {
    r.shares[g] = spent == 0 ? Rational(0) : Rational(by_region[g]) / Rational(spent);
  }
  return r;
}

StatsReport ExperimentResult::mean(Rule rule, BallotMode mode) const {
  StatsReport acc;
  long count = 0;
  for (const auto& row : rows) {
    if (row.rule != rule || row.mode != mode) continue;
    ++count;
    acc.vs += row.stats.vs;
    acc.ar += row.stats.ar;
    acc.ac += row.stats.ac;
    for (const auto& [g, v] : row.stats.shares) acc.shares[g] += v;
  }
  if (count == 0) return acc;
  acc.vs /= count;
  acc.ar /= count;
  acc.ac /= count;
  for (auto& [g, v] : acc.shares) v /= count;
  return acc;
}

std::uint64_t instance_seed(std::uint64_t master, std::size_t instance) {
  // splitmix64 step on master + (instance + 1) * golden gamma
  std::uint64_t z = master + (static_cast<std::uint64_t>(instance) + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ExperimentResult run_experiment(const SpatialConfig& cfg, const std::vector<Rule>& rules, std::size_t instances,
                                unsigned threads) {
  cfg.validate();
  if (instances == 0) throw ModelError("instances must be at least 1");
  const std::size_t per_instance = rules.size() * 2;
  ExperimentResult result;
  result.rows.resize(instances * per_instance);

  auto work = [&](std::size_t i) {
    std::mt19937_64 rng(instance_seed(cfg.seed, i));
    const SpatialInstance inst = generate_instance(cfg, rng);
    const BudgetingScenario flat = flatten_ballots(inst.scenario);
    for (std::size_t r = 0; r < rules.size(); ++r) {
      for (BallotMode mode : {BallotMode::Cumulative, BallotMode::Approval}) {
        const auto& input = mode == BallotMode::Cumulative ? inst.scenario : flat;
        auto& row = result.rows[i * per_instance + r * 2 + (mode == BallotMode::Approval)];
        row.instance = i;
        row.rule = rules[r];
        row.mode = mode;
        row.stats = compute_stats(inst.scenario, run_rule_bundle(rules[r], input), inst.project_points);
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, instances));
  if (threads <= 1) {
    for (std::size_t i = 0; i < instances; ++i) work(i);
    return result;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < instances; i += threads) work(i);
    });
  }
  for (auto& th : pool) th.join();
  return result;
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
  out << "instance,rule,ballot_mode,VS,AR,AC,share_center,share_suburb,share_left,share_right\n";
  for (const auto& row : result.rows) {
    const auto& st = row.stats;
    out << row.instance << ',' << to_string(row.rule) << ',' << to_string(row.mode) << ','
        << format_decimal(st.vs, 6) << ',' << format_decimal(st.ar, 6) << ',' << format_decimal(st.ac, 6);
    for (Region g : {Region::Center, Region::Suburb, Region::LeftDisc, Region::RightDisc}) {
      auto it = st.shares.find(g);
      out << ',' << format_decimal(it == st.shares.end() ? Rational(0) : it->second, 6);
    }
    out << '\n';
  }
}

}  // namespace cumpb
