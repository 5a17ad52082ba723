// One PASS/FAIL line per acceptance criterion; INFO lines report the
// companion measurements that explain a failure. Exits 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cumpb/axioms.hpp"
#include "cumpb/baselines.hpp"
#include "cumpb/fixtures.hpp"
#include "cumpb/greedy.hpp"
#include "cumpb/simulate.hpp"

using namespace cumpb;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const std::string& id, bool ok, const std::string& text) {
  std::cout << (ok ? "PASS " : "FAIL ") << id << "  " << text << std::endl;
  failures += !ok;
}

void info(const std::string& id, const std::string& text) { std::cout << "INFO " << id << "  " << text << std::endl; }

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string secs(double s) {
  std::ostringstream out;
  out.precision(2);
  out << std::fixed << s << "s";
  return out.str();
}

std::string dec(const Rational& r) { return format_decimal(r, 3); }

std::pair<int, int> majority_minority(const Bundle& b) {
  int maj = 0, min = 0;
  for (const auto& id : b.ids) (std::stoi(id.substr(1)) <= 10 ? maj : min) += 1;
  return {maj, min};
}

// ---------------------------------------------------------------------------

void example_rules() {
  Stopwatch sw;
  const auto s = example_split_votes();
  std::vector<std::string> first_ten;
  for (int i = 1; i <= 10; ++i) first_ten.push_back("p" + std::to_string(i));
  std::sort(first_ten.begin(), first_ten.end(), [](auto& a, auto& b) { return id_less(a, b); });
  bool ok = true;
  for (Rule r : {Rule::GS, Rule::GSC, Rule::GE}) ok &= run_rule_bundle(r, s).ids == first_ten;
  for (Rule r : {Rule::MT, Rule::MTC}) ok &= majority_minority(run_rule_bundle(r, s)) == std::pair{6, 4};
  const double t = sw.seconds();
  report("1", ok && t < 1.0, "Example 1: GS/GSC/GE fund p1..p10, MT/MTC fund 6 majority + 4 minority (" + secs(t) + ")");
}

void example_snw() {
  Stopwatch sw;
  const auto b = run_snw(example_split_votes()).bundle;
  const double t = sw.seconds();
  const auto [maj, min] = majority_minority(b);
  report("2", maj == 8 && min == 2 && t < 60.0,
         "Example 1: SNW funds " + std::to_string(maj) + " majority + " + std::to_string(min) + " minority (" +
             secs(t) + ")");
}

struct FixtureCheck {
  std::string id;
  std::string fixture;
  std::vector<Rule> rules;
  std::vector<std::string> before;
  std::optional<std::vector<std::string>> after;
  std::vector<std::string> absent_after;  // must not be funded after
};

bool run_check(const FixtureCheck& c, std::string& seen) {
  const auto& f = find_fixture(c.fixture);
  bool ok = true;
  for (Rule r : c.rules) {
    const auto b = run_rule_bundle(r, f.scenario);
    seen += to_string(r) + " " + to_string(b);
    ok &= b.ids == c.before;
    if (c.after || !c.absent_after.empty()) {
      const auto a = run_rule_bundle(r, f.transformation->result);
      seen += " -> " + to_string(a);
      if (c.after) ok &= a.ids == *c.after;
      for (const auto& id : c.absent_after) ok &= !a.contains(id);
    }
    seen += "; ";
  }
  return ok;
}

void fixture_checks() {
  using V = std::vector<std::string>;
  const std::vector<std::pair<FixtureCheck, std::string>> checks{
      {{"3a", "gs_split", {Rule::GS}, V{"p1"}, V{"p2"}, {"pa", "pb"}}, "GS splitting: {p1} -> {p2}"},
      {{"3b", "ewtc_split", {Rule::EwTC}, V{"p1"}, V{"p2"}, {"pa", "pb"}}, "EwTC splitting: {p1} -> {p2}, no part funded"},
      {{"3c", "mtc_split", {Rule::MTC}, V{"p1"}, V{"p2"}, {"pa", "pb"}}, "MTC splitting: {p1} -> {p2}, no part funded"},
      {{"3d", "mt_merge", {Rule::MT, Rule::MTC}, V{"p", "r"}, std::nullopt, {"x"}}, "MT/MTC merging: {p, r} funded, x not"},
      {{"3e", "gsc_merge", {Rule::GSC}, V{"p1", "p3"}, V{"p2"}, {"x"}}, "GSC merging: {p1, p3} -> {p2}"},
      {{"3f", "ewt_support", {Rule::EwT, Rule::EwTC}, V{"r"}, V{"p"}, {"r"}}, "EwT/EwTC support: {r} -> {p}"},
      {{"3g", "weak_pr", {Rule::GS}, V{"b"}, std::nullopt, {}}, "Weak-PR instance: GS funds {b}"},
      {{"3h", "pr", {Rule::GSC}, V{"a", "c"}, std::nullopt, {}}, "PR instance: GSC funds {a, c}"},
      {{"3i", "strong_pr", {Rule::EwT, Rule::EwTC}, V{"q"}, std::nullopt, {}}, "Strong-PR instance: EwT/EwTC fund {q}"},
  };
  for (const auto& [c, text] : checks) {
    std::string seen;
    const bool ok = run_check(c, seen);
    report(c.id, ok, text + "  [" + seen.substr(0, seen.size() - 2) + "]");
  }
  std::string seen;
  run_check({"3c", "mtc_split_equal", {Rule::MTC}, V{"p1"}, V{"p2"}, {"pa", "pb"}}, seen);
  info("3c", "same instance with c(p2) = 150: " + seen.substr(0, seen.size() - 2));
}

void random_axioms() {
  Stopwatch sw;
  std::mt19937_64 rng(2024);
  std::size_t pr_ewt = 0, pr_ewtc = 0, spr_mt = 0, spr_mtc = 0, weak_gsc = 0, weak_applicable = 0;
  for (int t = 0; t < 500; ++t) {
    const auto s = random_instance(rng);
    pr_ewt += !check_pr(rule_fn(Rule::EwT), s).empty();
    pr_ewtc += !check_pr(rule_fn(Rule::EwTC), s).empty();
    spr_mt += !check_strong_pr(rule_fn(Rule::MT), s).empty();
    spr_mtc += !check_strong_pr(rule_fn(Rule::MTC), s).empty();
    const auto w = check_axiom(AxiomKind::WeakPr, Rule::GSC, s, rng);
    weak_applicable += w.applicable;
    weak_gsc += w.applicable && !w.holds;
  }
  const double t = sw.seconds();
  const bool ok = pr_ewt + pr_ewtc + spr_mt + spr_mtc + weak_gsc == 0 && t < 300;
  report("4", ok,
         "500 random instances: PR violations EwT " + std::to_string(pr_ewt) + " EwTC " + std::to_string(pr_ewtc) +
             ", Strong-PR violations MT " + std::to_string(spr_mt) + " MTC " + std::to_string(spr_mtc) +
             ", constructive Weak-PR failures GSC " + std::to_string(weak_gsc) + "/" +
             std::to_string(weak_applicable) + " (" + secs(t) + ")");
}

void feasibility_and_audits() {
  const std::vector<Rule> all{Rule::GS, Rule::GSC, Rule::GE, Rule::EwT, Rule::EwTC, Rule::MT, Rule::MTC, Rule::SNW};
  std::vector<BudgetingScenario> scenarios;
  for (const auto& f : proof_fixtures()) {
    scenarios.push_back(f.scenario);
    if (f.transformation) scenarios.push_back(f.transformation->result);
  }
  std::mt19937_64 rng(77);
  for (int t = 0; t < 300; ++t) scenarios.push_back(random_instance(rng));

  std::size_t runs = 0, over = 0, audits = 0, bad_audits = 0;
  std::string first_problem;
  for (const auto& s : scenarios) {
    for (Rule r : all) {
      if (r == Rule::SNW && s.num_projects() > 20) continue;
      const auto out = run_rule(r, s);
      ++runs;
      over += out.bundle(s).total_cost > s.budget();
      if (is_cstv(r)) {
        ++audits;
        const auto a = audit_trace(s, out);
        if (!a.ok()) {
          ++bad_audits;
          if (first_problem.empty()) first_problem = " first: " + a.problems.front();
        }
      }
    }
  }
  report("5", over == 0 && bad_audits == 0,
         std::to_string(runs) + " rule runs over budget: " + std::to_string(over) + "; " + std::to_string(audits) +
             " CSTV traces failing the audit: " + std::to_string(bad_audits) + first_problem);
}

void simulations() {
  Stopwatch sw;
  SpatialConfig one;
  one.seed = 1;
  const auto r1 = run_experiment(one, {Rule::GS, Rule::EwT, Rule::MT, Rule::MTC}, 100);
  SpatialConfig two;
  two.scenario = SpatialScenario::Two;
  two.seed = 2;
  const auto r2 = run_experiment(two, {Rule::GS, Rule::GSC}, 100);
  const double t = sw.seconds();

  const auto m = [&](Rule r) { return r1.mean(r, BallotMode::Cumulative); };
  const Rational ar_gs = m(Rule::GS).ar;
  const bool ar_ok = ar_gs > 2 * m(Rule::EwT).ar && ar_gs > 2 * m(Rule::MT).ar && ar_gs > 2 * m(Rule::MTC).ar;
  report("6a", ar_ok && t < 600,
         "scenario 1 mean AR: GS " + dec(ar_gs) + " vs EwT " + dec(m(Rule::EwT).ar) + " MT " + dec(m(Rule::MT).ar) +
             " MTC " + dec(m(Rule::MTC).ar) + " (all simulations " + secs(t) + ")");

  const Rational sub_gs = m(Rule::GS).shares.at(Region::Suburb);
  const Rational sub_mt = m(Rule::MT).shares.at(Region::Suburb);
  report("6b", sub_mt > sub_gs, "scenario 1 suburb share: MT " + dec(sub_mt) + " > GS " + dec(sub_gs));

  const Rational foep_gs = r2.mean(Rule::GS, BallotMode::Cumulative).shares.at(Region::RightDisc);
  const Rational foep_gsc = r2.mean(Rule::GSC, BallotMode::Cumulative).shares.at(Region::RightDisc);
  report("6c", foep_gs > foep_gsc,
         "scenario 2 share on expensive projects: GS " + dec(foep_gs) + " > GSC " + dec(foep_gsc));

  SpatialConfig dist = one;
  dist.weighting = BallotWeighting::Distance;
  const auto rd = run_experiment(dist, {Rule::GS, Rule::MT}, 30);
  info("6b", "with ballots proportional to distance (30 instances): suburb share MT " +
                 dec(rd.mean(Rule::MT, BallotMode::Cumulative).shares.at(Region::Suburb)) + " GS " +
                 dec(rd.mean(Rule::GS, BallotMode::Cumulative).shares.at(Region::Suburb)));
}

// Random approval profile; fixed_size draws every ballot with the same size.
std::pair<BudgetingScenario, std::vector<std::vector<std::string>>> approval_profile(std::mt19937_64& rng,
                                                                                     bool fixed_size) {
  const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, m)(rng);
  std::vector<Project> ps;
  for (std::size_t p = 0; p < m; ++p) ps.push_back({"p" + std::to_string(p + 1), std::uniform_int_distribution<Cost>(1, 6)(rng)});
  BudgetingScenario s(ps, std::uniform_int_distribution<Cost>(1, 15)(rng));
  std::vector<std::vector<std::string>> approvals;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::string> a;
    for (const auto& p : ps) a.push_back(p.id);
    std::shuffle(a.begin(), a.end(), rng);
    a.resize(fixed_size ? k : std::uniform_int_distribution<std::size_t>(1, m)(rng));
    s.add_voter(convert_approval(a));
    approvals.push_back(a);
  }
  return {s, approvals};
}

std::size_t wm_mismatches(std::mt19937_64& rng, bool fixed_size, std::string& example) {
  std::size_t mismatches = 0;
  for (int t = 0; t < 200; ++t) {
    const auto [s, approvals] = approval_profile(rng, fixed_size);
    const auto wm = make_bundle(s, run_wm(s.projects(), approvals, s.budget()).selected);
    const auto gs = run_greedy(s, PriorityKind::GS).bundle(s);
    if (wm != gs) {
      if (mismatches++ == 0) example = " e.g. WM " + to_string(wm) + " vs GS " + to_string(gs);
    }
  }
  return mismatches;
}

void wm_vs_gs() {
  std::mt19937_64 rng(55);
  std::string example, unused;
  const auto varying = wm_mismatches(rng, false, example);
  report("7", varying == 0,
         "WM == GS on converted approval ballots: " + std::to_string(varying) + "/200 profiles differ" + example);
  const auto fixed = wm_mismatches(rng, true, unused);
  info("7", "with equal-size ballots: " + std::to_string(fixed) + "/200 profiles differ");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void cli_determinism() {
  const fs::path tmp = fs::temp_directory_path() / ("cumpb_accept_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  const std::string cli = CUMPB_CLI;
  const std::string fixtures = CUMPB_FIXTURE_DIR;
  const std::vector<std::string> commands{
      "simulate --scenario 1 --instances 2 --seed 9 --out -",
      "simulate --scenario 2 --instances 2 --seed 9 --rules gs,gsc --out -",
      "aggregate --rule mt --input " + fixtures + "/ewt_merge.pb --trace - --stats",
      "axioms --check strong-pr --rule mtc --random 40 --seed 4",
  };
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string outs[2];
    int codes[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = tmp / ("run" + std::to_string(i) + "_" + std::to_string(run));
      codes[run] = std::system(("\"" + cli + "\" " + commands[i] + " > \"" + out.string() + "\" 2>&1").c_str());
      outs[run] = slurp(out);
    }
    const bool same = outs[0] == outs[1] && codes[0] == codes[1] && codes[0] == 0 && !outs[0].empty();
    if (!same) detail += " differs: " + commands[i] + ";";
    ok &= same;
  }
  fs::remove_all(tmp);
  report("8", ok, "CLI output byte-identical across two runs of " + std::to_string(commands.size()) + " commands" +
                      detail);
}

}  // namespace

int main() {
  try {
    example_rules();
    example_snw();
    fixture_checks();
    random_axioms();
    feasibility_and_audits();
    simulations();
    wm_vs_gs();
    cli_determinism();
  } catch (const std::exception& e) {
    std::cout << "FAIL  aborted: " << e.what() << std::endl;
    return 1;
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures == 0 ? 0 : 1;
}
