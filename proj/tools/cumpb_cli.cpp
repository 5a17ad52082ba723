// cumpb: aggregate, simulate, check axioms, convert election files and run the
// proof fixtures. Exit codes: 0 ok, 1 violation or failed check, 2 usage or
// input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include "cumpb/axioms.hpp"
#include "cumpb/baselines.hpp"
#include "cumpb/election_file.hpp"
#include "cumpb/fixtures.hpp"
#include "cumpb/rules.hpp"
#include "cumpb/simulate.hpp"

using namespace cumpb;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Writes to `path`, or stdout for "-".
template <class Fn>
void write_output(const std::string& path, Fn&& fn) {
  if (path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  fn(out);
}

std::string ids_csv(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + ids[i];
  return out;
}

// ---- aggregate ----

struct AggregateOptions {
  std::string rule;
  std::string input;
  std::string trace;
  bool stats = false;
  bool normalize = false;
};

int cmd_aggregate(const AggregateOptions& o) {
  const ElectionFile file = read_election(o.input, {o.normalize});
  const auto& s = file.scenario;
  RuleOutcome outcome;
  std::string rule_name;
  if (lower(o.rule) == "wm") {
    std::vector<std::vector<std::string>> approvals;
    if (file.vote_type == VoteType::Approval) {
      approvals = file.votes;
    } else {
      for (std::size_t j = 0; j < s.num_voters(); ++j) {
        approvals.emplace_back();
        for (std::size_t p = 0; p < s.num_projects(); ++p) {
          if (s.weight(j, p) > 0) approvals.back().push_back(s.projects()[p].id);
        }
      }
    }
    outcome = run_wm(s.projects(), approvals, s.budget());
    rule_name = "WM";
  } else {
    const Rule rule = parse_rule(o.rule);
    outcome = run_rule(rule, s);
    rule_name = to_string(rule);
  }
  const Bundle b = make_bundle(s, outcome.selected);

  std::cout << "rule: " << rule_name << "\n"
            << "bundle: " << to_string(b) << "\n"
            << "cost: " << b.total_cost << "\n"
            << "budget: " << s.budget() << "\n";
  if (o.stats) {
    const auto st = compute_stats(s, b, {});
    std::cout << "VS: " << format_decimal(st.vs, 6) << "\n"
              << "AR: " << format_decimal(st.ar, 6) << "\n"
              << "AC: " << format_decimal(st.ac, 6) << "\n";
  }
  if (!o.trace.empty()) {
    write_output(o.trace, [&](std::ostream& out) { write_trace_log(out, s, outcome.trace); });
  }
  return kOk;
}

// ---- simulate ----

struct SimulateOptions {
  int scenario = 1;
  std::size_t instances = 1;
  std::uint64_t seed = 0;
  std::size_t voters = 100;
  std::size_t projects = 100;
  Cost budget = 500000;
  std::size_t k = 10;
  std::string rules = "gs,gsc,ewt,ewtc,mt,mtc";
  std::string weighting = "inverse";
  std::string out = "-";
  unsigned threads = 0;
};

int cmd_simulate(const SimulateOptions& o) {
  SpatialConfig cfg;
  cfg.scenario = o.scenario == 1 ? SpatialScenario::One : SpatialScenario::Two;
  cfg.voters = o.voters;
  cfg.projects = o.projects;
  cfg.budget = o.budget;
  cfg.seed = o.seed;
  cfg.k = o.k;
  cfg.weighting = o.weighting == "distance" ? BallotWeighting::Distance : BallotWeighting::Inverse;
  const auto rules = parse_rule_list(o.rules);
  const auto result = run_experiment(cfg, rules, o.instances, o.threads);
  write_output(o.out, [&](std::ostream& out) { write_csv(out, result); });
  if (o.out != "-") {
    const char* cluster = o.scenario == 1 ? "suburbs" : "FoEP";
    std::cout << "rule  mode        VS        AR        AC            " << cluster << "\n";
    for (Rule r : rules) {
      for (BallotMode m : {BallotMode::Cumulative, BallotMode::Approval}) {
        const auto st = result.mean(r, m);
        const auto share = st.shares.at(o.scenario == 1 ? Region::Suburb : Region::RightDisc);
        std::cout << to_string(r) << std::string(6 - to_string(r).size(), ' ') << to_string(m)
                  << std::string(12 - to_string(m).size(), ' ') << format_decimal(st.vs, 6) << "  "
                  << format_decimal(st.ar, 6) << "  " << format_decimal(st.ac, 2) << "  " << format_decimal(share, 6)
                  << "\n";
      }
    }
  }
  return kOk;
}

// ---- axioms ----

struct AxiomOptions {
  std::string check;
  std::string rule;
  std::string input;
  std::size_t random = 0;
  std::uint64_t seed = 0;
};

int cmd_axioms(const AxiomOptions& o) {
  const AxiomKind kind = parse_axiom(o.check);
  const Rule rule = parse_rule(o.rule);
  const std::string label = to_string(kind) + " " + to_string(rule);

  if (!o.input.empty()) {
    const auto s = read_election(o.input).scenario;
    std::mt19937_64 rng(o.seed);
    const auto c = check_axiom(kind, rule, s, rng);
    if (!c.applicable) {
      std::cout << label << ": not applicable (" << c.detail << ")\n";
      return kOk;
    }
    std::cout << label << ": " << (c.holds ? "holds" : "violated") << "\n";
    if (!c.detail.empty()) std::cout << c.detail << "\n";
    return c.holds ? kOk : kViolation;
  }

  std::size_t applicable = 0, violations = 0;
  for (std::size_t t = 0; t < o.random; ++t) {
    std::mt19937_64 rng(instance_seed(o.seed, t));
    const auto s = random_instance(rng);
    const auto c = check_axiom(kind, rule, s, rng);
    if (!c.applicable) continue;
    ++applicable;
    if (!c.holds) {
      ++violations;
      if (violations <= 10) std::cout << "trial " << t << ": " << c.detail << "\n";
    }
  }
  std::cout << label << ": trials " << o.random << " applicable " << applicable << " violations " << violations
            << "\n";
  return violations == 0 ? kOk : kViolation;
}

// ---- convert ----

int cmd_convert(const std::string& from, const std::string& input, const std::string& out) {
  const VoteType type = parse_vote_type(from);
  if (type == VoteType::Cumulative) throw UsageError("--from must be approval or ordinal");
  const ElectionFile file = read_election(input);
  if (file.vote_type != type) {
    throw UsageError("'" + input + "' has vote_type " + to_string(file.vote_type) + ", not " + from);
  }
  const std::string text = convert_to_cumulative(file);
  write_output(out, [&](std::ostream& os) { os << text; });
  return kOk;
}

// ---- fixtures ----

void export_fixtures(const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& f : proof_fixtures()) {
    auto write = [&](const fs::path& path, const std::string& text) {
      std::ofstream out(path, std::ios::binary);
      if (!out) throw UsageError("cannot write '" + path.string() + "'");
      out << text;
    };
    write(dir / (f.name + ".pb"), serialize_election(f.scenario, {{"description", f.description}}));
    if (f.transformation) write(dir / (f.name + ".after.pb"), serialize_election(f.transformation->result));
    std::string expected = "rule;before;after\n";
    for (const auto& e : f.expectations) {
      expected += to_string(e.rule) + ";" + ids_csv(e.before) + ";" + (e.after ? ids_csv(*e.after) : "") + "\n";
    }
    write(dir / (f.name + ".expected"), expected);
  }
}

int cmd_fixtures(bool list, bool run, const std::string& only, const std::string& export_dir) {
  if (list) {
    for (const auto& f : proof_fixtures()) std::cout << f.name << ": " << f.description << "\n";
  }
  if (!export_dir.empty()) export_fixtures(export_dir);
  if (!run) return kOk;

  std::size_t failed = 0;
  for (const auto& f : proof_fixtures()) {
    if (!only.empty() && f.name != only) continue;
    for (const auto& r : run_fixture(f)) {
      std::cout << (r.ok ? "ok   " : "FAIL ") << r.fixture << " " << to_string(r.rule) << " " << to_string(r.before);
      if (r.after) std::cout << " -> " << to_string(*r.after);
      if (!r.ok) std::cout << "  (" << r.message << ")";
      std::cout << "\n";
      failed += !r.ok;
    }
  }
  return failed == 0 ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Participatory budgeting with cumulative ballots"};
  app.require_subcommand(1);

  AggregateOptions agg;
  auto* aggregate = app.add_subcommand("aggregate", "Run one rule on an election file");
  aggregate->add_option("--rule", agg.rule, "gs|gsc|ge|ewt|ewtc|mt|mtc|snw|wm")->required();
  aggregate->add_option("--input", agg.input, "Election file")->required();
  aggregate->add_option("--trace", agg.trace, "Write the transfer trace log here ('-' for stdout)");
  aggregate->add_flag("--stats", agg.stats, "Print VS, AR and AC");
  aggregate->add_flag("--normalize", agg.normalize, "Rescale cumulative points that do not sum to 1");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "2-D Euclidean simulation, CSV of per-instance statistics");
  simulate->add_option("--scenario", sim.scenario, "1 (center + suburbs) or 2 (cheap/expensive discs)")
      ->check(CLI::IsMember({1, 2}));
  simulate->add_option("--instances", sim.instances)->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--voters", sim.voters)->check(CLI::PositiveNumber);
  simulate->add_option("--projects", sim.projects)->check(CLI::PositiveNumber);
  simulate->add_option("--budget", sim.budget)->check(CLI::PositiveNumber);
  simulate->add_option("--k", sim.k)->check(CLI::PositiveNumber);
  simulate->add_option("--rules", sim.rules, "Comma-separated rule list");
  simulate->add_option("--weighting", sim.weighting, "inverse (default) or distance")
      ->check(CLI::IsMember({"inverse", "distance"}));
  simulate->add_option("--out", sim.out, "CSV path ('-' for stdout)");
  simulate->add_option("--threads", sim.threads, "0 = hardware concurrency");

  AxiomOptions ax;
  auto* axioms = app.add_subcommand("axioms", "Check an axiom on a file or on random instances");
  axioms->add_option("--check", ax.check, "splitting|merging|support|weak-pr|pr|strong-pr")->required();
  axioms->add_option("--rule", ax.rule)->required();
  auto* ax_input = axioms->add_option("--input", ax.input);
  auto* ax_random = axioms->add_option("--random", ax.random, "Number of random trials")->check(CLI::PositiveNumber);
  axioms->add_option("--seed", ax.seed);
  ax_input->excludes(ax_random);
  ax_random->excludes(ax_input);

  std::string conv_from, conv_input, conv_out;
  auto* convert = app.add_subcommand("convert", "Convert approval or ordinal votes to cumulative ballots");
  convert->add_option("--from", conv_from)->required()->check(CLI::IsMember({"approval", "ordinal"}));
  convert->add_option("--input", conv_input)->required();
  convert->add_option("--out", conv_out)->required();

  bool fx_list = false, fx_run = false;
  std::string fx_only, fx_export;
  auto* fixtures = app.add_subcommand("fixtures", "Proof instances with known outcomes");
  fixtures->add_flag("--list", fx_list);
  fixtures->add_flag("--run", fx_run);
  fixtures->add_option("--name", fx_only, "Run only this fixture");
  fixtures->add_option("--export", fx_export, "Write election and expectation files to this directory");

  try {
    app.parse(argc, argv);
    if (*axioms && ax.input.empty() && ax.random == 0) throw CLI::ValidationError("axioms needs --input or --random");
    if (*fixtures && !fx_list && !fx_run && fx_export.empty()) {
      throw CLI::ValidationError("fixtures needs --list, --run or --export");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*aggregate) return cmd_aggregate(agg);
    if (*simulate) return cmd_simulate(sim);
    if (*axioms) return cmd_axioms(ax);
    if (*convert) return cmd_convert(conv_from, conv_input, conv_out);
    if (*fixtures) return cmd_fixtures(fx_list, fx_run, fx_only, fx_export);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
