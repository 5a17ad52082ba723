#include "cumpb/election_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace cumpb {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct Line {
  std::size_t number;
  std::vector<std::string> fields;
  std::string text;  // whole trimmed line
};

// Column positions of one section, from its header row or the defaults.
struct Columns {
  std::map<std::string, std::size_t> index;

  std::optional<std::size_t> find(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

Columns columns_for(std::vector<Line>& rows, const std::string& first, std::vector<std::string> defaults) {
  Columns cols;
  if (!rows.empty() && lower(rows.front().fields.at(0)) == first) {
    const auto& header = rows.front().fields;
    for (std::size_t i = 0; i < header.size(); ++i) cols.index.emplace(lower(header[i]), i);
    rows.erase(rows.begin());
  } else {
    for (std::size_t i = 0; i < defaults.size(); ++i) cols.index.emplace(defaults[i], i);
  }
  return cols;
}

const std::string& field(const Line& line, std::size_t column, const char* what) {
  if (column >= line.fields.size()) throw ParseError(line.number, std::string("missing ") + what + " column");
  return line.fields[column];
}

Cost parse_cost(const Line& line, const std::string& text) {
  Rational value;
  try {
    value = parse_rational(text);
  } catch (const ModelError& e) {
    throw ParseError(line.number, std::string("bad cost: ") + e.what());
  }
  if (value.get_den() != 1 || !value.get_num().fits_slong_p()) {
    throw ParseError(line.number, "cost must be an integer: '" + text + "'");
  }
  return value.get_num().get_si();
}

std::string render_meta(const std::vector<std::pair<std::string, std::string>>& meta) {
  std::string out = "META\nkey;value\n";
  for (const auto& [k, v] : meta) out += k + ";" + v + "\n";
  return out;
}

std::vector<std::pair<std::string, std::string>> merged_meta(
    const BudgetingScenario& s, VoteType type, const std::vector<std::pair<std::string, std::string>>& extra) {
  std::vector<std::pair<std::string, std::string>> meta = {
      {"num_projects", std::to_string(s.num_projects())},
      {"num_votes", std::to_string(s.num_voters())},
      {"budget", std::to_string(s.budget())},
      {"vote_type", to_string(type)}};
  for (const auto& kv : extra) {
    if (kv.first == "num_projects" || kv.first == "num_votes" || kv.first == "budget" || kv.first == "vote_type") continue;
    meta.push_back(kv);
  }
  return meta;
}

std::string render_projects(const BudgetingScenario& s) {
  std::string out = "PROJECTS\nproject_id;cost\n";
  for (const auto& p : s.projects()) out += p.id + ";" + std::to_string(p.cost) + "\n";
  return out;
}

std::string voter_id(const BudgetingScenario& s, std::size_t j) {
  const auto& id = s.voter_ids()[j];
  return id.empty() ? "v" + std::to_string(j + 1) : id;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : ModelError(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

std::string to_string(VoteType type) {
  switch (type) {
    case VoteType::Cumulative: return "cumulative";
    case VoteType::Approval: return "approval";
    case VoteType::Ordinal: return "ordinal";
  }
  return "?";
}

VoteType parse_vote_type(std::string_view name) {
  const auto n = lower(trim(name));
  if (n == "cumulative") return VoteType::Cumulative;
  if (n == "approval") return VoteType::Approval;
  if (n == "ordinal") return VoteType::Ordinal;
  throw ModelError("unknown vote_type '" + std::string(name) + "'");
}

std::string ElectionFile::meta_value(std::string_view key) const {
  for (const auto& [k, v] : meta) {
    if (k == key) return v;
  }
  return {};
}

ElectionFile parse_election(std::string_view text, const ParseOptions& options) {
  enum class Section { None, Meta, Projects, Votes };
  std::map<Section, std::vector<Line>> rows;
  std::set<Section> seen;
  Section current = Section::None;

  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    std::string_view raw = text.substr(start, end == std::string_view::npos ? end : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (number == 1 && raw.substr(0, 3) == "\xEF\xBB\xBF") raw.remove_prefix(3);
    const auto line = trim(raw);
    if (line.empty()) continue;

    const auto name = lower(line);
    Section next = Section::None;
    if (name == "meta") next = Section::Meta;
    if (name == "projects") next = Section::Projects;
    if (name == "votes") next = Section::Votes;
    if (next != Section::None) {
      if (!seen.insert(next).second) throw ParseError(number, "duplicate section " + std::string(line));
      current = next;
      continue;
    }
    if (current == Section::None) throw ParseError(number, "content before the first section");
    rows[current].push_back({number, split(line, ';'), std::string(line)});
  }
  for (auto [section, name] : {std::pair{Section::Meta, "META"}, std::pair{Section::Projects, "PROJECTS"},
                               std::pair{Section::Votes, "VOTES"}}) {
    if (!seen.count(section)) throw ParseError(0, std::string("missing section ") + name);
  }

  ElectionFile file;

  // META
  auto& meta_rows = rows[Section::Meta];
  columns_for(meta_rows, "key", {"key", "value"});
  std::optional<Cost> budget;
  std::optional<std::size_t> declared_projects, declared_votes;
  for (const auto& line : meta_rows) {
    if (line.fields.size() < 2) throw ParseError(line.number, "META row needs key;value");
    const auto& key = line.fields[0];
    // values may themselves contain ';'
    std::string value(line.fields.size() > 2 ? trim(std::string_view(line.text).substr(line.text.find(';') + 1))
                                              : std::string_view(line.fields[1]));
    for (const auto& [k, v] : file.meta) {
      if (k == key) throw ParseError(line.number, "duplicate META key '" + key + "'");
    }
    file.meta.emplace_back(key, value);
    if (key == "budget") {
      budget = parse_cost(line, value);
    } else if (key == "vote_type") {
      try {
        file.vote_type = parse_vote_type(value);
      } catch (const ModelError& e) {
        throw ParseError(line.number, e.what());
      }
    } else if (key == "num_projects" || key == "num_votes") {
      const Cost count = parse_cost(line, value);
      if (count < 0) throw ParseError(line.number, key + " must be nonnegative");
      (key == "num_projects" ? declared_projects : declared_votes) = static_cast<std::size_t>(count);
    }
  }
  if (!budget) throw ParseError(0, "META lacks budget");

  // PROJECTS
  auto& project_rows = rows[Section::Projects];
  const auto pcols = columns_for(project_rows, "project_id", {"project_id", "cost"});
  const auto id_col = pcols.find("project_id");
  const auto cost_col = pcols.find("cost");
  if (!id_col || !cost_col) throw ParseError(0, "PROJECTS header needs project_id and cost");
  std::vector<Project> projects;
  std::set<std::string> project_ids;
  for (const auto& line : project_rows) {
    const auto& id = field(line, *id_col, "project_id");
    if (id.empty()) throw ParseError(line.number, "empty project id");
    if (!project_ids.insert(id).second) throw ParseError(line.number, "duplicate project id '" + id + "'");
    const Cost cost = parse_cost(line, field(line, *cost_col, "cost"));
    if (cost <= 0) throw ParseError(line.number, "cost of '" + id + "' must be positive");
    projects.push_back({id, cost});
  }
  if (declared_projects && *declared_projects != projects.size()) {
    throw ParseError(0, "num_projects is " + std::to_string(*declared_projects) + " but PROJECTS lists " +
                            std::to_string(projects.size()));
  }
  const std::size_t m = projects.size();
  file.scenario = BudgetingScenario(std::move(projects), *budget);

  // VOTES
  auto& vote_rows = rows[Section::Votes];
  const auto vcols = columns_for(vote_rows, "voter_id", {"voter_id", "vote", "points"});
  const auto voter_col = vcols.find("voter_id");
  const auto vote_col = vcols.find("vote");
  const auto points_col = vcols.find("points");
  if (!voter_col || !vote_col) throw ParseError(0, "VOTES header needs voter_id and vote");
  std::set<std::string> voter_ids;
  for (const auto& line : vote_rows) {
    const auto& voter = field(line, *voter_col, "voter_id");
    if (voter.empty()) throw ParseError(line.number, "empty voter id");
    if (!voter_ids.insert(voter).second) throw ParseError(line.number, "duplicate voter id '" + voter + "'");
    auto vote = split(field(line, *vote_col, "vote"), ',');
    if (vote.size() == 1 && vote[0].empty()) throw ParseError(line.number, "empty vote");
    std::set<std::string> unique;
    for (const auto& id : vote) {
      if (!file.scenario.has_project(id)) throw ParseError(line.number, "unknown project '" + id + "'");
      if (!unique.insert(id).second) throw ParseError(line.number, "project '" + id + "' listed twice");
    }

    CumulativeBallot ballot;
    switch (file.vote_type) {
      case VoteType::Cumulative: {
        if (!points_col) throw ParseError(line.number, "cumulative vote without points");
        const auto points = split(field(line, *points_col, "points"), ',');
        if (points.size() != vote.size()) {
          throw ParseError(line.number, std::to_string(vote.size()) + " projects but " +
                                            std::to_string(points.size()) + " points");
        }
        Rational total = 0;
        for (std::size_t i = 0; i < vote.size(); ++i) {
          Rational w;
          try {
            w = parse_rational(points[i]);
          } catch (const ModelError& e) {
            throw ParseError(line.number, e.what());
          }
          if (w < 0) throw ParseError(line.number, "negative points for '" + vote[i] + "'");
          total += w;
          ballot.weights.emplace(vote[i], w);
        }
        if (total != 1) {
          if (!options.normalize || total == 0) {
            throw ParseError(line.number, "points sum to " + format_rational(total) + ", not 1");
          }
          for (auto& [id, w] : ballot.weights) w /= total;
        }
        break;
      }
      case VoteType::Approval:
        ballot = convert_approval(vote);
        break;
      case VoteType::Ordinal:
        if (m == 1) {
          ballot.weights.emplace(vote[0], Rational(1));
        } else {
          ballot = convert_ordinal(vote, borda_scoring(vote.size(), m));
        }
        break;
    }
    file.scenario.add_voter(ballot, voter);
    file.votes.push_back(std::move(vote));
  }
  if (declared_votes && *declared_votes != file.votes.size()) {
    throw ParseError(0, "num_votes is " + std::to_string(*declared_votes) + " but VOTES lists " +
                            std::to_string(file.votes.size()));
  }

  if (file.vote_type != VoteType::Cumulative) file.meta.emplace_back("converted_from", to_string(file.vote_type));

  const auto report = validate_scenario(file.scenario);
  if (!report.ok()) throw ParseError(0, report.to_string());
  return file;
}

ElectionFile read_election(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_election(buf.str(), options);
  } catch (const ParseError& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

std::string serialize_election(const BudgetingScenario& s,
                               const std::vector<std::pair<std::string, std::string>>& meta) {
  std::string out = render_meta(merged_meta(s, VoteType::Cumulative, meta));
  out += render_projects(s);
  out += "VOTES\nvoter_id;vote;points\n";
  for (std::size_t j = 0; j < s.num_voters(); ++j) {
    std::string vote, points;
    for (std::size_t p = 0; p < s.num_projects(); ++p) {
      if (s.weight(j, p) == 0) continue;
      if (!vote.empty()) {
        vote += ',';
        points += ',';
      }
      vote += s.projects()[p].id;
      points += format_rational(s.weight(j, p));
    }
    out += voter_id(s, j) + ";" + vote + ";" + points + "\n";
  }
  return out;
}

std::string serialize_approval(const BudgetingScenario& s) {
  std::string out = render_meta(merged_meta(s, VoteType::Approval, {}));
  out += render_projects(s);
  out += "VOTES\nvoter_id;vote\n";
  for (std::size_t j = 0; j < s.num_voters(); ++j) {
    std::string vote;
    for (std::size_t p = 0; p < s.num_projects(); ++p) {
      if (s.weight(j, p) == 0) continue;
      if (!vote.empty()) vote += ',';
      vote += s.projects()[p].id;
    }
    out += voter_id(s, j) + ";" + vote + "\n";
  }
  return out;
}

std::string convert_to_cumulative(const ElectionFile& file) {
  auto meta = file.meta;
  if (file.vote_type != VoteType::Cumulative && file.meta_value("converted_from").empty()) {
    meta.emplace_back("converted_from", to_string(file.vote_type));
  }
  return serialize_election(file.scenario, meta);
}

}  // namespace cumpb
