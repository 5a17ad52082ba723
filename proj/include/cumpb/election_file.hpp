#pragma once

// Semicolon-separated election files, pabulib-flavored:
//
//   META
//   key;value
//   budget;10
//   vote_type;cumulative
//   PROJECTS
//   project_id;cost
//   p1;5
//   VOTES
//   voter_id;vote;points
//   v1;p1,p2;1/2,0.5
//
// Header rows are optional; when present, columns are located by name so
// extra pabulib columns are ignored. Approval rows omit points; ordinal rows
// list the ranking in `vote`.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cumpb/model.hpp"

namespace cumpb {

enum class VoteType { Cumulative, Approval, Ordinal };
std::string to_string(VoteType type);
VoteType parse_vote_type(std::string_view name);

class ParseError : public ModelError {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ParseOptions {
  bool normalize = false;  // rescale cumulative points to sum 1 instead of rejecting
};

struct ElectionFile {
  std::vector<std::pair<std::string, std::string>> meta;  // file order
  VoteType vote_type = VoteType::Cumulative;
  BudgetingScenario scenario;                 // converted to cumulative ballots
  std::vector<std::vector<std::string>> votes;  // raw `vote` column per voter

  /// Empty when absent.
  std::string meta_value(std::string_view key) const;
};

ElectionFile parse_election(std::string_view text, const ParseOptions& options = {});
ElectionFile read_election(const std::filesystem::path& path, const ParseOptions& options = {});

/// Cumulative file with exact weights ("1/3"). `meta` entries other than the
/// counts, budget and vote_type are carried over.
std::string serialize_election(const BudgetingScenario& scenario,
                               const std::vector<std::pair<std::string, std::string>>& meta = {});

/// Approval file; each voter's vote is her positive-support set.
std::string serialize_approval(const BudgetingScenario& scenario);

/// Converted copy: vote_type becomes cumulative and `converted_from` records
/// the original type.
std::string convert_to_cumulative(const ElectionFile& file);

}  // namespace cumpb
