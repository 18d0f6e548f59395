#pragma once

// Score-report CSV parsing and the cleaning filters applied before ranking.
//
// CSV schema (one report per row, '\n' line endings, no quoting):
//   candidate_id,program_id,score,test_year,attempt_index,major_code,citizen
// citizen is 0, 1 or empty. Columns may appear in any order; unknown columns
// are ignored. candidate_id, program_id and score are required.

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "revrank/domain.hpp"

namespace revrank::ingest {

enum class MajorGroup {
  Accounting,
  Arts,
  Engineering,
  Finance,
  MathCS,
  OtherBusiness,
  SocialSciences,
  Sciences,
  Economics,
  Unknown,
};

enum class MajorGroup2 { BusinessEcon, Other };

std::string to_string(MajorGroup g);
std::string to_string(MajorGroup2 g);
std::optional<MajorGroup> major_group_from_string(const std::string& name);
std::optional<MajorGroup2> major_group2_from_string(const std::string& name);

/// Accounting, Finance, Economics and OtherBusiness coarsen to BusinessEcon.
MajorGroup2 coarsen(MajorGroup g);

/// Raw major code -> group. Lookups are case-insensitive; unknown codes map to Unknown.
class MajorMap {
 public:
  /// Built-in table (same content as data/major_groups.csv).
  static MajorMap builtin();
  /// CSV with header raw_code,group; lines starting with '#' are comments.
  static MajorMap load(const std::string& path);
  static MajorMap parse(std::istream& in, const std::string& source);

  [[nodiscard]] MajorGroup group(const std::optional<std::string>& raw_code) const;
  void set(const std::string& raw_code, MajorGroup group);

 private:
  std::vector<std::pair<std::string, MajorGroup>> entries_;  // lower-cased code, sorted
};

struct Subgroup {
  enum class Kind { Major10, Major2, Citizen, Period };
  enum class Period { Early, Late };

  Kind kind = Kind::Citizen;
  std::set<MajorGroup> majors;          // Major10
  MajorGroup2 major2 = MajorGroup2::Other;  // Major2
  bool citizen = true;                  // Citizen
  Period period = Period::Early;        // Period
  int boundary_year = 2011;             // Period: Early is test_year < boundary

  /// Parses "major10=Engineering,Finance", "major2=business|other",
  /// "citizen=0|1", "period=early|late[@YEAR]".
  static Subgroup parse(const std::string& text);
  [[nodiscard]] std::string describe() const;
};

struct IngestConfig {
  ScoreGrid grid;
  std::size_t min_reports_per_program = 122;
  bool best_attempt_only = false;
  std::optional<std::pair<int, int>> year_range;
  std::optional<Subgroup> subgroup;
  bool strict_cap = false;
  std::size_t max_selections = 5;
};

/// Reading failures carry every offending line at once.
class ParseError : public DataError {
 public:
  explicit ParseError(std::vector<std::string> errors);
  [[nodiscard]] const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

inline constexpr const char* kCsvHeader =
    "candidate_id,program_id,score,test_year,attempt_index,major_code,citizen";

/// One ScoreReport per data row. Throws ParseError (missing column, bad
/// numbers; messages name the 1-based line) or DataError on I/O failure.
Dataset parse_csv(const std::string& path, const IngestConfig& config = {});
Dataset parse_csv(std::istream& in, const IngestConfig& config = {}, const std::string& source = "<stream>");

void write_csv(const Dataset& d, std::ostream& out);
void write_csv(const Dataset& d, const std::string& path);

/// Collapses repeated (candidate, attempt, program) rows; the first one wins.
Dataset deduplicate(const Dataset& d);

/// Keeps each candidate's best-scoring attempt; equal scores keep the later attempt.
Dataset best_attempt_filter(const Dataset& d);

/// Drops programs with fewer than threshold reports. Single pass.
Dataset min_reports_filter(const Dataset& d, std::size_t threshold);

Dataset year_range_filter(const Dataset& d, int min_year, int max_year);

Dataset subgroup_filter(const Dataset& d, const Subgroup& subgroup, const MajorMap& majors = MajorMap::builtin());

/// Cleaning pipeline: dedupe, year range, subgroup, best attempt, cap check
/// (throws DataError under strict_cap), then min-reports.
Dataset apply_filters(const Dataset& d, const IngestConfig& config, const MajorMap& majors = MajorMap::builtin());

}  // namespace revrank::ingest
