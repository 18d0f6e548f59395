#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace revrank {

/// Raised when input data (files, configs, rows) cannot be used.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Opaque program identifier. Two programs at one university are distinct ids.
struct ProgramId {
  std::string value;

  ProgramId() = default;
  explicit ProgramId(std::string v) : value(std::move(v)) {}

  [[nodiscard]] bool empty() const { return value.empty(); }
  auto operator<=>(const ProgramId&) const = default;
  bool operator==(const ProgramId&) const = default;
};

/// Admissible test scores: min, min + step, ..., max.
class ScoreGrid {
 public:
  ScoreGrid() = default;
  ScoreGrid(int min, int max, int step);

  [[nodiscard]] int min() const { return min_; }
  [[nodiscard]] int max() const { return max_; }
  [[nodiscard]] int step() const { return step_; }
  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] bool contains(int score) const;
  /// Dense index of an on-grid score; throws std::out_of_range otherwise.
  [[nodiscard]] std::size_t index_of(int score) const;
  [[nodiscard]] int score_at(std::size_t index) const;
  [[nodiscard]] std::vector<int> scores() const;

  bool operator==(const ScoreGrid&) const = default;

 private:
  int min_ = 200;
  int max_ = 800;
  int step_ = 10;
};

struct ScoreReport {
  std::string candidate_id;
  ProgramId program_id;
  int score = 0;
  int test_year = 0;
  int attempt_index = 1;
  std::optional<std::string> major_code;
  std::optional<bool> citizen;

  bool operator==(const ScoreReport&) const = default;
};

/// Immutable collection of score reports with a dense program index.
///
/// The program index is sorted by id, so it does not depend on row order.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<ScoreReport> reports, ScoreGrid grid = {});

  [[nodiscard]] std::span<const ScoreReport> reports() const { return reports_; }
  [[nodiscard]] std::size_t size() const { return reports_.size(); }
  [[nodiscard]] bool empty() const { return reports_.empty(); }
  [[nodiscard]] const ScoreGrid& score_grid() const { return grid_; }

  [[nodiscard]] std::size_t program_count() const { return programs_.size(); }
  [[nodiscard]] const ProgramId& program_id(std::size_t index) const { return programs_.at(index); }
  [[nodiscard]] std::span<const ProgramId> programs() const { return programs_; }
  [[nodiscard]] std::optional<std::size_t> index_of(const ProgramId& id) const;

  bool operator==(const Dataset& other) const {
    return grid_ == other.grid_ && reports_ == other.reports_;
  }

 private:
  std::vector<ScoreReport> reports_;
  ScoreGrid grid_;
  std::vector<ProgramId> programs_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class Severity { Error, Warning };

struct Violation {
  std::size_t row = 0;
  std::string rule;
  std::string message;
  Severity severity = Severity::Error;
};

struct ValidationOptions {
  std::size_t max_selections = 5;
  /// When false, selection-cap violations are reported as warnings.
  bool strict_cap = false;
};

/// Checks every ScoreReport/Dataset invariant. Violations are data, not failures.
std::vector<Violation> validate_dataset(const Dataset& d, const ValidationOptions& options = {});

bool has_errors(std::span<const Violation> violations);

enum class RankMethod { M, MPlusRecursive, Tournament, Beta, External };

std::string to_string(RankMethod method);
RankMethod rank_method_from_string(const std::string& text);

struct RankingEntry {
  ProgramId program_id;
  double metric_value = 0.0;
  int rank = 0;
  /// Method-specific side value (e.g. the tail m+ count for the recursive ranker).
  std::optional<double> detail;
};

/// Ordered program list. Ranks are 1..n in entry order; metric is non-increasing.
/// Ties are preserved in tie_groups (ranks sharing one metric value).
class Ranking {
 public:
  Ranking() = default;
  Ranking(std::vector<RankingEntry> entries, RankMethod method);

  [[nodiscard]] std::span<const RankingEntry> entries() const { return entries_; }
  [[nodiscard]] RankMethod method() const { return method_; }
  [[nodiscard]] const std::vector<std::vector<int>>& tie_groups() const { return tie_groups_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] bool empty() const { return entries_.empty(); }

  /// First k entries (all of them when k >= size()).
  [[nodiscard]] Ranking top(std::size_t k) const;

 private:
  std::vector<RankingEntry> entries_;
  RankMethod method_ = RankMethod::External;
  std::vector<std::vector<int>> tie_groups_;
};

struct ScoredProgram {
  ProgramId program_id;
  double metric = 0.0;
  /// Secondary key, larger first; used only to order equal metrics.
  double tie_break = 0.0;
  std::optional<double> detail;
};

/// Sorts by metric desc, then tie_break desc, then program id asc, and assigns ranks.
Ranking make_ranking(std::vector<ScoredProgram> scored, RankMethod method);

}  // namespace revrank
