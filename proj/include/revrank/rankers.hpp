#pragma once

// Non-parametric rankers: selection shares by score, the m-measure and its
// recursive m+ variant, and the score-adjusted pairwise tournament.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "revrank/domain.hpp"
#include "revrank/simgen.hpp"

namespace revrank::rankers {

enum class Normalization {
  /// g[c][s] = share of candidates at s selecting c; columns may sum past 1.
  CandidateShare,
  /// g[c][s] = share of the reports at s that went to c; non-empty columns sum to 1.
  ReportShare,
};

std::string to_string(Normalization n);
Normalization normalization_from_string(const std::string& text);

/// Selection shares per program and grid score.
///
/// The counting unit is a distinct (candidate, score): repeated rows and
/// several sittings at one score count once.
struct ScoreDistribution {
  std::vector<ProgramId> programs;
  std::vector<int> scores;                  // grid scores, ascending
  std::vector<std::vector<double>> g;       // [program][score]
  std::vector<std::size_t> candidates_per_score;
  std::vector<bool> empty_column;           // no candidates at that score
  Normalization normalization = Normalization::CandidateShare;

  [[nodiscard]] std::size_t program_count() const { return programs.size(); }
  [[nodiscard]] std::size_t score_count() const { return scores.size(); }
  [[nodiscard]] std::optional<std::size_t> index_of(const ProgramId& id) const;
};

ScoreDistribution score_distribution(const Dataset& d, Normalization normalization = Normalization::CandidateShare);

/// gbar[c][s] = g[c][s] + sum of g[c'][s] over c' in ranked_above.
struct TailDistribution {
  std::vector<std::vector<double>> gbar;
  std::vector<std::size_t> ranked_above;
};

TailDistribution tail_distribution(const ScoreDistribution& dist, std::span<const std::size_t> ranked_above);

/// Sum over score pairs s < s' of (row[s'] - row[s]) * (s' - s), skipping empty columns.
double m_measure(const ScoreDistribution& dist, std::span<const double> row);
double m_measure(const ScoreDistribution& dist, std::size_t program);

/// Differences within this tolerance are treated as zero by m_plus_count.
inline constexpr double kTrendEpsilon = 1e-12;

/// Number of score pairs s < s' with row[s'] - row[s] > kTrendEpsilon.
std::int64_t m_plus_count(const ScoreDistribution& dist, std::span<const double> row);
std::int64_t m_plus_count(const ScoreDistribution& dist, std::size_t program);

/// Programs by m_measure descending, then id.
Ranking rank_by_m(const ScoreDistribution& dist);

/// Repeatedly places the program with the largest m+ count on its tail
/// (its own row plus everything already placed); ties go to the larger
/// m_measure, then the smaller id. Tail counts are not monotone down the
/// list, so metric is n - position and the tail count is kept in detail.
Ranking rank_by_m_plus(const ScoreDistribution& dist);

struct TournamentResult {
  std::vector<ProgramId> programs;
  /// points[a][b] = |R(a, b)|: candidates choosing a but not b who outscore
  /// some candidate choosing b but not a.
  std::vector<std::vector<std::int64_t>> points;
  std::vector<int> wins;
  std::vector<std::int64_t> total_points;
  /// Wins descending, then total points, then id.
  Ranking ranking;
};

/// Counting unit is a test sitting (candidate, attempt). With per_year the
/// comparison is restricted to sittings from the same test year.
TournamentResult tournament(const Dataset& d, bool per_year = true);

/// Selected program indices at one score. Entries may repeat (multiset).
struct ScoredSelection {
  int score = 0;
  std::vector<std::size_t> programs;
};

struct ComparisonTally {
  std::int64_t correct = 0;
  std::int64_t incorrect = 0;

  /// correct / incorrect; +inf when incorrect is 0 and correct > 0, NaN for 0/0.
  [[nodiscard]] double ratio() const;
};

/// For every pair of students with s_j < s_i and programs a chosen only by i,
/// b chosen only by j, infers a above b and scores it against the truth.
ComparisonTally pairwise_correctness_ratio(std::span<const ScoredSelection> selections,
                                           const simgen::GroundTruth& truth);

}  // namespace revrank::rankers
