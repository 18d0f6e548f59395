#pragma once

// Rank correlation, tail-dominance checks and plot-ready TSV exports.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "revrank/domain.hpp"
#include "revrank/rankers.hpp"
#include "revrank/simgen.hpp"

namespace revrank::stats {

/// Spearman correlation over the programs both rankings contain: Pearson
/// correlation of average ranks (ties share the mean position), with ranks
/// recomputed inside the common subset. Throws std::invalid_argument with
/// fewer than 2 common programs; NaN when one side is constant.
double spearman(const Ranking& a, const Ranking& b);

/// 1 - 6 sum d^2 / (n (n^2 - 1)) on list positions within the common subset.
/// Agrees with spearman when neither side has ties.
double spearman_classic(const Ranking& a, const Ranking& b);

/// Program ids present in both, in a's order.
std::vector<ProgramId> common_programs(const Ranking& a, const Ranking& b);

struct FosdViolation {
  ProgramId program;    // tail = this program and everything ordered above it
  std::size_t position = 0;
  int score_lo = 0;
  int score_hi = 0;
  double tail_lo = 0.0;  // tail share at score_lo
  double tail_hi = 0.0;  // tail share at score_hi (expected >= tail_lo)
  double tolerance = 0.0;
};

struct FosdReport {
  std::vector<FosdViolation> violations;
  double max_violation = 0.0;  // largest tail_lo - tail_hi over violations

  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Average per-student tail counts at each distinct score.
/// tails[k][s] = mean over students at scores[s] of how many of their
/// selections (with multiplicity) fall in the top k+1 programs of the truth.
struct ExactTails {
  std::vector<int> scores;
  std::vector<std::vector<double>> tails;
  std::vector<ProgramId> order;
};

ExactTails exact_tails(std::span<const rankers::ScoredSelection> selections, const simgen::GroundTruth& truth);

/// Fixed-utility check: every tail count must be weakly increasing in score,
/// beyond the given slack (0 by default).
FosdReport fosd_check_exact(std::span<const rankers::ScoredSelection> selections, const simgen::GroundTruth& truth,
                            double tolerance = 0.0);

struct SampledFosdOptions {
  /// Per-cell slack is scale / sqrt(candidates at the lower score).
  double tolerance_scale = 2.0;
  rankers::Normalization normalization = rankers::Normalization::CandidateShare;
};

/// Sampled check on observed data, tails built from score shares under the
/// given order. Every data program must appear in the order (DataError otherwise).
FosdReport fosd_check(const Dataset& d, const Ranking& order, const SampledFosdOptions& options = {});

/// Named set of programs for the distribution export.
struct ProgramGroup {
  std::string name;
  std::vector<ProgramId> programs;
};

/// TSV, one row per grid score: score, candidates, overall_share (share of all
/// candidates at this score), then per group <name>_score_share (share of the
/// group's candidates at this score) and <name>_conditional (share of
/// candidates at this score selecting any group program), then g_<program>
/// for each group program (candidate shares).
void export_distributions(const Dataset& d, std::span<const ProgramGroup> groups, const std::string& path);

inline constexpr std::size_t kHeatmapMinReports = 900;

/// TSV matrix. Programs with at least min_reports reports are bucketed by
/// their average reported score (one bucket per grid score, rounded to the
/// nearest grid point). Cell (bucket, s) = share of candidates at score s
/// selecting some program in the bucket. Header only when no program qualifies.
void export_heatmap(const Dataset& d, const std::string& path, std::size_t min_reports = kHeatmapMinReports);

/// In-memory heatmap used by export_heatmap: [bucket][score].
std::vector<std::vector<double>> heatmap(const Dataset& d, std::size_t min_reports = kHeatmapMinReports);

/// TSV of the tail shares gbar under an order: one row per score, one column
/// per order position. Order programs absent from the data add zero.
void export_tails(const rankers::ScoreDistribution& dist, const Ranking& order, const std::string& path);

}  // namespace revrank::stats
