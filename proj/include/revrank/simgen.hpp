#pragma once

// Synthetic score-report markets with a known selectivity order.

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "revrank/choice.hpp"
#include "revrank/domain.hpp"
#include "revrank/noise_cdf.hpp"

namespace revrank::simgen {

using Rng = std::mt19937_64;

/// v_j = (t_j - t_min + 1)^gamma * exp(sigma * eta_j), eta_j ~ N(0, 1) i.i.d.
struct UtilityLaw {
  double gamma = 1.0;
  double sigma = 0.3;
};

/// k(s) = clamp(base + floor((s - origin) / step_width), 0, cap). A step_width
/// of 0 gives the constant budget min(base, cap). Weakly increasing in s.
struct BudgetRule {
  int base = 1;
  int step_width = 150;
  int cap = 5;
  int origin = 200;

  [[nodiscard]] int budget(int score) const;
  static BudgetRule constant(int k) { return {k, 0, k, 0}; }
};

/// Categorical distribution over the score grid.
struct ScoreLaw {
  std::vector<double> weights;  // one per grid score

  static ScoreLaw uniform(const ScoreGrid& grid);
  /// Normal density evaluated at grid points, renormalised.
  static ScoreLaw discretized_normal(const ScoreGrid& grid, double mean, double sd);
};

struct Market {
  std::vector<ProgramId> programs;
  std::vector<double> thresholds;
  NoiseCdf noise;
  UtilityLaw utility_law;
  BudgetRule budget_rule;
  ScoreGrid grid;
  ScoreLaw score_law;

  [[nodiscard]] std::size_t size() const { return programs.size(); }
  /// Throws std::invalid_argument when an invariant fails, including the
  /// anchor bound noise.anchor <= grid.min() - max(thresholds).
  void validate() const;
};

/// Programs by threshold descending; equal thresholds by program id.
struct GroundTruth {
  std::vector<ProgramId> order;
  /// position[k] = place of market program k in order (0 = most selective).
  std::vector<std::size_t> position;
};

GroundTruth ground_truth(const Market& market);

/// Ground truth as a Ranking with metric = threshold.
Ranking ground_truth_ranking(const Market& market);

/// SplitMix64 mix of (base, stream); used to give each student its own seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

std::vector<double> sample_utilities(const Market& market, Rng& rng);
std::vector<double> sample_utilities(const Market& market, std::uint64_t seed);

/// Offers for every program at the given score, priced through the noise CDF.
std::vector<choice::CollegeOffer> price_offers(const Market& market, std::span<const double> utilities,
                                               int score);

/// C_s(v): the optimal portfolio (duplicates allowed) over undominated offers
/// with budget budget_rule(score). Deterministic in (utilities, score).
choice::Portfolio select_portfolio(const Market& market, std::span<const double> utilities, int score);

/// Same, with an explicit budget.
choice::Portfolio select_portfolio(const Market& market, std::span<const double> utilities, int score,
                                   int budget);

struct StudentDraw {
  int score = 0;
  std::vector<double> utilities;
  choice::Portfolio portfolio;

  /// Distinct selected program indices (duplicate positions collapsed).
  [[nodiscard]] std::vector<std::size_t> programs() const { return portfolio.programs(); }
};

StudentDraw simulate_student(const Market& market, std::uint64_t seed);

struct GenerateOptions {
  int test_year = 2014;
};

/// n_students independent students (student i uses derive_seed(seed, i)),
/// flattened into score reports with attempt_index 1.
Dataset generate_dataset(const Market& market, std::size_t n_students, std::uint64_t seed,
                         const GenerateOptions& options = {});

/// Flat "key = value" market description.
///
/// Keys (all optional): programs, program_prefix, thresholds, threshold_min,
/// threshold_max, threshold_layout (uniform|even), floor_threshold,
/// noise_rate, noise_anchor (number|auto), utility_gamma, utility_sigma,
/// budget_base, budget_step, budget_cap, score_min, score_max, score_step,
/// score_law (normal|uniform), score_mean, score_sd. Unknown keys are kept
/// (run options share the file) and ignored here.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values(const std::string& path);

/// Builds a validated market. Randomly laid-out thresholds are drawn from a
/// generator seeded with derive_seed(seed, kThresholdStream).
Market build_market(const KeyValues& config, std::uint64_t seed);

inline constexpr std::uint64_t kThresholdStream = 0x7468726573686f6cULL;

}  // namespace revrank::simgen
