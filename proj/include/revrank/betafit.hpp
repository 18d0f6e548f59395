#pragma once

// Covariate ranker: choose beta in a box so that the share-weighted value
// sum_c (beta . x_c) g_s(c) rises with the score s as far as possible, then
// rank programs by beta . x_c.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revrank/domain.hpp"
#include "revrank/rankers.hpp"

namespace revrank::betafit {

/// One row of observable characteristics per program.
/// CSV header: program_id,<feature_1>,...,<feature_n>
struct FeatureMatrix {
  std::vector<ProgramId> programs;
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> x;  // [program][feature]

  [[nodiscard]] std::size_t feature_count() const { return feature_names.size(); }
  [[nodiscard]] std::optional<std::size_t> index_of(const ProgramId& id) const;
  /// Throws std::invalid_argument on ragged rows, non-finite entries, no
  /// features or duplicate programs.
  void validate() const;

  static FeatureMatrix read_csv(std::istream& in, const std::string& source = "<stream>");
  static FeatureMatrix read_csv(const std::string& path);
};

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box uniform(std::size_t n, double lo = -1.0, double hi = 1.0);
  [[nodiscard]] std::size_t size() const { return lo.size(); }
  [[nodiscard]] bool contains(std::span<const double> beta) const;
  [[nodiscard]] std::vector<double> project(std::span<const double> beta) const;
  [[nodiscard]] std::vector<double> center() const;
};

/// Column of merged selection shares for a run of adjacent scores.
struct Bin {
  int score_lo = 0;
  int score_hi = 0;
  std::vector<double> g;  // per program
  std::size_t candidates = 0;
};

struct BinnedDistribution {
  std::vector<ProgramId> programs;
  std::vector<Bin> bins;  // ascending score
};

/// Greedy ascending merge of adjacent score columns until every bin holds at
/// least min_bin_count candidates; a short remainder stays a bin of its own
/// and trailing empty columns join the last bin. Shares are merged as
/// candidate-weighted averages.
BinnedDistribution bin_scores(const rankers::ScoreDistribution& dist, std::size_t min_bin_count);

/// Sum over adjacent score levels of max(h(lower) - h(higher), 0), where
/// h(s) = sum_c (beta . x_c) g_s(c). Zero iff h is non-decreasing in score.
/// Empty score columns are skipped.
class Objective {
 public:
  /// columns: share vectors ordered by descending score, aligned with programs.
  Objective(std::span<const ProgramId> programs, const std::vector<std::vector<double>>& columns_desc,
            const FeatureMatrix& features);
  Objective(const rankers::ScoreDistribution& dist, const FeatureMatrix& features);
  Objective(const BinnedDistribution& binned, const FeatureMatrix& features);

  [[nodiscard]] std::size_t dimension() const { return dimension_; }
  [[nodiscard]] std::size_t term_count() const { return terms_.size(); }
  [[nodiscard]] double value(std::span<const double> beta) const;
  /// Sum of the coefficient vectors of strictly positive terms.
  [[nodiscard]] std::vector<double> subgradient(std::span<const double> beta) const;

 private:
  void check(std::span<const double> beta) const;

  std::size_t dimension_ = 0;
  std::vector<std::vector<double>> terms_;  // term l is max(terms_[l] . beta, 0)
};

/// One-shot forms of Objective(dist, features).value / .subgradient.
double objective(std::span<const double> beta, const rankers::ScoreDistribution& dist, const FeatureMatrix& features);
std::vector<double> subgradient(std::span<const double> beta, const rankers::ScoreDistribution& dist,
                                const FeatureMatrix& features);

struct StepRule {
  double a = 1.0;  // step a / sqrt(k) along the normalised subgradient
};

struct BetaModel {
  std::vector<double> beta;
  Box box;
  double objective_value = 0.0;
  int iterations_run = 0;
  std::vector<std::string> feature_names;
};

/// Projected subgradient descent from start (default: box center), keeping
/// the best iterate. Stops early when the subgradient vanishes or the
/// projected step does not move.
BetaModel fit(const Objective& objective, const Box& box, int max_iters, StepRule step = {},
              std::optional<std::vector<double>> start = std::nullopt);

BetaModel fit(const rankers::ScoreDistribution& dist, const FeatureMatrix& features, const Box& box,
              int max_iters, StepRule step = {});

Ranking rank_by_beta(const BetaModel& model, const FeatureMatrix& features);

void write_model_json(const BetaModel& model, std::ostream& out);
void write_model_json(const BetaModel& model, const std::string& path);

}  // namespace revrank::betafit
