#include <algorithm>
#include <map>
#include <string>

#include "revrank/rankers.hpp"

namespace revrank::rankers {

std::string to_string(Normalization n) {
  return n == Normalization::CandidateShare ? "candidate" : "report";
}

Normalization normalization_from_string(const std::string& text) {
  if (text == "candidate") return Normalization::CandidateShare;
  if (text == "report") return Normalization::ReportShare;
  throw std::invalid_argument("normalization must be 'candidate' or 'report', got '" + text + "'");
}

std::optional<std::size_t> ScoreDistribution::index_of(const ProgramId& id) const {
  auto it = std::lower_bound(programs.begin(), programs.end(), id);
  if (it == programs.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - programs.begin());
}

ScoreDistribution score_distribution(const Dataset& d, Normalization normalization) {
  const ScoreGrid& grid = d.score_grid();
  ScoreDistribution dist;
  dist.normalization = normalization;
  dist.programs.assign(d.programs().begin(), d.programs().end());
  dist.scores = grid.scores();
  const std::size_t m = dist.programs.size();
  const std::size_t T = dist.scores.size();

  // (candidate, score) -> selected programs
  std::map<std::pair<std::string_view, int>, std::vector<std::size_t>> units;
  for (const auto& r : d.reports()) {
    if (!grid.contains(r.score)) {
      throw DataError("score " + std::to_string(r.score) + " of candidate " + r.candidate_id +
                      " is off the score grid");
    }
    units[{r.candidate_id, r.score}].push_back(*d.index_of(r.program_id));
  }

  std::vector<std::vector<double>> counts(m, std::vector<double>(T, 0.0));
  std::vector<double> reports_per_score(T, 0.0);
  dist.candidates_per_score.assign(T, 0);
  for (auto& [key, programs] : units) {
    std::sort(programs.begin(), programs.end());
    programs.erase(std::unique(programs.begin(), programs.end()), programs.end());
    const std::size_t s = grid.index_of(key.second);
    ++dist.candidates_per_score[s];
    for (std::size_t c : programs) counts[c][s] += 1.0;
    reports_per_score[s] += static_cast<double>(programs.size());
  }

  dist.g.assign(m, std::vector<double>(T, 0.0));
  dist.empty_column.assign(T, false);
  for (std::size_t s = 0; s < T; ++s) {
    const double denom = normalization == Normalization::CandidateShare
                             ? static_cast<double>(dist.candidates_per_score[s])
                             : reports_per_score[s];
    if (dist.candidates_per_score[s] == 0) {
      dist.empty_column[s] = true;
      continue;
    }
    for (std::size_t c = 0; c < m; ++c) dist.g[c][s] = counts[c][s] / denom;
  }
  return dist;
}

TailDistribution tail_distribution(const ScoreDistribution& dist, std::span<const std::size_t> ranked_above) {
  std::vector<double> base(dist.score_count(), 0.0);
  for (std::size_t c : ranked_above) {
    if (c >= dist.program_count()) throw std::out_of_range("tail distribution: program index out of range");
    for (std::size_t s = 0; s < base.size(); ++s) base[s] += dist.g[c][s];
  }
  TailDistribution tail;
  tail.ranked_above.assign(ranked_above.begin(), ranked_above.end());
  tail.gbar = dist.g;
  for (auto& row : tail.gbar) {
    for (std::size_t s = 0; s < row.size(); ++s) row[s] += base[s];
  }
  return tail;
}

}  // namespace revrank::rankers
