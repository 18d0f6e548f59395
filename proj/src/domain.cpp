#include "revrank/domain.hpp"

#include <algorithm>
#include <unordered_set>
#include <map>
#include <set>
#include <string>

namespace revrank {

ScoreGrid::ScoreGrid(int min, int max, int step) : min_(min), max_(max), step_(step) {
  if (step <= 0) throw std::invalid_argument("score grid step must be positive");
  if (max < min) throw std::invalid_argument("score grid max must be >= min");
  if ((max - min) % step != 0) {
    throw std::invalid_argument("score grid max must lie on the grid (max - min divisible by step)");
  }
}

std::size_t ScoreGrid::size() const { return static_cast<std::size_t>((max_ - min_) / step_) + 1; }

bool ScoreGrid::contains(int score) const {
  return score >= min_ && score <= max_ && (score - min_) % step_ == 0;
}

std::size_t ScoreGrid::index_of(int score) const {
  if (!contains(score)) throw std::out_of_range("score " + std::to_string(score) + " is off the grid");
  return static_cast<std::size_t>((score - min_) / step_);
}

int ScoreGrid::score_at(std::size_t index) const {
  if (index >= size()) throw std::out_of_range("score grid index out of range");
  return min_ + static_cast<int>(index) * step_;
}

std::vector<int> ScoreGrid::scores() const {
  std::vector<int> out;
  out.reserve(size());
  for (int s = min_; s <= max_; s += step_) out.push_back(s);
  return out;
}

Dataset::Dataset(std::vector<ScoreReport> reports, ScoreGrid grid)
    : reports_(std::move(reports)), grid_(grid) {
  std::set<ProgramId> ids;
  for (const auto& r : reports_) ids.insert(r.program_id);
  programs_.assign(ids.begin(), ids.end());
  index_.reserve(programs_.size());
  for (std::size_t k = 0; k < programs_.size(); ++k) index_.emplace(programs_[k].value, k);
}

std::optional<std::size_t> Dataset::index_of(const ProgramId& id) const {
  auto it = index_.find(id.value);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Violation> validate_dataset(const Dataset& d, const ValidationOptions& options) {
  std::vector<Violation> out;
  const auto& grid = d.score_grid();
  const auto reports = d.reports();

  // (candidate, attempt) -> first score seen and the distinct programs so far
  struct Sitting {
    int score = 0;
    std::set<ProgramId> programs;
    bool cap_reported = false;
  };
  std::map<std::pair<std::string, int>, Sitting> sittings;

  for (std::size_t row = 0; row < reports.size(); ++row) {
    const auto& r = reports[row];
    if (r.candidate_id.empty()) {
      out.push_back({row, "empty-candidate-id", "candidate_id is empty"});
    }
    if (r.program_id.empty()) {
      out.push_back({row, "empty-program-id", "program_id is empty"});
    }
    if (!grid.contains(r.score)) {
      out.push_back({row, "off-grid-score",
                     "score " + std::to_string(r.score) + " is not on the grid [" +
                         std::to_string(grid.min()) + ", " + std::to_string(grid.max()) + "] step " +
                         std::to_string(grid.step())});
    }
    if (r.attempt_index < 1) {
      out.push_back({row, "attempt-index",
                     "attempt_index " + std::to_string(r.attempt_index) + " is below 1"});
    }

    auto [it, inserted] = sittings.try_emplace({r.candidate_id, r.attempt_index});
    auto& sitting = it->second;
    if (inserted) {
      sitting.score = r.score;
    } else if (sitting.score != r.score) {
      out.push_back({row, "inconsistent-attempt-score",
                     "candidate " + r.candidate_id + " attempt " + std::to_string(r.attempt_index) +
                         " has scores " + std::to_string(sitting.score) + " and " +
                         std::to_string(r.score)});
    }
    sitting.programs.insert(r.program_id);
    if (sitting.programs.size() > options.max_selections && !sitting.cap_reported) {
      sitting.cap_reported = true;
      out.push_back({row, "selection-cap",
                     "candidate " + r.candidate_id + " attempt " + std::to_string(r.attempt_index) +
                         " selects more than " + std::to_string(options.max_selections) +
                         " programs",
                     options.strict_cap ? Severity::Error : Severity::Warning});
    }
  }
  return out;
}

bool has_errors(std::span<const Violation> violations) {
  return std::any_of(violations.begin(), violations.end(),
                     [](const Violation& v) { return v.severity == Severity::Error; });
}

std::string to_string(RankMethod method) {
  switch (method) {
    case RankMethod::M: return "m";
    case RankMethod::MPlusRecursive: return "mplus";
    case RankMethod::Tournament: return "tournament";
    case RankMethod::Beta: return "beta";
    case RankMethod::External: return "external";
  }
  return "external";
}

RankMethod rank_method_from_string(const std::string& text) {
  if (text == "m") return RankMethod::M;
  if (text == "mplus") return RankMethod::MPlusRecursive;
  if (text == "tournament") return RankMethod::Tournament;
  if (text == "beta") return RankMethod::Beta;
  if (text == "external") return RankMethod::External;
  throw std::invalid_argument("unknown ranking method '" + text + "'");
}

Ranking::Ranking(std::vector<RankingEntry> entries, RankMethod method)
    : entries_(std::move(entries)), method_(method) {
  std::unordered_set<std::string> seen;
  for (const auto& e : entries_) {
    if (!seen.insert(e.program_id.value).second) {
      throw std::invalid_argument("program " + e.program_id.value + " appears twice in a ranking");
    }
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    entries_[i].rank = static_cast<int>(i) + 1;
    if (i > 0 && entries_[i].metric_value > entries_[i - 1].metric_value) {
      throw std::invalid_argument("ranking entries must have non-increasing metric values");
    }
  }
  std::size_t start = 0;
  while (start < entries_.size()) {
    std::size_t end = start + 1;
    while (end < entries_.size() && entries_[end].metric_value == entries_[start].metric_value) ++end;
    if (end - start >= 2) {
      std::vector<int> group;
      for (std::size_t i = start; i < end; ++i) group.push_back(static_cast<int>(i) + 1);
      tie_groups_.push_back(std::move(group));
    }
    start = end;
  }
}

Ranking Ranking::top(std::size_t k) const {
  if (k >= entries_.size()) return *this;
  return Ranking(std::vector<RankingEntry>(entries_.begin(), entries_.begin() + static_cast<long>(k)),
                 method_);
}

Ranking make_ranking(std::vector<ScoredProgram> scored, RankMethod method) {
  std::sort(scored.begin(), scored.end(), [](const ScoredProgram& a, const ScoredProgram& b) {
    if (a.metric != b.metric) return a.metric > b.metric;
    if (a.tie_break != b.tie_break) return a.tie_break > b.tie_break;
    return a.program_id < b.program_id;
  });
  std::vector<RankingEntry> entries;
  entries.reserve(scored.size());
  for (auto& s : scored) {
    entries.push_back({std::move(s.program_id), s.metric, 0, s.detail});
  }
  return Ranking(std::move(entries), method);
}

}  // namespace revrank
