#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>

#include "revrank/rankers.hpp"

namespace revrank::rankers {

namespace {

void check_row(const ScoreDistribution& dist, std::span<const double> row) {
  if (row.size() != dist.score_count()) throw std::invalid_argument("row length does not match the score grid");
}

std::vector<std::size_t> occupied(const ScoreDistribution& dist) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < dist.score_count(); ++s) {
    if (!dist.empty_column[s]) out.push_back(s);
  }
  return out;
}

}  // namespace

double m_measure(const ScoreDistribution& dist, std::span<const double> row) {
  check_row(dist, row);
  const auto cols = occupied(dist);
  double total = 0.0;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i + 1; j < cols.size(); ++j) {
      const double gap = dist.scores[cols[j]] - dist.scores[cols[i]];
      total += (row[cols[j]] - row[cols[i]]) * gap;
    }
  }
  return total;
}

double m_measure(const ScoreDistribution& dist, std::size_t program) {
  return m_measure(dist, dist.g.at(program));
}

std::int64_t m_plus_count(const ScoreDistribution& dist, std::span<const double> row) {
  check_row(dist, row);
  const auto cols = occupied(dist);
  std::int64_t count = 0;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i + 1; j < cols.size(); ++j) {
      if (row[cols[j]] - row[cols[i]] > kTrendEpsilon) ++count;
    }
  }
  return count;
}

std::int64_t m_plus_count(const ScoreDistribution& dist, std::size_t program) {
  return m_plus_count(dist, dist.g.at(program));
}

Ranking rank_by_m(const ScoreDistribution& dist) {
  std::vector<ScoredProgram> scored;
  scored.reserve(dist.program_count());
  for (std::size_t c = 0; c < dist.program_count(); ++c) {
    scored.push_back({dist.programs[c], m_measure(dist, c), 0.0, std::nullopt});
  }
  return make_ranking(std::move(scored), RankMethod::M);
}

Ranking rank_by_m_plus(const ScoreDistribution& dist) {
  const std::size_t n = dist.program_count();
  std::vector<double> m(n);
  for (std::size_t c = 0; c < n; ++c) m[c] = m_measure(dist, c);

  std::vector<bool> placed(n, false);
  std::vector<double> base(dist.score_count(), 0.0);
  std::vector<double> row(dist.score_count());
  std::vector<RankingEntry> entries;
  entries.reserve(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    std::size_t best = n;
    std::int64_t best_count = -1;
    for (std::size_t c = 0; c < n; ++c) {
      if (placed[c]) continue;
      for (std::size_t s = 0; s < row.size(); ++s) row[s] = dist.g[c][s] + base[s];
      const std::int64_t count = m_plus_count(dist, row);
      // programs are id-sorted, so scanning upward keeps the smaller id on full ties
      if (best == n || count > best_count || (count == best_count && m[c] > m[best])) {
        best = c;
        best_count = count;
      }
    }
    placed[best] = true;
    for (std::size_t s = 0; s < base.size(); ++s) base[s] += dist.g[best][s];
    entries.push_back({dist.programs[best], static_cast<double>(n - pos), 0, static_cast<double>(best_count)});
  }
  return Ranking(std::move(entries), RankMethod::MPlusRecursive);
}

double ComparisonTally::ratio() const {
  if (incorrect == 0) {
    return correct == 0 ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(correct) / static_cast<double>(incorrect);
}

ComparisonTally pairwise_correctness_ratio(std::span<const ScoredSelection> selections,
                                           const simgen::GroundTruth& truth) {
  std::vector<std::pair<int, std::vector<std::size_t>>> sets;
  sets.reserve(selections.size());
  for (const auto& sel : selections) {
    std::vector<std::size_t> p = sel.programs;
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    for (std::size_t c : p) {
      if (c >= truth.position.size()) throw std::out_of_range("selection names a program outside the truth");
    }
    sets.emplace_back(sel.score, std::move(p));
  }

  ComparisonTally tally;
  std::vector<std::size_t> only_i;
  std::vector<std::size_t> only_j;
  for (const auto& [si, pi] : sets) {
    for (const auto& [sj, pj] : sets) {
      if (!(sj < si)) continue;
      only_i.clear();
      only_j.clear();
      std::set_difference(pi.begin(), pi.end(), pj.begin(), pj.end(), std::back_inserter(only_i));
      std::set_difference(pj.begin(), pj.end(), pi.begin(), pi.end(), std::back_inserter(only_j));
      for (std::size_t a : only_i) {
        for (std::size_t b : only_j) {
          if (truth.position[a] < truth.position[b]) {
            ++tally.correct;
          } else {
            ++tally.incorrect;
          }
        }
      }
    }
  }
  return tally;
}

}  // namespace revrank::rankers
