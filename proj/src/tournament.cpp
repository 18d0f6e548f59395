#include <algorithm>
#include <iterator>
#include <limits>
#include <map>

#include "revrank/rankers.hpp"

namespace revrank::rankers {

namespace {

struct YearBlock {
  std::vector<int> score;                        // per sitting
  std::vector<std::vector<std::uint32_t>> by_program;  // sorted sitting ids
};

// |R(a, b)| and |R(b, a)| within one block
std::pair<std::int64_t, std::int64_t> duel(const YearBlock& block, std::size_t a, std::size_t b,
                                           std::vector<std::uint32_t>& only_a, std::vector<std::uint32_t>& only_b) {
  const auto& A = block.by_program[a];
  const auto& B = block.by_program[b];
  if (A.empty() || B.empty()) return {0, 0};
  only_a.clear();
  only_b.clear();
  std::set_difference(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(only_a));
  std::set_difference(B.begin(), B.end(), A.begin(), A.end(), std::back_inserter(only_b));
  if (only_a.empty() || only_b.empty()) return {0, 0};
  int min_a = std::numeric_limits<int>::max();
  int min_b = std::numeric_limits<int>::max();
  for (auto i : only_a) min_a = std::min(min_a, block.score[i]);
  for (auto j : only_b) min_b = std::min(min_b, block.score[j]);
  std::int64_t ab = 0;
  std::int64_t ba = 0;
  for (auto i : only_a) ab += block.score[i] > min_b;
  for (auto j : only_b) ba += block.score[j] > min_a;
  return {ab, ba};
}

}  // namespace

TournamentResult tournament(const Dataset& d, bool per_year) {
  const std::size_t m = d.program_count();
  TournamentResult result;
  result.programs.assign(d.programs().begin(), d.programs().end());

  // sitting = (candidate, attempt); its score is the highest on its rows
  std::map<int, std::map<std::pair<std::string_view, int>, std::uint32_t>> sittings;
  std::map<int, YearBlock> blocks;
  for (const auto& r : d.reports()) {
    const int year = per_year ? r.test_year : 0;
    auto& block = blocks[year];
    if (block.by_program.empty()) block.by_program.resize(m);
    auto [it, inserted] = sittings[year].try_emplace({r.candidate_id, r.attempt_index},
                                                      static_cast<std::uint32_t>(block.score.size()));
    if (inserted) {
      block.score.push_back(r.score);
    } else {
      block.score[it->second] = std::max(block.score[it->second], r.score);
    }
    block.by_program[*d.index_of(r.program_id)].push_back(it->second);
  }
  for (auto& [year, block] : blocks) {
    for (auto& ids : block.by_program) {
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
  }

  result.points.assign(m, std::vector<std::int64_t>(m, 0));
  std::vector<std::uint32_t> only_a;
  std::vector<std::uint32_t> only_b;
  for (const auto& [year, block] : blocks) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        const auto [ab, ba] = duel(block, a, b, only_a, only_b);
        result.points[a][b] += ab;
        result.points[b][a] += ba;
      }
    }
  }

  result.wins.assign(m, 0);
  result.total_points.assign(m, 0);
  std::vector<ScoredProgram> scored;
  scored.reserve(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      result.total_points[a] += result.points[a][b];
      if (b != a && result.points[a][b] > result.points[b][a]) ++result.wins[a];
    }
    scored.push_back({result.programs[a], static_cast<double>(result.wins[a]),
                      static_cast<double>(result.total_points[a]), static_cast<double>(result.total_points[a])});
  }
  result.ranking = make_ranking(std::move(scored), RankMethod::Tournament);
  return result;
}

}  // namespace revrank::rankers
