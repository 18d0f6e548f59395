#include "revrank/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

namespace revrank::stats {

namespace {

// Average ranks (1-based) of the entries of r whose ids are in keep, in r's order.
std::unordered_map<std::string, double> average_ranks(const Ranking& r,
                                                      const std::unordered_map<std::string, bool>& keep) {
  std::vector<const RankingEntry*> kept;
  for (const auto& e : r.entries()) {
    if (keep.count(e.program_id.value)) kept.push_back(&e);
  }
  std::unordered_map<std::string, double> out;
  std::size_t start = 0;
  while (start < kept.size()) {
    std::size_t end = start + 1;
    while (end < kept.size() && kept[end]->metric_value == kept[start]->metric_value) ++end;
    const double avg = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t i = start; i < end; ++i) out[kept[i]->program_id.value] = avg;
    start = end;
  }
  return out;
}

std::unordered_map<std::string, bool> common_set(const Ranking& a, const Ranking& b) {
  std::unordered_map<std::string, bool> in_b;
  for (const auto& e : b.entries()) in_b[e.program_id.value] = true;
  std::unordered_map<std::string, bool> common;
  for (const auto& e : a.entries()) {
    if (in_b.count(e.program_id.value)) common[e.program_id.value] = true;
  }
  if (common.size() < 2) {
    throw std::invalid_argument("rank correlation needs at least 2 common programs, found " +
                                std::to_string(common.size()));
  }
  return common;
}

}  // namespace

std::vector<ProgramId> common_programs(const Ranking& a, const Ranking& b) {
  std::unordered_map<std::string, bool> in_b;
  for (const auto& e : b.entries()) in_b[e.program_id.value] = true;
  std::vector<ProgramId> out;
  for (const auto& e : a.entries()) {
    if (in_b.count(e.program_id.value)) out.push_back(e.program_id);
  }
  return out;
}

double spearman(const Ranking& a, const Ranking& b) {
  const auto common = common_set(a, b);
  const auto ra = average_ranks(a, common);
  const auto rb = average_ranks(b, common);
  const double n = static_cast<double>(common.size());
  const double mean = (n + 1.0) / 2.0;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (const auto& [id, x] : ra) {
    const double y = rb.at(id);
    sab += (x - mean) * (y - mean);
    saa += (x - mean) * (x - mean);
    sbb += (y - mean) * (y - mean);
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double spearman_classic(const Ranking& a, const Ranking& b) {
  const auto common = common_set(a, b);
  std::unordered_map<std::string, double> pa;
  std::unordered_map<std::string, double> pb;
  for (const auto& e : a.entries()) {
    if (common.count(e.program_id.value)) pa[e.program_id.value] = static_cast<double>(pa.size() + 1);
  }
  for (const auto& e : b.entries()) {
    if (common.count(e.program_id.value)) pb[e.program_id.value] = static_cast<double>(pb.size() + 1);
  }
  double d2 = 0.0;
  for (const auto& [id, x] : pa) {
    const double d = x - pb.at(id);
    d2 += d * d;
  }
  const double n = static_cast<double>(common.size());
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

ExactTails exact_tails(std::span<const rankers::ScoredSelection> selections, const simgen::GroundTruth& truth) {
  ExactTails out;
  out.order = truth.order;
  std::map<int, std::vector<const rankers::ScoredSelection*>> by_score;
  for (const auto& sel : selections) by_score[sel.score].push_back(&sel);
  const std::size_t m = truth.order.size();
  out.tails.assign(m, std::vector<double>(by_score.size(), 0.0));
  std::size_t s = 0;
  for (const auto& [score, group] : by_score) {
    out.scores.push_back(score);
    std::vector<double> at_position(m, 0.0);
    for (const auto* sel : group) {
      for (std::size_t c : sel->programs) {
        if (c >= truth.position.size()) throw std::out_of_range("selection names a program outside the truth");
        at_position[truth.position[c]] += 1.0;
      }
    }
    double running = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      running += at_position[k];
      out.tails[k][s] = running / static_cast<double>(group.size());
    }
    ++s;
  }
  return out;
}

FosdReport fosd_check_exact(std::span<const rankers::ScoredSelection> selections, const simgen::GroundTruth& truth,
                            double tolerance) {
  const auto tails = exact_tails(selections, truth);
  FosdReport report;
  for (std::size_t k = 0; k < tails.tails.size(); ++k) {
    const auto& row = tails.tails[k];
    for (std::size_t i = 0; i < row.size(); ++i) {
      for (std::size_t j = i + 1; j < row.size(); ++j) {
        const double gap = row[i] - row[j];
        if (gap > tolerance) {
          report.violations.push_back(
              {tails.order[k], k, tails.scores[i], tails.scores[j], row[i], row[j], tolerance});
          report.max_violation = std::max(report.max_violation, gap);
        }
      }
    }
  }
  return report;
}

FosdReport fosd_check(const Dataset& d, const Ranking& order, const SampledFosdOptions& options) {
  const auto dist = rankers::score_distribution(d, options.normalization);
  std::unordered_map<std::string, std::size_t> position;
  for (const auto& e : order.entries()) position[e.program_id.value] = static_cast<std::size_t>(e.rank - 1);
  for (const auto& p : dist.programs) {
    if (!position.count(p.value)) throw DataError("order does not place program " + p.value);
  }
  const std::size_t m = order.size();
  const std::size_t T = dist.score_count();
  std::vector<std::vector<double>> at_position(m, std::vector<double>(T, 0.0));
  for (std::size_t c = 0; c < dist.program_count(); ++c) {
    auto& row = at_position[position[dist.programs[c].value]];
    for (std::size_t s = 0; s < T; ++s) row[s] += dist.g[c][s];
  }
  std::vector<std::size_t> cols;
  for (std::size_t s = 0; s < T; ++s) {
    if (!dist.empty_column[s]) cols.push_back(s);
  }

  FosdReport report;
  std::vector<double> tail(T, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t s = 0; s < T; ++s) tail[s] += at_position[k][s];
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const double tol =
          options.tolerance_scale / std::sqrt(static_cast<double>(dist.candidates_per_score[cols[i]]));
      for (std::size_t j = i + 1; j < cols.size(); ++j) {
        const double gap = tail[cols[i]] - tail[cols[j]];
        if (gap > tol) {
          report.violations.push_back({order.entries()[k].program_id, k, dist.scores[cols[i]],
                                       dist.scores[cols[j]], tail[cols[i]], tail[cols[j]], tol});
          report.max_violation = std::max(report.max_violation, gap);
        }
      }
    }
  }
  return report;
}

}  // namespace revrank::stats
