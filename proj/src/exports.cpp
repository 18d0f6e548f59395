#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>

#include "revrank/ranking_io.hpp"
#include "revrank/stats.hpp"

namespace revrank::stats {

namespace {

using io::format_number;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw DataError("write failure on " + path);
}

// distinct (candidate, score) units with their program indices
struct Units {
  std::vector<std::size_t> score_index;
  std::vector<std::vector<std::size_t>> programs;
};

Units collect_units(const Dataset& d) {
  const auto& grid = d.score_grid();
  std::map<std::pair<std::string_view, int>, std::vector<std::size_t>> by_unit;
  for (const auto& r : d.reports()) {
    if (!grid.contains(r.score)) throw DataError("score " + std::to_string(r.score) + " is off the score grid");
    by_unit[{r.candidate_id, r.score}].push_back(*d.index_of(r.program_id));
  }
  Units units;
  for (auto& [key, programs] : by_unit) {
    std::sort(programs.begin(), programs.end());
    programs.erase(std::unique(programs.begin(), programs.end()), programs.end());
    units.score_index.push_back(grid.index_of(key.second));
    units.programs.push_back(std::move(programs));
  }
  return units;
}

double share(double part, double whole) { return whole > 0.0 ? part / whole : 0.0; }

}  // namespace

void export_distributions(const Dataset& d, std::span<const ProgramGroup> groups, const std::string& path) {
  const auto units = collect_units(d);
  const auto scores = d.score_grid().scores();
  const std::size_t T = scores.size();

  std::vector<double> at_score(T, 0.0);
  for (std::size_t u = 0; u < units.programs.size(); ++u) at_score[units.score_index[u]] += 1.0;
  const double total = static_cast<double>(units.programs.size());

  // group membership per dataset program index
  std::vector<std::vector<double>> group_hits(groups.size(), std::vector<double>(T, 0.0));
  std::vector<double> group_total(groups.size(), 0.0);
  std::vector<ProgramId> columns;
  for (const auto& g : groups) {
    for (const auto& p : g.programs) {
      if (std::find(columns.begin(), columns.end(), p) == columns.end()) columns.push_back(p);
    }
  }
  std::vector<std::vector<double>> program_hits(columns.size(), std::vector<double>(T, 0.0));
  for (std::size_t u = 0; u < units.programs.size(); ++u) {
    const std::size_t s = units.score_index[u];
    std::set<ProgramId> chosen;
    for (std::size_t c : units.programs[u]) chosen.insert(d.program_id(c));
    for (std::size_t k = 0; k < groups.size(); ++k) {
      const bool hit = std::any_of(groups[k].programs.begin(), groups[k].programs.end(),
                                   [&](const ProgramId& p) { return chosen.count(p) > 0; });
      if (hit) {
        group_hits[k][s] += 1.0;
        group_total[k] += 1.0;
      }
    }
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (chosen.count(columns[j])) program_hits[j][s] += 1.0;
    }
  }

  auto out = open_out(path);
  out << "score\tcandidates\toverall_share";
  for (const auto& g : groups) out << '\t' << g.name << "_score_share\t" << g.name << "_conditional";
  for (const auto& p : columns) out << "\tg_" << p.value;
  out << '\n';
  for (std::size_t s = 0; s < T; ++s) {
    out << scores[s] << '\t' << static_cast<long long>(at_score[s]) << '\t'
        << format_number(share(at_score[s], total));
    for (std::size_t k = 0; k < groups.size(); ++k) {
      out << '\t' << format_number(share(group_hits[k][s], group_total[k])) << '\t'
          << format_number(share(group_hits[k][s], at_score[s]));
    }
    for (std::size_t j = 0; j < columns.size(); ++j) out << '\t' << format_number(share(program_hits[j][s], at_score[s]));
    out << '\n';
  }
  finish(out, path);
}

std::vector<std::vector<double>> heatmap(const Dataset& d, std::size_t min_reports) {
  const auto& grid = d.score_grid();
  const std::size_t T = grid.size();
  std::vector<double> sum(d.program_count(), 0.0);
  std::vector<std::size_t> count(d.program_count(), 0);
  for (const auto& r : d.reports()) {
    const std::size_t c = *d.index_of(r.program_id);
    sum[c] += r.score;
    ++count[c];
  }
  std::vector<long> bucket(d.program_count(), -1);
  bool any = false;
  for (std::size_t c = 0; c < d.program_count(); ++c) {
    if (count[c] == 0 || count[c] < min_reports) continue;
    const double avg = sum[c] / static_cast<double>(count[c]);
    const long b = std::lround((avg - grid.min()) / grid.step());
    bucket[c] = std::clamp<long>(b, 0, static_cast<long>(T) - 1);
    any = true;
  }
  if (!any) return {};

  const auto units = collect_units(d);
  std::vector<std::vector<double>> cells(T, std::vector<double>(T, 0.0));
  std::vector<double> at_score(T, 0.0);
  std::vector<bool> seen(T, false);
  for (std::size_t u = 0; u < units.programs.size(); ++u) {
    const std::size_t s = units.score_index[u];
    at_score[s] += 1.0;
    std::fill(seen.begin(), seen.end(), false);
    for (std::size_t c : units.programs[u]) {
      if (bucket[c] >= 0 && !seen[static_cast<std::size_t>(bucket[c])]) {
        seen[static_cast<std::size_t>(bucket[c])] = true;
        cells[static_cast<std::size_t>(bucket[c])][s] += 1.0;
      }
    }
  }
  for (auto& row : cells) {
    for (std::size_t s = 0; s < T; ++s) row[s] = share(row[s], at_score[s]);
  }
  return cells;
}

void export_heatmap(const Dataset& d, const std::string& path, std::size_t min_reports) {
  const auto cells = heatmap(d, min_reports);
  const auto scores = d.score_grid().scores();
  auto out = open_out(path);
  out << "bucket_score";
  for (int s : scores) out << '\t' << s;
  out << '\n';
  for (std::size_t b = 0; b < cells.size(); ++b) {
    out << scores[b];
    for (double v : cells[b]) out << '\t' << format_number(v);
    out << '\n';
  }
  finish(out, path);
}

void export_tails(const rankers::ScoreDistribution& dist, const Ranking& order, const std::string& path) {
  // programs absent from the data contribute nothing
  std::vector<std::optional<std::size_t>> idx;
  for (const auto& e : order.entries()) idx.push_back(dist.index_of(e.program_id));
  auto out = open_out(path);
  out << "score\tcandidates";
  for (const auto& e : order.entries()) out << '\t' << e.program_id.value;
  out << '\n';
  for (std::size_t s = 0; s < dist.score_count(); ++s) {
    out << dist.scores[s] << '\t' << dist.candidates_per_score[s];
    double running = 0.0;
    for (const auto& c : idx) {
      if (c) running += dist.g[*c][s];
      out << '\t' << format_number(running);
    }
    out << '\n';
  }
  finish(out, path);
}

}  // namespace revrank::stats
