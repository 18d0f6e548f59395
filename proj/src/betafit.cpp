#include "revrank/betafit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <set>
#include <sstream>

namespace revrank::betafit {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

std::vector<std::vector<double>> occupied_columns_desc(const rankers::ScoreDistribution& dist) {
  std::vector<std::vector<double>> cols;
  for (std::size_t s = dist.score_count(); s-- > 0;) {
    if (dist.empty_column[s]) continue;
    std::vector<double> col(dist.program_count());
    for (std::size_t c = 0; c < col.size(); ++c) col[c] = dist.g[c][s];
    cols.push_back(std::move(col));
  }
  return cols;
}

std::vector<std::vector<double>> bin_columns_desc(const BinnedDistribution& binned) {
  std::vector<std::vector<double>> cols;
  for (auto it = binned.bins.rbegin(); it != binned.bins.rend(); ++it) {
    if (it->candidates > 0) cols.push_back(it->g);
  }
  return cols;
}

}  // namespace

std::optional<std::size_t> FeatureMatrix::index_of(const ProgramId& id) const {
  auto it = std::find(programs.begin(), programs.end(), id);
  if (it == programs.end()) return std::nullopt;
  return static_cast<std::size_t>(it - programs.begin());
}

void FeatureMatrix::validate() const {
  if (feature_names.empty()) throw std::invalid_argument("feature matrix needs at least one feature");
  if (x.size() != programs.size()) throw std::invalid_argument("feature matrix needs one row per program");
  std::set<ProgramId> seen;
  for (std::size_t i = 0; i < programs.size(); ++i) {
    if (!seen.insert(programs[i]).second) {
      throw std::invalid_argument("program " + programs[i].value + " has two feature rows");
    }
    if (x[i].size() != feature_names.size()) {
      throw std::invalid_argument("feature row for " + programs[i].value + " has the wrong length");
    }
    for (double v : x[i]) {
      if (!std::isfinite(v)) throw std::invalid_argument("feature row for " + programs[i].value + " is not finite");
    }
  }
}

FeatureMatrix FeatureMatrix::read_csv(std::istream& in, const std::string& source) {
  FeatureMatrix fm;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line);
    const std::string where = source + " line " + std::to_string(line_no);
    if (!header) {
      if (fields.empty() || fields[0] != "program_id") throw DataError(where + ": header must start with program_id");
      fm.feature_names.assign(fields.begin() + 1, fields.end());
      header = true;
      continue;
    }
    if (fields.size() != fm.feature_names.size() + 1) throw DataError(where + ": wrong number of fields");
    fm.programs.emplace_back(fields[0]);
    std::vector<double> row;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      double v = 0.0;
      const auto* end = fields[k].data() + fields[k].size();
      auto [ptr, ec] = std::from_chars(fields[k].data(), end, v);
      if (fields[k].empty() || ec != std::errc() || ptr != end) {
        throw DataError(where + ": '" + fields[k] + "' is not a number");
      }
      row.push_back(v);
    }
    fm.x.push_back(std::move(row));
  }
  if (!header) throw DataError(source + ": missing feature header");
  try {
    fm.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(source + ": " + e.what());
  }
  return fm;
}

FeatureMatrix FeatureMatrix::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open feature file " + path);
  return read_csv(in, path);
}

Box Box::uniform(std::size_t n, double lo, double hi) {
  if (hi < lo) throw std::invalid_argument("box needs lo <= hi");
  return {std::vector<double>(n, lo), std::vector<double>(n, hi)};
}

bool Box::contains(std::span<const double> beta) const {
  if (beta.size() != size()) return false;
  for (std::size_t k = 0; k < beta.size(); ++k) {
    if (!(beta[k] >= lo[k] && beta[k] <= hi[k])) return false;
  }
  return true;
}

std::vector<double> Box::project(std::span<const double> beta) const {
  std::vector<double> out(beta.begin(), beta.end());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::clamp(out[k], lo[k], hi[k]);
  return out;
}

std::vector<double> Box::center() const {
  std::vector<double> out(size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = lo[k] + (hi[k] - lo[k]) / 2.0;
  return out;
}

BinnedDistribution bin_scores(const rankers::ScoreDistribution& dist, std::size_t min_bin_count) {
  if (min_bin_count < 1) throw std::invalid_argument("min_bin_count must be >= 1");
  BinnedDistribution out;
  out.programs = dist.programs;
  const std::size_t m = dist.program_count();
  Bin open;
  std::vector<double> mass(m, 0.0);
  bool started = false;
  auto close = [&](int hi) {
    open.score_hi = hi;
    open.g.assign(m, 0.0);
    if (open.candidates > 0) {
      for (std::size_t c = 0; c < m; ++c) open.g[c] = mass[c] / static_cast<double>(open.candidates);
    }
    out.bins.push_back(open);
    open = Bin{};
    std::fill(mass.begin(), mass.end(), 0.0);
    started = false;
  };
  for (std::size_t s = 0; s < dist.score_count(); ++s) {
    if (!started) {
      open.score_lo = dist.scores[s];
      started = true;
    }
    const std::size_t n = dist.candidates_per_score[s];
    open.candidates += n;
    for (std::size_t c = 0; c < m; ++c) mass[c] += dist.g[c][s] * static_cast<double>(n);
    if (open.candidates >= min_bin_count) close(dist.scores[s]);
  }
  if (started) {
    if (open.candidates == 0 && !out.bins.empty()) {
      out.bins.back().score_hi = dist.scores.back();  // trailing empty scores join the last bin
    } else {
      close(dist.scores.back());
    }
  }
  return out;
}

Objective::Objective(std::span<const ProgramId> programs, const std::vector<std::vector<double>>& columns_desc,
                     const FeatureMatrix& features)
    : dimension_(features.feature_count()) {
  features.validate();
  std::vector<const std::vector<double>*> rows;
  for (const auto& p : programs) {
    const auto k = features.index_of(p);
    if (!k) throw std::invalid_argument("no feature row for program " + p.value);
    rows.push_back(&features.x[*k]);
  }
  for (const auto& col : columns_desc) {
    if (col.size() != programs.size()) throw std::invalid_argument("share column length does not match programs");
  }
  for (std::size_t l = 0; l + 1 < columns_desc.size(); ++l) {
    std::vector<double> term(dimension_, 0.0);
    for (std::size_t c = 0; c < programs.size(); ++c) {
      const double diff = columns_desc[l + 1][c] - columns_desc[l][c];
      if (diff == 0.0) continue;
      for (std::size_t k = 0; k < dimension_; ++k) term[k] += (*rows[c])[k] * diff;
    }
    terms_.push_back(std::move(term));
  }
}

Objective::Objective(const rankers::ScoreDistribution& dist, const FeatureMatrix& features)
    : Objective(dist.programs, occupied_columns_desc(dist), features) {}

Objective::Objective(const BinnedDistribution& binned, const FeatureMatrix& features)
    : Objective(binned.programs, bin_columns_desc(binned), features) {}

void Objective::check(std::span<const double> beta) const {
  if (beta.size() != dimension_) {
    throw std::invalid_argument("beta has " + std::to_string(beta.size()) + " coordinates, expected " +
                                std::to_string(dimension_));
  }
}

double Objective::value(std::span<const double> beta) const {
  check(beta);
  double total = 0.0;
  for (const auto& term : terms_) total += std::max(dot(term, beta), 0.0);
  return total;
}

std::vector<double> Objective::subgradient(std::span<const double> beta) const {
  check(beta);
  std::vector<double> out(dimension_, 0.0);
  for (const auto& term : terms_) {
    if (dot(term, beta) > 0.0) {
      for (std::size_t k = 0; k < dimension_; ++k) out[k] += term[k];
    }
  }
  return out;
}

double objective(std::span<const double> beta, const rankers::ScoreDistribution& dist,
                 const FeatureMatrix& features) {
  return Objective(dist, features).value(beta);
}

std::vector<double> subgradient(std::span<const double> beta, const rankers::ScoreDistribution& dist,
                                const FeatureMatrix& features) {
  return Objective(dist, features).subgradient(beta);
}

BetaModel fit(const Objective& objective, const Box& box, int max_iters, StepRule step,
              std::optional<std::vector<double>> start) {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (box.size() != objective.dimension() || box.hi.size() != box.lo.size()) {
    throw std::invalid_argument("box dimension does not match the features");
  }
  for (std::size_t k = 0; k < box.size(); ++k) {
    if (!(box.lo[k] <= box.hi[k])) throw std::invalid_argument("box is empty");
  }
  if (!(step.a > 0.0)) throw std::invalid_argument("step scale must be > 0");

  std::vector<double> beta = box.project(start ? *start : box.center());
  std::vector<double> best = beta;
  double best_value = objective.value(beta);
  int iterations = 0;
  std::vector<double> next(beta.size());
  for (int k = 1; k <= max_iters; ++k) {
    iterations = k;
    const auto g = objective.subgradient(beta);
    const double norm = std::sqrt(dot(g, g));
    if (norm == 0.0) break;
    const double t = step.a / std::sqrt(static_cast<double>(k)) / norm;
    for (std::size_t i = 0; i < beta.size(); ++i) next[i] = beta[i] - t * g[i];
    next = box.project(next);
    if (next == beta) break;
    beta = next;
    const double v = objective.value(beta);
    if (v < best_value) {
      best_value = v;
      best = beta;
    }
  }
  BetaModel model;
  model.beta = std::move(best);
  model.box = box;
  model.objective_value = best_value;
  model.iterations_run = iterations;
  return model;
}

BetaModel fit(const rankers::ScoreDistribution& dist, const FeatureMatrix& features, const Box& box,
              int max_iters, StepRule step) {
  BetaModel model = fit(Objective(dist, features), box, max_iters, step);
  model.feature_names = features.feature_names;
  return model;
}

Ranking rank_by_beta(const BetaModel& model, const FeatureMatrix& features) {
  features.validate();
  if (model.beta.size() != features.feature_count()) {
    throw std::invalid_argument("model and feature matrix disagree on the number of features");
  }
  std::vector<ScoredProgram> scored;
  for (std::size_t c = 0; c < features.programs.size(); ++c) {
    scored.push_back({features.programs[c], dot(model.beta, features.x[c]), 0.0, std::nullopt});
  }
  return make_ranking(std::move(scored), RankMethod::Beta);
}

void write_model_json(const BetaModel& model, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["feature_names"] = model.feature_names;
  doc["beta"] = model.beta;
  doc["box"] = {{"lo", model.box.lo}, {"hi", model.box.hi}};
  doc["objective_value"] = model.objective_value;
  doc["iterations_run"] = model.iterations_run;
  out << doc.dump(2) << '\n';
}

void write_model_json(const BetaModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  write_model_json(model, out);
}

}  // namespace revrank::betafit
