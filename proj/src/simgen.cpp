#include "revrank/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace revrank::simgen {

int BudgetRule::budget(int score) const {
  int k = base;
  if (step_width > 0) {
    const int offset = score - origin;
    // floor division, also for scores below the origin
    int steps = offset / step_width;
    if (offset % step_width != 0 && offset < 0) --steps;
    k = base + steps;
  }
  return std::clamp(k, 0, std::max(cap, 0));
}

ScoreLaw ScoreLaw::uniform(const ScoreGrid& grid) {
  return {std::vector<double>(grid.size(), 1.0 / static_cast<double>(grid.size()))};
}

ScoreLaw ScoreLaw::discretized_normal(const ScoreGrid& grid, double mean, double sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("score law sd must be > 0");
  ScoreLaw law;
  double total = 0.0;
  for (int s : grid.scores()) {
    const double z = (s - mean) / sd;
    law.weights.push_back(std::exp(-0.5 * z * z));
    total += law.weights.back();
  }
  if (!(total > 0.0)) throw std::invalid_argument("score law has no mass on the grid");
  for (auto& w : law.weights) w /= total;
  return law;
}

void Market::validate() const {
  if (programs.empty()) throw std::invalid_argument("market has no programs");
  if (thresholds.size() != programs.size()) {
    throw std::invalid_argument("market needs exactly one threshold per program");
  }
  std::set<ProgramId> seen;
  for (const auto& p : programs) {
    if (p.empty()) throw std::invalid_argument("market program id is empty");
    if (!seen.insert(p).second) throw std::invalid_argument("duplicate market program id " + p.value);
  }
  for (double t : thresholds) {
    if (!std::isfinite(t)) throw std::invalid_argument("market thresholds must be finite");
  }
  if (!(noise.rate > 0.0)) throw std::invalid_argument("noise rate must be > 0");
  const double max_threshold = *std::max_element(thresholds.begin(), thresholds.end());
  const double bound = grid.min() - max_threshold;
  if (noise.anchor > bound) {
    throw std::invalid_argument("noise anchor " + std::to_string(noise.anchor) +
                                " exceeds min score - max threshold = " + std::to_string(bound) +
                                "; admission probabilities would leave the concave domain");
  }
  if (!(utility_law.gamma >= 0.0) || !(utility_law.sigma >= 0.0)) {
    throw std::invalid_argument("utility gamma and sigma must be >= 0");
  }
  if (budget_rule.cap < 0 || budget_rule.step_width < 0) {
    throw std::invalid_argument("budget cap and step width must be >= 0");
  }
  if (score_law.weights.size() != grid.size()) {
    throw std::invalid_argument("score law must have one weight per grid score");
  }
  double total = 0.0;
  for (double w : score_law.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("score law weights must be >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("score law has zero total weight");
}

GroundTruth ground_truth(const Market& market) {
  std::vector<std::size_t> idx(market.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (market.thresholds[a] != market.thresholds[b]) return market.thresholds[a] > market.thresholds[b];
    return market.programs[a] < market.programs[b];
  });
  GroundTruth truth;
  truth.position.resize(market.size());
  for (std::size_t pos = 0; pos < idx.size(); ++pos) {
    truth.order.push_back(market.programs[idx[pos]]);
    truth.position[idx[pos]] = pos;
  }
  return truth;
}

Ranking ground_truth_ranking(const Market& market) {
  std::vector<ScoredProgram> scored;
  for (std::size_t k = 0; k < market.size(); ++k) {
    scored.push_back({market.programs[k], market.thresholds[k], 0.0, std::nullopt});
  }
  return make_ranking(std::move(scored), RankMethod::External);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> sample_utilities(const Market& market, Rng& rng) {
  const double t_min = *std::min_element(market.thresholds.begin(), market.thresholds.end());
  std::normal_distribution<double> eta(0.0, 1.0);
  std::vector<double> v(market.size());
  for (std::size_t j = 0; j < market.size(); ++j) {
    const double common = std::pow(market.thresholds[j] - t_min + 1.0, market.utility_law.gamma);
    v[j] = common * std::exp(market.utility_law.sigma * eta(rng));
  }
  return v;
}

std::vector<double> sample_utilities(const Market& market, std::uint64_t seed) {
  Rng rng(seed);
  return sample_utilities(market, rng);
}

std::vector<choice::CollegeOffer> price_offers(const Market& market, std::span<const double> utilities,
                                               int score) {
  if (utilities.size() != market.size()) {
    throw std::invalid_argument("utility vector length does not match the market");
  }
  std::vector<choice::CollegeOffer> offers(market.size());
  for (std::size_t j = 0; j < market.size(); ++j) {
    offers[j] = {j, choice::admit_prob(score, market.thresholds[j], market.noise), utilities[j]};
  }
  return offers;
}

choice::Portfolio select_portfolio(const Market& market, std::span<const double> utilities, int score,
                                   int budget) {
  if (budget <= 0) return {};
  const auto offers = price_offers(market, utilities, score);
  const auto frontier = choice::undominated(offers);
  return choice::optimal_portfolio(frontier, budget, true);
}

choice::Portfolio select_portfolio(const Market& market, std::span<const double> utilities, int score) {
  return select_portfolio(market, utilities, score, market.budget_rule.budget(score));
}

StudentDraw simulate_student(const Market& market, std::uint64_t seed) {
  Rng rng(seed);
  std::discrete_distribution<std::size_t> score_dist(market.score_law.weights.begin(),
                                                     market.score_law.weights.end());
  StudentDraw draw;
  draw.score = market.grid.score_at(score_dist(rng));
  draw.utilities = sample_utilities(market, rng);
  draw.portfolio = select_portfolio(market, draw.utilities, draw.score);
  return draw;
}

Dataset generate_dataset(const Market& market, std::size_t n_students, std::uint64_t seed,
                         const GenerateOptions& options) {
  if (n_students == 0) throw std::invalid_argument("n_students must be >= 1");
  market.validate();
  const std::size_t width = std::to_string(n_students).size();
  std::vector<ScoreReport> reports;
  reports.reserve(n_students * 3);
  for (std::size_t i = 0; i < n_students; ++i) {
    const auto draw = simulate_student(market, derive_seed(seed, i));
    std::string id = std::to_string(i + 1);
    id = "c" + std::string(width - id.size(), '0') + id;
    for (std::size_t k : draw.programs()) {
      ScoreReport r;
      r.candidate_id = id;
      r.program_id = market.programs[k];
      r.score = draw.score;
      r.test_year = options.test_year;
      r.attempt_index = 1;
      reports.push_back(std::move(r));
    }
  }
  return Dataset(std::move(reports), market.grid);
}

}  // namespace revrank::simgen
