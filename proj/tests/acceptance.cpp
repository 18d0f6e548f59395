// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "revrank/betafit.hpp"
#include "revrank/choice.hpp"
#include "revrank/cli.hpp"
#include "revrank/ingest.hpp"
#include "revrank/rankers.hpp"
#include "revrank/ranking_io.hpp"
#include "revrank/simgen.hpp"
#include "revrank/stats.hpp"

using namespace revrank;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream ss;
  ss.precision(digits);
  ss << v;
  return ss.str();
}

// Spearman between the two bundled fixture orders (average ranks for the
// tied win counts), computed once and pinned as a regression value.
constexpr double kPinnedFixtureSpearman = 0.9313438902054108;

std::vector<rankers::ScoredSelection> selections_for(const simgen::Market& market, std::span<const double> v,
                                                     std::vector<choice::Portfolio>* portfolios = nullptr) {
  std::vector<rankers::ScoredSelection> out;
  for (int s : market.grid.scores()) {
    const auto p = simgen::select_portfolio(market, v, s);
    rankers::ScoredSelection sel{s, {}};
    for (const auto& o : p.offers) sel.programs.push_back(o.program);
    out.push_back(std::move(sel));
    if (portfolios) portfolios->push_back(p);
  }
  return out;
}

// ---- 1 ----
Outcome oracle_equivalence() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto start = Clock::now();
  double worst = 0.0;
  int failures = 0;
  for (int trial = 0; trial < 500; ++trial) {
    // undominated by construction: utility up, admission odds down
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<double> us(n), ps(n);
    for (auto& x : us) x = 0.1 + 10.0 * u(rng);
    for (auto& x : ps) x = 0.01 + 0.98 * u(rng);
    std::sort(us.begin(), us.end());
    std::sort(ps.begin(), ps.end(), std::greater<>());
    std::vector<choice::CollegeOffer> offers;
    for (int i = 0; i < n; ++i) offers.push_back({static_cast<std::size_t>(i), ps[i], us[i]});
    std::shuffle(offers.begin(), offers.end(), rng);
    const int k = 1 + static_cast<int>(rng() % 4);
    const double recursive = choice::optimal_portfolio(offers, k).value;
    const double brute = choice::brute_force_portfolio(offers, k).value;
    const double gap = std::abs(recursive - brute);
    worst = std::max(worst, gap);
    if (gap > 1e-9 || std::abs(recursive - oracle::best_multiset_value(offers, k)) > 1e-9) ++failures;
  }
  const double elapsed = seconds_since(start);
  return {failures == 0 && elapsed < 5.0,
          "500 instances, max |V_rec - V_brute| = " + fmt(worst) + ", " + std::to_string(failures) +
              " mismatches, " + fmt(elapsed, 3) + " s"};
}

// ---- 2 and 3 share instances ----
simgen::Market fixed_utility_market(std::uint64_t seed) {
  return simgen::build_market({{"programs", "10"}}, seed);
}

Outcome fosd_exact_suite() {
  std::size_t violations = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto market = fixed_utility_market(1000 + i);
    const auto v = simgen::sample_utilities(market, simgen::derive_seed(77, i));
    violations += stats::fosd_check_exact(selections_for(market, v), simgen::ground_truth(market)).violations.size();
  }

  // Budgets 1..5 on five consecutive scores: every step raises the budget.
  std::size_t instances_without_strict = 0;
  std::size_t strict_cells = 0;
  std::size_t cells = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto market = simgen::build_market({{"programs", "10"},
                                              {"score_min", "500"},
                                              {"score_max", "540"},
                                              {"budget_base", "1"},
                                              {"budget_step", "10"},
                                              {"budget_cap", "5"}},
                                             2000 + i);
    const auto v = simgen::sample_utilities(market, simgen::derive_seed(78, i));
    const auto tails = stats::exact_tails(selections_for(market, v), simgen::ground_truth(market));
    bool any = false;
    for (const auto& row : tails.tails) {
      for (std::size_t s = 0; s + 1 < row.size(); ++s) {
        ++cells;
        if (row[s + 1] > row[s]) {
          ++strict_cells;
          any = true;
        }
      }
    }
    if (!any) ++instances_without_strict;
  }
  return {violations == 0 && instances_without_strict == 0,
          "200 fixed-utility instances, " + std::to_string(violations) + " tail violations; strict budgets: " +
              std::to_string(200 - instances_without_strict) + "/200 instances with a strict tail increase (" +
              std::to_string(strict_cells) + "/" + std::to_string(cells) + " tail steps strict)"};
}

Outcome position_monotonicity() {
  std::size_t violations = 0;
  std::size_t checks = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto market = fixed_utility_market(1000 + i);
    const auto v = simgen::sample_utilities(market, simgen::derive_seed(77, i));
    std::vector<choice::Portfolio> portfolios;
    selections_for(market, v, &portfolios);
    for (std::size_t a = 0; a < portfolios.size(); ++a) {
      for (std::size_t b = a + 1; b < portfolios.size(); ++b) {
        const auto& lo = portfolios[a].offers;
        const auto& hi = portfolios[b].offers;
        for (std::size_t k = 0; k < std::min(lo.size(), hi.size()); ++k) {
          ++checks;
          if (hi[k].utility < lo[k].utility) ++violations;
        }
      }
    }
  }
  return {violations == 0,
          std::to_string(checks) + " position comparisons, " + std::to_string(violations) + " violations"};
}

// ---- 4 ----
Outcome tournament_guarantee() {
  std::vector<double> ratios;
  std::size_t below = 0;
  std::size_t perfect = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto market = simgen::build_market(
        {{"programs", "20"}, {"budget_base", "5"}, {"budget_step", "0"}, {"budget_cap", "5"}}, 3000 + i);
    const auto v = simgen::sample_utilities(market, simgen::derive_seed(79, i));
    const auto tally = rankers::pairwise_correctness_ratio(selections_for(market, v), simgen::ground_truth(market));
    if (static_cast<double>(tally.correct) < 1.33 * static_cast<double>(tally.incorrect)) ++below;
    if (tally.incorrect == 0) {
      ++perfect;
    } else {
      ratios.push_back(tally.ratio());
    }
  }
  std::sort(ratios.begin(), ratios.end());
  std::string spread = "no finite ratios";
  if (!ratios.empty()) {
    auto q = [&](double p) { return ratios[static_cast<std::size_t>(p * static_cast<double>(ratios.size() - 1))]; };
    spread = "ratio min " + fmt(q(0.0)) + ", p25 " + fmt(q(0.25)) + ", median " + fmt(q(0.5)) + ", p75 " +
             fmt(q(0.75)) + ", max " + fmt(q(1.0));
  }
  return {below == 0, "100 markets, K = 5: " + std::to_string(below) + " below 1.33; " + spread + "; " +
                          std::to_string(perfect) + " with no incorrect comparison"};
}

// ---- 5 ----
Outcome recovery() {
  const auto start = Clock::now();
  const auto market = simgen::build_market(simgen::read_key_values(std::string(REVRANK_DATA_DIR) + "/recovery_market.cfg"), 7);
  const auto raw = simgen::generate_dataset(market, 100000, 7);
  const auto d = ingest::apply_filters(raw, {});
  const auto truth = simgen::ground_truth_ranking(market);
  const auto m = rankers::rank_by_m(rankers::score_distribution(d));
  const auto t = rankers::tournament(d).ranking;
  const double rho_m = stats::spearman(m, truth);
  const double rho_t = stats::spearman(t, truth);
  const double elapsed = seconds_since(start);
  return {rho_m >= 0.9 && rho_t >= 0.9 && elapsed < 60.0,
          "100000 students, " + std::to_string(d.program_count()) + " ranked programs: spearman m " + fmt(rho_m) +
              ", tournament " + fmt(rho_t) + ", " + fmt(elapsed, 3) + " s"};
}

// ---- 6 ----
Outcome tournament_oracle() {
  std::mt19937_64 rng(606);
  std::size_t mismatches = 0;
  std::size_t cells = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int candidates = 20 + static_cast<int>(rng() % 181);
    const int programs = 3 + static_cast<int>(rng() % 10);
    const int years = 1 + static_cast<int>(rng() % 3);
    std::vector<ScoreReport> rows;
    for (int i = 0; i < candidates; ++i) {
      const int attempts = 1 + static_cast<int>(rng() % 2);
      for (int a = 1; a <= attempts; ++a) {
        const int year = 2010 + static_cast<int>(rng() % years);
        const int score = 200 + 10 * static_cast<int>(rng() % 61);
        const int k = 1 + static_cast<int>(rng() % 5);
        for (int j = 0; j < k; ++j) {
          ScoreReport r;
          r.candidate_id = "c" + std::to_string(i);
          r.program_id = ProgramId("P" + std::to_string(rng() % programs));
          r.score = score;
          r.test_year = year;
          r.attempt_index = a;
          rows.push_back(std::move(r));
        }
      }
    }
    const Dataset d(rows);
    for (bool per_year : {true, false}) {
      const auto fast = rankers::tournament(d, per_year);
      const auto all = oracle::sittings(d, per_year);
      for (std::size_t a = 0; a < fast.programs.size(); ++a) {
        for (std::size_t b = 0; b < fast.programs.size(); ++b) {
          if (a == b) continue;
          ++cells;
          if (fast.points[a][b] != oracle::tournament_points(all, fast.programs[a].value, fast.programs[b].value)) {
            ++mismatches;
          }
        }
      }
    }
  }
  return {mismatches == 0, "20 datasets, " + std::to_string(cells) + " ordered pairs, " +
                               std::to_string(mismatches) + " mismatches"};
}

// ---- 7 ----
struct BetaInstance {
  rankers::ScoreDistribution dist;
  betafit::FeatureMatrix features;
};

BetaInstance random_beta_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> z;
  BetaInstance inst;
  const std::size_t m = 6, T = 8, n = 3;
  for (std::size_t c = 0; c < m; ++c) inst.dist.programs.emplace_back("P" + std::to_string(c));
  for (std::size_t s = 0; s < T; ++s) inst.dist.scores.push_back(200 + 10 * static_cast<int>(s));
  inst.dist.g.assign(m, std::vector<double>(T));
  for (auto& row : inst.dist.g) {
    for (auto& v : row) v = u(rng);
  }
  inst.dist.candidates_per_score.assign(T, 10);
  inst.dist.empty_column.assign(T, false);
  inst.features.programs = inst.dist.programs;
  for (std::size_t k = 0; k < n; ++k) inst.features.feature_names.push_back("x" + std::to_string(k));
  inst.features.x.assign(m, std::vector<double>(n));
  for (auto& row : inst.features.x) {
    for (auto& v : row) v = z(rng);
  }
  return inst;
}

Outcome betafit_suite() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> t01(0.0, 1.0);
  auto draw = [&](std::size_t n) {
    std::vector<double> b(n);
    for (auto& v : b) v = u(rng);
    return b;
  };

  std::size_t convexity_failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto inst = random_beta_instance(rng);
    const betafit::Objective obj(inst.dist, inst.features);
    const auto b1 = draw(3);
    const auto b2 = draw(3);
    const double t = t01(rng);
    std::vector<double> mid(3);
    for (std::size_t k = 0; k < 3; ++k) mid[k] = t * b1[k] + (1 - t) * b2[k];
    if (obj.value(mid) > t * obj.value(b1) + (1 - t) * obj.value(b2) + 1e-12) ++convexity_failures;
  }

  constexpr double h = 1e-6;
  std::size_t smooth = 0;
  double worst_fd = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto inst = random_beta_instance(rng);
    const betafit::Objective obj(inst.dist, inst.features);
    const auto beta = draw(3);
    auto dir = draw(3);
    const double norm = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
    for (auto& v : dir) v /= norm;
    std::vector<double> fwd(3), bwd(3);
    for (std::size_t k = 0; k < 3; ++k) {
      fwd[k] = beta[k] + h * dir[k];
      bwd[k] = beta[k] - h * dir[k];
    }
    const double f0 = obj.value(beta);
    const double df = (obj.value(fwd) - f0) / h;
    const double db = (f0 - obj.value(bwd)) / h;
    if (std::abs(df - db) > 1e-7) continue;  // kink within h
    ++smooth;
    const auto g = obj.subgradient(beta);
    const double analytic = g[0] * dir[0] + g[1] * dir[1] + g[2] * dir[2];
    worst_fd = std::max(worst_fd, std::abs(analytic - df));
  }

  // Sorted synthetic market: no idiosyncratic taste, one application each,
  // near-linear admission odds. Every score picks one program and the pick
  // never moves down, so the threshold feature is exactly monotone.
  const auto market = simgen::build_market({{"programs", "12"},
                                            {"threshold_min", "300"},
                                            {"threshold_max", "750"},
                                            {"threshold_layout", "even"},
                                            {"utility_sigma", "0"},
                                            {"noise_rate", "0.0001"},
                                            {"budget_base", "1"},
                                            {"budget_step", "0"},
                                            {"budget_cap", "1"},
                                            {"score_law", "uniform"}},
                                           17);
  const auto d = simgen::generate_dataset(market, 20000, 17);
  const auto dist = rankers::score_distribution(d);
  // x0 = t + z, x1 = t - z with beta0 pinned to 1: only beta1 = 1 cancels z.
  std::normal_distribution<double> noise(0.0, 100.0);
  std::mt19937_64 zrng(18);
  betafit::FeatureMatrix features;
  features.feature_names = {"t_plus_z", "t_minus_z"};
  for (std::size_t c = 0; c < market.size(); ++c) {
    const double z = noise(zrng);
    features.programs.push_back(market.programs[c]);
    features.x.push_back({market.thresholds[c] + z, market.thresholds[c] - z});
  }
  const betafit::Box box{{1.0, -1.0}, {1.0, 1.0}};
  const double at_center = betafit::objective(box.center(), dist, features);
  const auto model = betafit::fit(dist, features, box, 10000);
  const double rho = stats::spearman(betafit::rank_by_beta(model, features), simgen::ground_truth_ranking(market));

  const bool pass = convexity_failures == 0 && smooth >= 100 && worst_fd <= 1e-5 && at_center > 0.0 &&
                    model.objective_value <= 1e-6 && rho >= 0.9;
  return {pass, "convexity failures " + std::to_string(convexity_failures) + "/1000; finite differences max gap " +
                    fmt(worst_fd) + " over " + std::to_string(smooth) + " smooth points; recoverable fit objective " +
                    fmt(model.objective_value) + " (start " + fmt(at_center) + ") after " +
                    std::to_string(model.iterations_run) + " iterations, beta1 " + fmt(model.beta[1]) +
                    ", spearman " + fmt(rho)};
}

// ---- 8 ----
Outcome fixtures() {
  const std::string dir = std::string(REVRANK_DATA_DIR) + "/fixtures/";
  const auto m = io::read_ranking(dir + "table2_m_measures.csv");
  const auto wins = io::read_ranking(dir + "table5_tournament_wins.csv");
  bool ok = m.size() == 35 && wins.size() == 35;

  // printed order must be the metric order
  std::vector<ScoredProgram> scored;
  for (const auto& e : m.entries()) scored.push_back({e.program_id, e.metric_value, 0.0, {}});
  const auto resorted = make_ranking(scored, RankMethod::M);
  bool strictly_descending = true;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (resorted.entries()[i].program_id != m.entries()[i].program_id) ok = false;
    if (i > 0 && !(m.entries()[i].metric_value < m.entries()[i - 1].metric_value)) strictly_descending = false;
  }
  ok = ok && strictly_descending;

  const auto common = stats::common_programs(m, wins).size();
  const double rho = stats::spearman(m, wins);
  const double rho_classic = stats::spearman_classic(m, wins);
  const bool pinned = std::abs(rho - kPinnedFixtureSpearman) <= 1e-12;
  return {ok && pinned, "35 + 35 rows, m column strictly descending: " + std::string(strictly_descending ? "yes" : "no") +
                            "; " + std::to_string(common) + " common programs, spearman " + io::format_number(rho) +
                            " (pinned " + io::format_number(kPinnedFixtureSpearman) + "), positional " +
                            fmt(rho_classic)};
}

// ---- 9 ----
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "revrank_acceptance_determinism";
  fs::remove_all(root);
  std::ostringstream sink;
  auto cli = [&](std::vector<std::string> args) { return cli::run(args, sink, sink); };
  int failures = 0;
  std::size_t compared = 0;
  for (const char* run : {"a", "b"}) {
    const auto base = root / run;
    fs::create_directories(base);
    const auto data = (base / "data.csv").string();
    failures += cli({"simulate", "--n", "5000", "--seed", "42", "--set", "programs=15", "--out", data}) != 0;
    failures += cli({"rank", "--in", data, "--method", "m,mplus,tournament", "--min-reports", "50", "--truth",
                     (base / "data.truth.csv").string(), "--out", (base / "rank").string()}) != 0;
    std::ofstream features(base / "features.csv");
    features << "program_id,threshold\n";
    const auto truth = io::read_ranking((base / "data.truth.csv").string());
    for (const auto& e : truth.entries()) {
      features << e.program_id.value << ',' << io::format_number(e.metric_value) << '\n';
    }
    features.close();
    failures += cli({"fit-beta", "--in", data, "--features", (base / "features.csv").string(), "--max-iters", "500",
                     "--min-reports", "50", "--out", (base / "beta").string()}) != 0;
  }
  bool identical = failures == 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), root / "a");
    const std::string name = rel.filename().string();
    if (name == "metadata.json" || name == "data.meta.json") continue;  // record their own paths
    ++compared;
    if (slurp(entry.path()) != slurp(root / "b" / rel)) identical = false;
  }
  fs::remove_all(root);
  std::string first_error;
  if (failures) {
    const std::string text = sink.str();
    const auto at = text.find("error");
    if (at != std::string::npos) first_error = "; " + text.substr(at, text.find('\n', at) - at);
  }
  return {identical && compared >= 10,
          std::to_string(compared) + " output files compared across two runs, " +
              (identical ? "all byte-identical" : "differences found") +
              (failures ? ", " + std::to_string(failures) + " commands failed" : "") + first_error};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle equivalence of the recursive portfolio", oracle_equivalence},
      {"exact tail dominance for fixed utilities", fosd_exact_suite},
      {"position-k utility monotone in score", position_monotonicity},
      {"tournament correct/incorrect guarantee", tournament_guarantee},
      {"ranking recovery on a 50-program market", recovery},
      {"fast tournament equals literal count", tournament_oracle},
      {"beta fit: convexity, recovery, subgradient", betafit_suite},
      {"bundled fixture tables", fixtures},
      {"byte-identical reruns", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
