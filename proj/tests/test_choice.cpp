#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "revrank/choice.hpp"

using namespace revrank;
using namespace revrank::choice;

namespace {

std::vector<CollegeOffer> random_offers(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> p(0.01, 0.99);
  std::uniform_real_distribution<double> v(0.1, 10.0);
  std::vector<CollegeOffer> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({i, p(rng), v(rng)});
  return out;
}

}  // namespace

TEST(ExpectedUtility, HandValues) {
  EXPECT_DOUBLE_EQ(expected_utility({}), 0.0);
  const std::vector<CollegeOffer> one{{0, 0.5, 2.0}};
  EXPECT_DOUBLE_EQ(expected_utility(one), 1.0);
  const std::vector<CollegeOffer> two{{0, 0.5, 1.0}, {1, 0.5, 2.0}};
  EXPECT_DOUBLE_EQ(expected_utility(two), 1.25);
}

TEST(ExpectedUtility, MatchesOutcomeEnumerationAndIgnoresOrder) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    auto offers = random_offers(rng, 1 + t % 7);
    const double v = expected_utility(offers);
    EXPECT_NEAR(v, oracle::expected_utility(offers), 1e-12);
    std::shuffle(offers.begin(), offers.end(), rng);
    EXPECT_NEAR(expected_utility(offers), v, 1e-12);
  }
}

TEST(ValidateOffer, RejectsZeroUtilityAndBadProbability) {
  EXPECT_THROW(validate_offer({0, 0.5, 0.0}), std::invalid_argument);
  EXPECT_THROW(validate_offer({0, 1.5, 1.0}), std::invalid_argument);
  EXPECT_THROW(validate_offer({0, -0.1, 1.0}), std::invalid_argument);
  EXPECT_NO_THROW(validate_offer({0, 1.0, 1e-9}));
}

TEST(Undominated, SmallCases) {
  const std::vector<CollegeOffer> frontier{{0, 0.9, 1.0}, {1, 0.5, 2.0}};
  EXPECT_EQ(undominated(frontier), frontier);
  const std::vector<CollegeOffer> same_p{{0, 0.9, 1.0}, {1, 0.9, 2.0}};
  EXPECT_EQ(undominated(same_p), (std::vector<CollegeOffer>{{1, 0.9, 2.0}}));
  const std::vector<CollegeOffer> copies{{0, 0.7, 3.0}, {1, 0.7, 3.0}};
  EXPECT_EQ(undominated(copies), copies);
}

TEST(Undominated, MatchesQuadraticScan) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coarse(1, 5);
  for (int t = 0; t < 300; ++t) {
    std::vector<CollegeOffer> offers;
    for (std::size_t i = 0; i < 20; ++i) {
      // coarse values force plenty of ties
      offers.push_back({i, coarse(rng) / 5.0, static_cast<double>(coarse(rng))});
    }
    EXPECT_EQ(undominated(offers), oracle::undominated(offers));
  }
}

TEST(OptimalPortfolio, BudgetZeroAndOne) {
  const std::vector<CollegeOffer> offers{{0, 0.9, 1.0}, {1, 0.3, 2.0}};
  const auto empty = optimal_portfolio(offers, 0);
  EXPECT_TRUE(empty.offers.empty());
  EXPECT_EQ(empty.value, 0.0);
  const auto one = optimal_portfolio(offers, 1);
  ASSERT_EQ(one.offers.size(), 1u);
  EXPECT_EQ(one.offers[0].program, 0u);
  EXPECT_DOUBLE_EQ(one.value, 0.9);
  EXPECT_THROW(optimal_portfolio(offers, -1), std::invalid_argument);
  EXPECT_THROW(optimal_portfolio({}, 1), std::invalid_argument);
}

TEST(OptimalPortfolio, EqualsBruteForceWithDuplicates) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const auto offers = undominated(random_offers(rng, 5));
    for (int k = 1; k <= 4; ++k) {
      const auto greedy = optimal_portfolio(offers, k, true);
      const auto brute = brute_force_portfolio(offers, k, true);
      EXPECT_NEAR(greedy.value, brute.value, 1e-9);
      EXPECT_NEAR(greedy.value, oracle::best_multiset_value(offers, k), 1e-9);
      EXPECT_NEAR(greedy.value, expected_utility(greedy.offers), 1e-12);
    }
  }
}

TEST(OptimalPortfolio, ValueGrowsWithBudgetAndUtilitiesRiseByPosition) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const auto offers = undominated(random_offers(rng, 8));
    double previous = 0.0;
    for (int k = 1; k <= 6; ++k) {
      const auto p = optimal_portfolio(offers, k);
      EXPECT_GE(p.value, previous - 1e-15);
      previous = p.value;
      for (std::size_t i = 1; i < p.offers.size(); ++i) {
        EXPECT_LE(p.offers[i - 1].utility, p.offers[i].utility);
      }
    }
  }
}

TEST(OptimalPortfolio, ChosenUtilityByPositionRisesWithScore) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> threshold(300.0, 700.0);
  std::uniform_real_distribution<double> utility(0.5, 5.0);
  std::uniform_int_distribution<int> score_index(0, 60);
  const NoiseCdf noise(0.004, 200.0 - 700.0);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    std::vector<double> th(8), v(8);
    for (std::size_t j = 0; j < 8; ++j) {
      th[j] = threshold(rng);
      v[j] = utility(rng);
    }
    int s1 = 200 + 10 * score_index(rng);
    int s2 = 200 + 10 * score_index(rng);
    if (s1 > s2) std::swap(s1, s2);
    const int k1 = 1 + t % 4;
    const int k2 = k1 + t % 2;
    auto priced = [&](int s) {
      std::vector<CollegeOffer> o;
      for (std::size_t j = 0; j < 8; ++j) o.push_back({j, admit_prob(s, th[j], noise, true), v[j]});
      return optimal_portfolio(undominated(o), s == s1 ? k1 : k2);
    };
    const auto low = priced(s1);
    const auto high = priced(s2);
    ASSERT_EQ(low.offers.size(), static_cast<std::size_t>(k1));
    for (int k = 0; k < k1; ++k) {
      EXPECT_LE(low.offers[k].utility, high.offers[k].utility) << "t=" << t << " k=" << k;
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

// Without duplicate programs the greedy recursion is not optimal. Find an
// instance where the exhaustive search wins, so the duplicates mode is
// demonstrably needed.
TEST(OptimalPortfolio, WithoutDuplicatesGreedyCanLose) {
  std::mt19937_64 rng(1234);
  bool found = false;
  std::vector<CollegeOffer> witness;
  for (int t = 0; t < 20000 && !found; ++t) {
    const auto offers = undominated(random_offers(rng, 4));
    if (offers.size() < 2) continue;
    const auto greedy = optimal_portfolio(offers, 2, false);
    const auto brute = brute_force_portfolio(offers, 2, false);
    EXPECT_GE(brute.value, greedy.value - 1e-12);
    if (brute.value > greedy.value + 1e-9) {
      found = true;
      witness = offers;
    }
  }
  ASSERT_TRUE(found);
  const auto greedy = optimal_portfolio(witness, 2, false);
  const auto brute = brute_force_portfolio(witness, 2, false);
  EXPECT_EQ(greedy.programs().size(), 2u);
  EXPECT_GT(brute.value, greedy.value);
  EXPECT_NEAR(brute.value, oracle::expected_utility(brute.offers), 1e-12);
}

TEST(BruteForce, BudgetOneScansBestSingleOffer) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto offers = random_offers(rng, 6);
    double best = 0.0;
    for (const auto& o : offers) best = std::max(best, o.admit_prob * o.utility);
    EXPECT_NEAR(brute_force_portfolio(offers, 1).value, best, 1e-15);
  }
}

TEST(BruteForce, FullBudgetWithoutDuplicatesCoversPowerSet) {
  const std::vector<CollegeOffer> offers{{0, 0.9, 1.0}, {1, 0.5, 2.0}, {2, 0.2, 5.0}};
  const auto p = brute_force_portfolio(offers, 3, false);
  EXPECT_NEAR(p.value, oracle::expected_utility(offers), 1e-15);
  EXPECT_EQ(p.offers.size(), 3u);
}

TEST(BruteForce, Guard) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(brute_force_portfolio(random_offers(rng, 13), 2), std::invalid_argument);
  EXPECT_THROW(brute_force_portfolio(random_offers(rng, 4), 6), std::invalid_argument);
}

TEST(AdmitProb, ClosedFormsAndLimits) {
  const NoiseCdf noise(0.2, -10.0);
  EXPECT_NEAR(admit_prob(600, 600, noise), 1.0 - std::exp(-2.0), 1e-15);
  EXPECT_NEAR(admit_prob(600, 600, noise), 0.8647, 1e-4);
  EXPECT_EQ(admit_prob(590, 600, noise), 0.0);
  EXPECT_NEAR(admit_prob(1e6, 0, noise), 1.0, 1e-15);
  EXPECT_THROW(admit_prob(580, 600, noise, true), std::domain_error);
  EXPECT_NO_THROW(admit_prob(590, 600, noise, true));
}

TEST(NoiseCdf, ConcaveRightOfAnchor) {
  std::mt19937_64 rng(4);
  const NoiseCdf f(0.01, -300.0);
  std::uniform_real_distribution<double> x(-300.0, 600.0);
  for (int t = 0; t < 10000; ++t) {
    double a = x(rng), b = x(rng), c = x(rng);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    if (!(a < b && b < c)) continue;
    const double w = (c - b) / (c - a);
    EXPECT_GE(f(b), w * f(a) + (1 - w) * f(c) - 1e-12);
  }
  EXPECT_THROW(NoiseCdf(0.0, -1.0), std::invalid_argument);
}
