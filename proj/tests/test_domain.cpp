#include <gtest/gtest.h>

#include "helpers.hpp"
#include "revrank/domain.hpp"

using namespace revrank;
using testutil::report;

TEST(ScoreGrid, DefaultsAndIndexing) {
  ScoreGrid g;
  EXPECT_EQ(g.size(), 61u);
  EXPECT_TRUE(g.contains(200));
  EXPECT_TRUE(g.contains(800));
  EXPECT_FALSE(g.contains(805));
  EXPECT_FALSE(g.contains(190));
  EXPECT_EQ(g.index_of(210), 1u);
  EXPECT_EQ(g.score_at(60), 800);
  EXPECT_THROW((void)g.index_of(205), std::out_of_range);
}

TEST(ScoreGrid, RejectsBadShapes) {
  EXPECT_THROW(ScoreGrid(200, 800, 0), std::invalid_argument);
  EXPECT_THROW(ScoreGrid(800, 200, 10), std::invalid_argument);
  EXPECT_THROW(ScoreGrid(200, 805, 10), std::invalid_argument);
  EXPECT_EQ(ScoreGrid(0, 100, 1).size(), 101u);
}

TEST(Dataset, ProgramIndexRoundTripsAndIgnoresRowOrder) {
  Dataset a({report("c1", "B", 600), report("c1", "A", 600), report("c2", "C", 500)});
  Dataset b({report("c2", "C", 500), report("c1", "A", 600), report("c1", "B", 600)});
  ASSERT_EQ(a.program_count(), 3u);
  for (std::size_t k = 0; k < a.program_count(); ++k) {
    EXPECT_EQ(*a.index_of(a.program_id(k)), k);
    EXPECT_EQ(a.program_id(k), b.program_id(k));
  }
  EXPECT_FALSE(a.index_of(ProgramId("Z")).has_value());
}

TEST(Validate, EmptyDatasetIsClean) { EXPECT_TRUE(validate_dataset(Dataset{}).empty()); }

TEST(Validate, OffGridScoreNamesRowZero) {
  const auto v = validate_dataset(Dataset({report("c1", "A", 805)}));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].row, 0u);
  EXPECT_EQ(v[0].rule, "off-grid-score");
  EXPECT_EQ(v[0].severity, Severity::Error);
}

TEST(Validate, SixProgramsInOneAttemptIsACapWarning) {
  std::vector<ScoreReport> rows;
  for (char p = 'A'; p <= 'F'; ++p) rows.push_back(report("c1", std::string(1, p), 700));
  const auto soft = validate_dataset(Dataset(rows));
  ASSERT_EQ(soft.size(), 1u);
  EXPECT_EQ(soft[0].rule, "selection-cap");
  EXPECT_EQ(soft[0].severity, Severity::Warning);
  EXPECT_FALSE(has_errors(soft));

  const auto strict = validate_dataset(Dataset(rows), {5, true});
  ASSERT_EQ(strict.size(), 1u);
  EXPECT_TRUE(has_errors(strict));

  rows.pop_back();
  EXPECT_TRUE(validate_dataset(Dataset(rows)).empty());
}

TEST(Validate, CapCountsPerAttempt) {
  std::vector<ScoreReport> rows;
  for (char p = 'A'; p <= 'E'; ++p) rows.push_back(report("c1", std::string(1, p), 700, 2014, 1));
  for (char p = 'F'; p <= 'J'; ++p) rows.push_back(report("c1", std::string(1, p), 720, 2014, 2));
  EXPECT_TRUE(validate_dataset(Dataset(rows)).empty());
}

TEST(Validate, OtherRules) {
  const auto v = validate_dataset(Dataset({report("", "A", 700), report("c1", "", 700), report("c2", "A", 700, 2014, 0),
                                           report("c3", "A", 700), report("c3", "B", 710)}));
  std::vector<std::string> rules;
  for (const auto& x : v) rules.push_back(x.rule);
  EXPECT_EQ(rules, (std::vector<std::string>{"empty-candidate-id", "empty-program-id", "attempt-index",
                                             "inconsistent-attempt-score"}));
}

TEST(Ranking, RanksAndTieGroups) {
  Ranking r({{ProgramId("A"), 3.0, 0, {}}, {ProgramId("B"), 2.0, 0, {}}, {ProgramId("C"), 2.0, 0, {}},
             {ProgramId("D"), 1.0, 0, {}}},
            RankMethod::M);
  ASSERT_EQ(r.size(), 4u);
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_EQ(r.entries()[i].rank, static_cast<int>(i) + 1);
  ASSERT_EQ(r.tie_groups().size(), 1u);
  EXPECT_EQ(r.tie_groups()[0], (std::vector<int>{2, 3}));
  EXPECT_EQ(r.top(2).size(), 2u);
  EXPECT_EQ(r.top(10).size(), 4u);
}

TEST(Ranking, RejectsIncreasingMetricAndDuplicates) {
  EXPECT_THROW(Ranking({{ProgramId("A"), 1.0, 0, {}}, {ProgramId("B"), 2.0, 0, {}}}, RankMethod::M),
               std::invalid_argument);
  EXPECT_THROW(Ranking({{ProgramId("A"), 2.0, 0, {}}, {ProgramId("A"), 1.0, 0, {}}}, RankMethod::M),
               std::invalid_argument);
}

TEST(Ranking, MakeRankingOrdersByMetricThenTieBreakThenId) {
  const auto r = make_ranking({{ProgramId("b"), 1.0, 0.0, {}}, {ProgramId("a"), 1.0, 0.0, {}},
                               {ProgramId("c"), 1.0, 5.0, {}}, {ProgramId("d"), 2.0, 0.0, {}}},
                              RankMethod::Tournament);
  EXPECT_EQ(testutil::ids(r), (std::vector<std::string>{"d", "c", "a", "b"}));
  ASSERT_EQ(r.tie_groups().size(), 1u);
  EXPECT_EQ(r.tie_groups()[0], (std::vector<int>{2, 3, 4}));
}

TEST(RankMethod, StringRoundTrip) {
  for (auto m : {RankMethod::M, RankMethod::MPlusRecursive, RankMethod::Tournament, RankMethod::Beta,
                 RankMethod::External}) {
    EXPECT_EQ(rank_method_from_string(to_string(m)), m);
  }
  EXPECT_THROW(rank_method_from_string("bogus"), std::invalid_argument);
}
