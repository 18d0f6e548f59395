#pragma once

#include <string>
#include <vector>

#include "revrank/domain.hpp"

namespace testutil {

inline revrank::ScoreReport report(std::string candidate, std::string program, int score, int year = 2014,
                                   int attempt = 1) {
  revrank::ScoreReport r;
  r.candidate_id = std::move(candidate);
  r.program_id = revrank::ProgramId(std::move(program));
  r.score = score;
  r.test_year = year;
  r.attempt_index = attempt;
  return r;
}

inline revrank::Dataset dataset(std::vector<revrank::ScoreReport> rows, revrank::ScoreGrid grid = {}) {
  return revrank::Dataset(std::move(rows), grid);
}

inline std::vector<std::string> ids(const revrank::Ranking& r) {
  std::vector<std::string> out;
  for (const auto& e : r.entries()) out.push_back(e.program_id.value);
  return out;
}

}  // namespace testutil
