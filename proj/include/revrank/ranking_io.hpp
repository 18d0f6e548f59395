#pragma once

// Ranking files. CSV: header rank,program_id,metric. JSON: method_tag,
// entries (rank, program_id, metric, optional detail) and tie_groups.

#include <iosfwd>
#include <string>

#include "revrank/domain.hpp"

namespace revrank::io {

/// Shortest text that reads back to the same double.
std::string format_number(double value);

void write_ranking_csv(const Ranking& ranking, std::ostream& out);
void write_ranking_json(const Ranking& ranking, std::ostream& out);
void write_ranking_csv(const Ranking& ranking, const std::string& path);
void write_ranking_json(const Ranking& ranking, const std::string& path);

/// Reads rows in file order. Needs program_id and metric columns; a rank
/// column, if present, must count 1, 2, ... Extra columns and '#' lines are
/// skipped. Throws DataError on malformed input or an increasing metric.
Ranking read_ranking_csv(std::istream& in, const std::string& source = "<stream>",
                         RankMethod method = RankMethod::External);
Ranking read_ranking_json(std::istream& in, const std::string& source = "<stream>");

/// Dispatches on the extension (.json, otherwise CSV).
Ranking read_ranking(const std::string& path);

}  // namespace revrank::io
