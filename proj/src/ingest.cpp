#include "revrank/ingest.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <tuple>

namespace revrank::ingest {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

bool parse_int(std::string_view text, int& value) {
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end && !text.empty();
}

std::string join(const std::vector<std::string>& errors) {
  std::string out = "failed to parse score reports:";
  for (const auto& e : errors) out += "\n  " + e;
  return out;
}

Dataset with_reports(const Dataset& source, std::vector<ScoreReport> reports) {
  return Dataset(std::move(reports), source.score_grid());
}

template <typename Pred>
Dataset keep_rows(const Dataset& d, Pred pred) {
  std::vector<ScoreReport> kept;
  for (const auto& r : d.reports()) {
    if (pred(r)) kept.push_back(r);
  }
  return with_reports(d, std::move(kept));
}

}  // namespace

ParseError::ParseError(std::vector<std::string> errors) : DataError(join(errors)), errors_(std::move(errors)) {}

Dataset parse_csv(std::istream& in, const IngestConfig& config, const std::string& source) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    header = split(line);
    break;
  }
  if (header.empty()) throw ParseError({source + ": missing header line"});

  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column.emplace(header[i], i);
  std::vector<std::string> missing;
  for (const char* required : {"candidate_id", "program_id", "score"}) {
    if (!column.count(required)) missing.push_back(source + ": missing required column '" + required + "'");
  }
  if (!missing.empty()) throw ParseError(missing);

  auto col = [&](const char* name) -> std::optional<std::size_t> {
    auto it = column.find(name);
    return it == column.end() ? std::nullopt : std::optional<std::size_t>(it->second);
  };
  const std::size_t c_candidate = column["candidate_id"];
  const std::size_t c_program = column["program_id"];
  const std::size_t c_score = column["score"];
  const auto c_year = col("test_year");
  const auto c_attempt = col("attempt_index");
  const auto c_major = col("major_code");
  const auto c_citizen = col("citizen");

  std::vector<ScoreReport> reports;
  std::vector<std::string> errors;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    const std::string where = source + " line " + std::to_string(line_no);
    if (fields.size() != header.size()) {
      errors.push_back(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
      continue;
    }
    ScoreReport r;
    r.candidate_id = fields[c_candidate];
    r.program_id = ProgramId(fields[c_program]);
    bool ok = true;
    if (!parse_int(fields[c_score], r.score)) {
      errors.push_back(where + ": score '" + fields[c_score] + "' is not an integer");
      ok = false;
    }
    if (c_year && !fields[*c_year].empty() && !parse_int(fields[*c_year], r.test_year)) {
      errors.push_back(where + ": test_year '" + fields[*c_year] + "' is not an integer");
      ok = false;
    }
    if (c_attempt && !fields[*c_attempt].empty() && !parse_int(fields[*c_attempt], r.attempt_index)) {
      errors.push_back(where + ": attempt_index '" + fields[*c_attempt] + "' is not an integer");
      ok = false;
    }
    if (c_major && !fields[*c_major].empty()) r.major_code = fields[*c_major];
    if (c_citizen) {
      const auto& c = fields[*c_citizen];
      if (c == "1") {
        r.citizen = true;
      } else if (c == "0") {
        r.citizen = false;
      } else if (!c.empty()) {
        errors.push_back(where + ": citizen '" + c + "' must be 0, 1 or empty");
        ok = false;
      }
    }
    if (ok) reports.push_back(std::move(r));
  }
  if (in.bad()) throw DataError(source + ": read failure");
  if (!errors.empty()) throw ParseError(std::move(errors));
  return Dataset(std::move(reports), config.grid);
}

Dataset parse_csv(const std::string& path, const IngestConfig& config) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return parse_csv(in, config, path);
}

void write_csv(const Dataset& d, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : d.reports()) {
    out << r.candidate_id << ',' << r.program_id.value << ',' << r.score << ',' << r.test_year << ','
        << r.attempt_index << ',' << r.major_code.value_or("") << ',';
    if (r.citizen) out << (*r.citizen ? '1' : '0');
    out << '\n';
  }
}

void write_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  write_csv(d, out);
  if (!out) throw DataError("write failure on " + path);
}

Dataset deduplicate(const Dataset& d) {
  std::set<std::tuple<std::string, int, std::string>> seen;
  return keep_rows(d, [&](const ScoreReport& r) {
    return seen.emplace(r.candidate_id, r.attempt_index, r.program_id.value).second;
  });
}

Dataset best_attempt_filter(const Dataset& d) {
  // attempt score = its highest row score
  std::map<std::pair<std::string, int>, int> attempt_score;
  for (const auto& r : d.reports()) {
    auto [it, inserted] = attempt_score.try_emplace({r.candidate_id, r.attempt_index}, r.score);
    if (!inserted) it->second = std::max(it->second, r.score);
  }
  std::map<std::string, std::pair<int, int>> best;  // candidate -> (score, attempt)
  for (const auto& [key, score] : attempt_score) {
    const auto candidate = std::make_pair(score, key.second);
    auto [it, inserted] = best.try_emplace(key.first, candidate);
    if (!inserted && candidate > it->second) it->second = candidate;
  }
  return keep_rows(d, [&](const ScoreReport& r) { return best.at(r.candidate_id).second == r.attempt_index; });
}

Dataset min_reports_filter(const Dataset& d, std::size_t threshold) {
  if (threshold == 0) return d;
  std::map<ProgramId, std::size_t> counts;
  for (const auto& r : d.reports()) ++counts[r.program_id];
  return keep_rows(d, [&](const ScoreReport& r) { return counts[r.program_id] >= threshold; });
}

Dataset year_range_filter(const Dataset& d, int min_year, int max_year) {
  return keep_rows(d, [&](const ScoreReport& r) { return r.test_year >= min_year && r.test_year <= max_year; });
}

Dataset subgroup_filter(const Dataset& d, const Subgroup& subgroup, const MajorMap& majors) {
  switch (subgroup.kind) {
    case Subgroup::Kind::Citizen:
      return keep_rows(d, [&](const ScoreReport& r) { return r.citizen && *r.citizen == subgroup.citizen; });
    case Subgroup::Kind::Major2:
      return keep_rows(d, [&](const ScoreReport& r) {
        return coarsen(majors.group(r.major_code)) == subgroup.major2;
      });
    case Subgroup::Kind::Major10:
      return keep_rows(d, [&](const ScoreReport& r) { return subgroup.majors.count(majors.group(r.major_code)) > 0; });
    case Subgroup::Kind::Period:
      return keep_rows(d, [&](const ScoreReport& r) {
        const bool early = r.test_year < subgroup.boundary_year;
        return subgroup.period == Subgroup::Period::Early ? early : !early;
      });
  }
  return d;
}

Dataset apply_filters(const Dataset& d, const IngestConfig& config, const MajorMap& majors) {
  Dataset out = deduplicate(d);
  if (config.year_range) out = year_range_filter(out, config.year_range->first, config.year_range->second);
  if (config.subgroup) out = subgroup_filter(out, *config.subgroup, majors);
  if (config.best_attempt_only) out = best_attempt_filter(out);
  if (config.strict_cap) {
    const auto violations = validate_dataset(out, {config.max_selections, true});
    std::vector<std::string> cap;
    for (const auto& v : violations) {
      if (v.rule == "selection-cap") cap.push_back("row " + std::to_string(v.row) + ": " + v.message);
    }
    if (!cap.empty()) throw ParseError(std::move(cap));
  }
  return min_reports_filter(out, config.min_reports_per_program);
}

}  // namespace revrank::ingest
