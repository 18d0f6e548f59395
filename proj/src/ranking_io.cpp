#include "revrank/ranking_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <json.hpp>
#include <ostream>
#include <sstream>

namespace revrank::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& text, const std::string& where) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) throw DataError(where + ": '" + text + "' is not a number");
  return value;
}

Ranking build(std::vector<RankingEntry> entries, RankMethod method, const std::string& source) {
  try {
    return Ranking(std::move(entries), method);
  } catch (const std::invalid_argument& e) {
    throw DataError(source + ": " + e.what());
  }
}

template <typename Writer>
void to_file(const std::string& path, Writer write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  write(out);
  if (!out) throw DataError("write failure on " + path);
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_ranking_csv(const Ranking& ranking, std::ostream& out) {
  out << "rank,program_id,metric\n";
  for (const auto& e : ranking.entries()) {
    out << e.rank << ',' << e.program_id.value << ',' << format_number(e.metric_value) << '\n';
  }
}

void write_ranking_json(const Ranking& ranking, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["method_tag"] = to_string(ranking.method());
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : ranking.entries()) {
    nlohmann::ordered_json row;
    row["rank"] = e.rank;
    row["program_id"] = e.program_id.value;
    row["metric"] = e.metric_value;
    if (e.detail) row["detail"] = *e.detail;
    doc["entries"].push_back(std::move(row));
  }
  doc["tie_groups"] = ranking.tie_groups();
  out << doc.dump(2) << '\n';
}

void write_ranking_csv(const Ranking& ranking, const std::string& path) {
  to_file(path, [&](std::ostream& out) { write_ranking_csv(ranking, out); });
}

void write_ranking_json(const Ranking& ranking, const std::string& path) {
  to_file(path, [&](std::ostream& out) { write_ranking_json(ranking, out); });
}

Ranking read_ranking_csv(std::istream& in, const std::string& source, RankMethod method) {
  std::string line;
  int line_no = 0;
  std::map<std::string, std::size_t> column;
  std::size_t width = 0;
  std::vector<RankingEntry> entries;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line);
    const std::string where = source + " line " + std::to_string(line_no);
    if (column.empty()) {
      for (std::size_t i = 0; i < fields.size(); ++i) column.emplace(fields[i], i);
      if (!column.count("program_id") || !column.count("metric")) {
        throw DataError(where + ": ranking header needs program_id and metric columns");
      }
      width = fields.size();
      continue;
    }
    if (fields.size() != width) {
      throw DataError(where + ": expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()));
    }
    RankingEntry e;
    e.program_id = ProgramId(fields[column["program_id"]]);
    if (e.program_id.empty()) throw DataError(where + ": empty program_id");
    e.metric_value = parse_number(fields[column["metric"]], where);
    if (auto it = column.find("rank"); it != column.end()) {
      const double rank = parse_number(fields[it->second], where);
      if (rank != static_cast<double>(entries.size() + 1)) {
        throw DataError(where + ": rank " + fields[it->second] + " out of sequence");
      }
    }
    entries.push_back(std::move(e));
  }
  if (column.empty()) throw DataError(source + ": missing ranking header");
  return build(std::move(entries), method, source);
}

Ranking read_ranking_json(std::istream& in, const std::string& source) {
  nlohmann::json doc;
  try {
    in >> doc;
    RankMethod method = RankMethod::External;
    if (doc.contains("method_tag")) method = rank_method_from_string(doc.at("method_tag").get<std::string>());
    std::vector<RankingEntry> entries;
    for (const auto& row : doc.at("entries")) {
      RankingEntry e;
      e.program_id = ProgramId(row.at("program_id").get<std::string>());
      e.metric_value = row.at("metric").get<double>();
      if (row.contains("detail")) e.detail = row.at("detail").get<double>();
      entries.push_back(std::move(e));
    }
    return build(std::move(entries), method, source);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(source + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(source + ": " + e.what());
  }
}

Ranking read_ranking(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ranking " + path);
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return json ? read_ranking_json(in, path) : read_ranking_csv(in, path);
}

}  // namespace revrank::io
