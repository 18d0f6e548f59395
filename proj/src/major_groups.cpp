#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

#include "major_groups_table.hpp"
#include "revrank/ingest.hpp"

namespace revrank::ingest {

namespace {

constexpr std::array<std::pair<MajorGroup, const char*>, 10> kGroupNames{{
    {MajorGroup::Accounting, "Accounting"},
    {MajorGroup::Arts, "Arts"},
    {MajorGroup::Engineering, "Engineering"},
    {MajorGroup::Finance, "Finance"},
    {MajorGroup::MathCS, "MathCS"},
    {MajorGroup::OtherBusiness, "OtherBusiness"},
    {MajorGroup::SocialSciences, "SocialSciences"},
    {MajorGroup::Sciences, "Sciences"},
    {MajorGroup::Economics, "Economics"},
    {MajorGroup::Unknown, "Unknown"},
}};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

}  // namespace

std::string to_string(MajorGroup g) {
  for (const auto& [group, name] : kGroupNames) {
    if (group == g) return name;
  }
  return "Unknown";
}

std::string to_string(MajorGroup2 g) { return g == MajorGroup2::BusinessEcon ? "BusinessEcon" : "Other"; }

std::optional<MajorGroup> major_group_from_string(const std::string& name) {
  const std::string key = lower(trim(name));
  for (const auto& [group, text] : kGroupNames) {
    if (lower(text) == key) return group;
  }
  return std::nullopt;
}

std::optional<MajorGroup2> major_group2_from_string(const std::string& name) {
  const std::string key = lower(trim(name));
  if (key == "businessecon" || key == "business") return MajorGroup2::BusinessEcon;
  if (key == "other") return MajorGroup2::Other;
  return std::nullopt;
}

MajorGroup2 coarsen(MajorGroup g) {
  switch (g) {
    case MajorGroup::Accounting:
    case MajorGroup::Finance:
    case MajorGroup::Economics:
    case MajorGroup::OtherBusiness:
      return MajorGroup2::BusinessEcon;
    default:
      return MajorGroup2::Other;
  }
}

MajorMap MajorMap::builtin() {
  static const MajorMap table = [] {
    std::istringstream in(detail::kBuiltinMajorTable);
    return parse(in, "builtin major table");
  }();
  return table;
}

MajorMap MajorMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open major map " + path);
  return parse(in, path);
}

MajorMap MajorMap::parse(std::istream& in, const std::string& source) {
  MajorMap map;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (lower(line) != "raw_code,group") {
        throw DataError(source + " line " + std::to_string(line_no) + ": expected header raw_code,group");
      }
      continue;
    }
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw DataError(source + " line " + std::to_string(line_no) + ": expected raw_code,group");
    }
    const auto group = major_group_from_string(line.substr(comma + 1));
    if (!group) {
      throw DataError(source + " line " + std::to_string(line_no) + ": unknown group '" +
                      line.substr(comma + 1) + "'");
    }
    map.set(line.substr(0, comma), *group);
  }
  return map;
}

void MajorMap::set(const std::string& raw_code, MajorGroup group) {
  const std::string key = lower(trim(raw_code));
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const auto& e, const std::string& k) { return e.first < k; });
  if (it != entries_.end() && it->first == key) {
    it->second = group;
  } else {
    entries_.insert(it, {key, group});
  }
}

MajorGroup MajorMap::group(const std::optional<std::string>& raw_code) const {
  if (!raw_code) return MajorGroup::Unknown;
  const std::string key = lower(trim(*raw_code));
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const auto& e, const std::string& k) { return e.first < k; });
  if (it != entries_.end() && it->first == key) return it->second;
  return MajorGroup::Unknown;
}

Subgroup Subgroup::parse(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("subgroup '" + text + "' must look like kind=value");
  }
  const std::string kind = lower(trim(text.substr(0, eq)));
  const std::string value = trim(text.substr(eq + 1));
  Subgroup sg;
  if (kind == "citizen") {
    sg.kind = Kind::Citizen;
    if (value == "1" || lower(value) == "true") {
      sg.citizen = true;
    } else if (value == "0" || lower(value) == "false") {
      sg.citizen = false;
    } else {
      throw std::invalid_argument("citizen subgroup expects 0 or 1");
    }
  } else if (kind == "major2") {
    sg.kind = Kind::Major2;
    const auto g = major_group2_from_string(value);
    if (!g) throw std::invalid_argument("major2 subgroup expects 'business' or 'other'");
    sg.major2 = *g;
  } else if (kind == "major10") {
    sg.kind = Kind::Major10;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto g = major_group_from_string(item);
      if (!g) throw std::invalid_argument("unknown major group '" + item + "'");
      sg.majors.insert(*g);
    }
    if (sg.majors.empty()) throw std::invalid_argument("major10 subgroup needs at least one group");
  } else if (kind == "period") {
    sg.kind = Kind::Period;
    std::string which = lower(value);
    if (const auto at = which.find('@'); at != std::string::npos) {
      try {
        sg.boundary_year = std::stoi(which.substr(at + 1));
      } catch (const std::exception&) {
        throw std::invalid_argument("period boundary must be a year");
      }
      which = which.substr(0, at);
    }
    if (which == "early") {
      sg.period = Period::Early;
    } else if (which == "late") {
      sg.period = Period::Late;
    } else {
      throw std::invalid_argument("period subgroup expects early or late");
    }
  } else {
    throw std::invalid_argument("unknown subgroup kind '" + kind + "'");
  }
  return sg;
}

std::string Subgroup::describe() const {
  switch (kind) {
    case Kind::Citizen: return std::string("citizen=") + (citizen ? "1" : "0");
    case Kind::Major2: return "major2=" + to_string(major2);
    case Kind::Major10: {
      std::string out = "major10=";
      bool first = true;
      for (auto g : majors) {
        if (!first) out += ",";
        out += to_string(g);
        first = false;
      }
      return out;
    }
    case Kind::Period:
      return std::string("period=") + (period == Period::Early ? "early" : "late") + "@" +
             std::to_string(boundary_year);
  }
  return {};
}

}  // namespace revrank::ingest
