#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "revrank/simgen.hpp"

namespace revrank::simgen {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

double to_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw DataError("config key '" + key + "': '" + text + "' is not a number");
  }
  return value;
}

int to_int(const std::string& key, const std::string& text) {
  int value = 0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw DataError("config key '" + key + "': '" + text + "' is not an integer");
  }
  return value;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::string body = trim(text);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
    throw DataError("config key '" + key + "' must be a list like [1, 2, 3]");
  }
  body = body.substr(1, body.size() - 2);
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const KeyValues& kv) : kv_(kv) {}

  [[nodiscard]] bool has(const std::string& key) const { return kv_.count(key) > 0; }
  [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }
  [[nodiscard]] double number(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : to_double(key, it->second);
  }
  [[nodiscard]] int integer(const std::string& key, int fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : to_int(key, it->second);
  }
  [[nodiscard]] std::vector<double> list(const std::string& key) const { return to_list(key, kv_.at(key)); }

 private:
  const KeyValues& kv_;
};

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '[') continue;  // blank or [section]
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw DataError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    if (key.empty()) throw DataError("config line " + std::to_string(line_no) + ": empty key");
    out[key] = unquote(trim(std::string_view(stripped).substr(eq + 1)));
  }
  return out;
}

KeyValues read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_key_values(buffer.str());
}

Market build_market(const KeyValues& config, std::uint64_t seed) {
  const Reader cfg(config);
  Market market;
  try {
    market.grid = ScoreGrid(cfg.integer("score_min", 200), cfg.integer("score_max", 800),
                            cfg.integer("score_step", 10));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("market config: ") + e.what());
  }

  Rng rng(derive_seed(seed, kThresholdStream));
  if (cfg.has("thresholds")) {
    market.thresholds = cfg.list("thresholds");
  } else {
    const int count = cfg.integer("programs", 20);
    if (count < 1) throw DataError("market config: programs must be >= 1");
    const double lo = cfg.number("threshold_min", 400.0);
    const double hi = cfg.number("threshold_max", 800.0);
    if (hi < lo) throw DataError("market config: threshold_max < threshold_min");
    const std::string layout = cfg.text("threshold_layout", "uniform");
    const bool floor = cfg.has("floor_threshold");
    const int drawn = floor ? count - 1 : count;
    if (layout == "uniform") {
      std::uniform_real_distribution<double> u(lo, hi);
      for (int k = 0; k < drawn; ++k) market.thresholds.push_back(u(rng));
    } else if (layout == "even") {
      for (int k = 0; k < drawn; ++k) {
        market.thresholds.push_back(drawn == 1 ? lo : lo + (hi - lo) * k / (drawn - 1));
      }
      std::shuffle(market.thresholds.begin(), market.thresholds.end(), rng);
    } else {
      throw DataError("market config: threshold_layout must be 'uniform' or 'even'");
    }
    if (floor) {
      std::uniform_int_distribution<int> where(0, drawn);
      market.thresholds.insert(market.thresholds.begin() + where(rng), cfg.number("floor_threshold", 0.0));
    }
  }

  const std::string prefix = cfg.text("program_prefix", "P");
  const std::size_t width = std::max<std::size_t>(2, std::to_string(market.thresholds.size()).size());
  for (std::size_t k = 0; k < market.thresholds.size(); ++k) {
    std::string num = std::to_string(k + 1);
    market.programs.emplace_back(prefix + std::string(width - num.size(), '0') + num);
  }

  const double max_threshold =
      market.thresholds.empty() ? 0.0 : *std::max_element(market.thresholds.begin(), market.thresholds.end());
  const std::string anchor = cfg.text("noise_anchor", "auto");
  const double anchor_value = anchor == "auto" ? market.grid.min() - max_threshold
                                               : to_double("noise_anchor", anchor);
  try {
    market.noise = NoiseCdf(cfg.number("noise_rate", 0.001), anchor_value);
    market.utility_law = {cfg.number("utility_gamma", 1.0), cfg.number("utility_sigma", 0.3)};
    market.budget_rule = {cfg.integer("budget_base", 1), cfg.integer("budget_step", 150),
                          cfg.integer("budget_cap", 5), cfg.integer("budget_origin", market.grid.min())};
    const std::string law = cfg.text("score_law", "normal");
    if (law == "normal") {
      market.score_law = ScoreLaw::discretized_normal(market.grid, cfg.number("score_mean", 550.0),
                                                      cfg.number("score_sd", 100.0));
    } else if (law == "uniform") {
      market.score_law = ScoreLaw::uniform(market.grid);
    } else {
      throw DataError("market config: score_law must be 'normal' or 'uniform'");
    }
    market.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("market config: ") + e.what());
  }
  return market;
}

}  // namespace revrank::simgen
