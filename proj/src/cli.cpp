#include "revrank/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "revrank/betafit.hpp"
#include "revrank/ingest.hpp"
#include "revrank/rankers.hpp"
#include "revrank/ranking_io.hpp"
#include "revrank/simgen.hpp"
#include "revrank/stats.hpp"

namespace revrank::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

/// Bad flag values detected after CLI11 parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string hex(std::uint64_t v) {
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << v;
  return ss.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failure on " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory " + dir.string() + ": " + ec.message());
}

struct IngestFlags {
  std::string input;
  int score_min = 200;
  int score_max = 800;
  int score_step = 10;
  std::size_t min_reports = 122;
  std::size_t max_selections = 5;
  bool best_attempt = false;
  bool strict_cap = false;
  std::string subgroup;
  std::string years;
  std::string major_map;
};

void add_ingest_flags(CLI::App* cmd, IngestFlags& f, std::size_t default_min_reports) {
  f.min_reports = default_min_reports;
  cmd->add_option("--in", f.input, "Score-report CSV")->required();
  cmd->add_option("--score-min", f.score_min, "Lowest grid score")->capture_default_str();
  cmd->add_option("--score-max", f.score_max, "Highest grid score")->capture_default_str();
  cmd->add_option("--score-step", f.score_step, "Grid step")->capture_default_str();
  cmd->add_option("--min-reports", f.min_reports, "Drop programs with fewer reports")->capture_default_str();
  cmd->add_option("--max-selections", f.max_selections, "Selection cap per sitting")->capture_default_str();
  cmd->add_flag("--best-attempt", f.best_attempt, "Keep each candidate's best sitting only");
  cmd->add_flag("--strict-cap", f.strict_cap, "Treat selection-cap violations as errors");
  cmd->add_option("--subgroup", f.subgroup, "major10=A,B | major2=business|other | citizen=0|1 | period=early|late[@YEAR]");
  cmd->add_option("--years", f.years, "Inclusive test-year range FROM-TO");
  cmd->add_option("--major-map", f.major_map, "raw_code,group CSV replacing the built-in major table");
}

ScoreGrid grid_of(const IngestFlags& f) {
  try {
    return ScoreGrid(f.score_min, f.score_max, f.score_step);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

ingest::IngestConfig ingest_config(const IngestFlags& f) {
  ingest::IngestConfig cfg;
  cfg.grid = grid_of(f);
  cfg.min_reports_per_program = f.min_reports;
  cfg.best_attempt_only = f.best_attempt;
  cfg.strict_cap = f.strict_cap;
  cfg.max_selections = f.max_selections;
  if (!f.subgroup.empty()) {
    try {
      cfg.subgroup = ingest::Subgroup::parse(f.subgroup);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--subgroup: ") + e.what());
    }
  }
  if (!f.years.empty()) {
    const auto dash = f.years.find('-', 1);
    try {
      if (dash == std::string::npos) throw std::invalid_argument("missing '-'");
      std::size_t used = 0;
      const int from = std::stoi(f.years.substr(0, dash), &used);
      if (used != dash) throw std::invalid_argument("bad year");
      const std::string rest = f.years.substr(dash + 1);
      const int to = std::stoi(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("bad year");
      cfg.year_range = std::make_pair(from, to);
    } catch (const std::exception&) {
      throw UsageError("--years must look like 2009-2014");
    }
  }
  return cfg;
}

void report_violations(std::span<const Violation> violations, std::ostream& err, std::size_t limit = 20) {
  std::size_t shown = 0;
  for (const auto& v : violations) {
    if (shown++ == limit) {
      err << "... " << violations.size() - limit << " more\n";
      break;
    }
    err << (v.severity == Severity::Error ? "error" : "warning") << ": row " << v.row << " [" << v.rule << "] "
        << v.message << '\n';
  }
}

/// Parse, validate and filter.
Dataset load_dataset(const IngestFlags& f, std::ostream& err) {
  const auto cfg = ingest_config(f);
  const Dataset raw = ingest::parse_csv(f.input, cfg);
  const auto violations = validate_dataset(raw, {f.max_selections, f.strict_cap});
  report_violations(violations, err);
  if (has_errors(violations)) throw DataError(f.input + ": dataset failed validation");
  const auto majors = f.major_map.empty() ? ingest::MajorMap::builtin() : ingest::MajorMap::load(f.major_map);
  Dataset d = ingest::apply_filters(raw, cfg, majors);
  if (d.program_count() == 0) throw DataError(f.input + ": no programs left after filtering");
  return d;
}

ordered_json ingest_json(const IngestFlags& f) {
  ordered_json j;
  j["input"] = f.input;
  j["input_fnv1a"] = hex(fnv1a(slurp(f.input)));
  j["score_grid"] = {f.score_min, f.score_max, f.score_step};
  j["min_reports"] = f.min_reports;
  j["max_selections"] = f.max_selections;
  j["best_attempt"] = f.best_attempt;
  j["strict_cap"] = f.strict_cap;
  j["subgroup"] = f.subgroup;
  j["years"] = f.years;
  j["major_map"] = f.major_map;
  return j;
}

void write_ranking_pair(const Ranking& r, const fs::path& dir, const std::string& stem) {
  io::write_ranking_csv(r, (dir / (stem + ".csv")).string());
  io::write_ranking_json(r, (dir / (stem + ".json")).string());
}

double safe_spearman(const Ranking& a, const Ranking& b) {
  try {
    return stats::spearman(a, b);
  } catch (const std::invalid_argument&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::string spearman_matrix(const std::vector<std::pair<std::string, Ranking>>& rankings) {
  std::ostringstream ss;
  for (const auto& [name, r] : rankings) ss << '\t' << name;
  ss << '\n';
  for (const auto& [name_a, a] : rankings) {
    ss << name_a;
    for (const auto& [name_b, b] : rankings) ss << '\t' << io::format_number(safe_spearman(a, b));
    ss << '\n';
  }
  return ss.str();
}

// ---- simulate ----

struct SimulateFlags {
  std::string config;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out = "data.csv";
  std::vector<std::string> sets;
  int test_year = 2014;
};

int cmd_simulate(const SimulateFlags& f, const CLI::App& cmd, std::ostream& out) {
  simgen::KeyValues kv = f.config.empty() ? simgen::KeyValues{} : simgen::read_key_values(f.config);
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + s + "'");
    kv[s.substr(0, eq)] = s.substr(eq + 1);
  }
  auto run_option = [&](const char* flag, const char* key) -> std::optional<std::string> {
    if (cmd.count(flag) > 0) return std::nullopt;  // flag wins
    auto it = kv.find(key);
    return it == kv.end() ? std::nullopt : std::optional<std::string>(it->second);
  };
  std::size_t n = f.n;
  std::uint64_t seed = f.seed;
  int test_year = f.test_year;
  try {
    if (auto v = run_option("--n", "n")) n = std::stoull(*v);
    if (auto v = run_option("--seed", "seed")) seed = std::stoull(*v);
    if (auto v = run_option("--test-year", "test_year")) test_year = std::stoi(*v);
  } catch (const std::exception&) {
    throw DataError("config keys n, seed and test_year must be integers");
  }
  if (cmd.count("--seed") == 0 && !kv.count("seed")) throw UsageError("simulate needs --seed (or a seed key in --config)");
  if (n == 0) throw UsageError("--n must be >= 1");

  const simgen::Market market = simgen::build_market(kv, seed);
  const Dataset d = simgen::generate_dataset(market, n, seed, {test_year});

  const fs::path data_path(f.out);
  if (data_path.has_parent_path()) ensure_dir(data_path.parent_path());
  fs::path truth_path = data_path;
  truth_path.replace_extension(".truth.csv");
  fs::path meta_path = data_path;
  meta_path.replace_extension(".meta.json");

  ingest::write_csv(d, data_path.string());
  io::write_ranking_csv(simgen::ground_truth_ranking(market), truth_path.string());

  std::string canonical;
  for (const auto& [k, v] : kv) canonical += k + "=" + v + "\n";
  ordered_json meta;
  meta["command"] = "simulate";
  meta["seed"] = seed;
  meta["n"] = n;
  meta["test_year"] = test_year;
  meta["config"] = f.config;
  meta["config_fnv1a"] = hex(fnv1a(canonical));
  meta["settings"] = kv;
  meta["noise"] = {{"rate", market.noise.rate}, {"anchor", market.noise.anchor}};
  meta["programs"] = ordered_json::array();
  for (std::size_t k = 0; k < market.size(); ++k) {
    meta["programs"].push_back({{"program_id", market.programs[k].value}, {"threshold", market.thresholds[k]}});
  }
  meta["reports"] = d.size();
  write_text(meta_path, meta.dump(2) + "\n");

  out << "wrote " << d.size() << " reports for " << n << " students to " << data_path.string() << '\n'
      << "ground truth: " << truth_path.string() << '\n'
      << "metadata: " << meta_path.string() << '\n';
  return kExitOk;
}

// ---- rank / tournament ----

struct RankFlags {
  IngestFlags ingest;
  std::vector<std::string> methods{"m"};
  std::string normalization = "candidate";
  bool no_per_year = false;
  std::string out = ".";
  std::string truth;
};

rankers::Normalization normalization_of(const std::string& text) {
  try {
    return rankers::normalization_from_string(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int cmd_rank(const RankFlags& f, std::ostream& out, std::ostream& err) {
  std::vector<RankMethod> methods;
  for (const auto& m : f.methods) {
    RankMethod method;
    try {
      method = rank_method_from_string(m);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (method != RankMethod::M && method != RankMethod::MPlusRecursive && method != RankMethod::Tournament) {
      throw UsageError("rank supports m, mplus and tournament; use fit-beta for beta");
    }
    if (std::find(methods.begin(), methods.end(), method) == methods.end()) methods.push_back(method);
  }
  const auto normalization = normalization_of(f.normalization);
  const Dataset d = load_dataset(f.ingest, err);
  const fs::path dir(f.out);
  ensure_dir(dir);

  std::vector<std::pair<std::string, Ranking>> rankings;
  std::optional<rankers::ScoreDistribution> dist;
  for (RankMethod method : methods) {
    Ranking r;
    if (method == RankMethod::Tournament) {
      r = rankers::tournament(d, !f.no_per_year).ranking;
    } else {
      if (!dist) dist = rankers::score_distribution(d, normalization);
      r = method == RankMethod::M ? rankers::rank_by_m(*dist) : rankers::rank_by_m_plus(*dist);
    }
    write_ranking_pair(r, dir, "ranking_" + to_string(method));
    out << "ranking_" << to_string(method) << ".csv: " << r.size() << " programs\n";
    rankings.emplace_back(to_string(method), std::move(r));
  }
  if (!f.truth.empty()) rankings.emplace_back("truth", io::read_ranking(f.truth));
  if (rankings.size() >= 2) {
    const std::string matrix = spearman_matrix(rankings);
    write_text(dir / "spearman.tsv", matrix);
    out << "spearman:\n" << matrix;
  }

  ordered_json meta;
  meta["command"] = "rank";
  meta["seed"] = nullptr;
  meta["ingest"] = ingest_json(f.ingest);
  meta["methods"] = ordered_json::array();
  for (RankMethod m : methods) meta["methods"].push_back(to_string(m));
  meta["normalization"] = f.normalization;
  meta["per_year"] = !f.no_per_year;
  meta["truth"] = f.truth;
  meta["programs"] = d.program_count();
  meta["reports"] = d.size();
  meta["config_fnv1a"] = hex(fnv1a(meta.dump()));
  write_text(dir / "metadata.json", meta.dump(2) + "\n");
  return kExitOk;
}

struct TournamentFlags {
  IngestFlags ingest;
  bool no_per_year = false;
  std::string out = ".";
};

int cmd_tournament(const TournamentFlags& f, std::ostream& out, std::ostream& err) {
  const Dataset d = load_dataset(f.ingest, err);
  const auto result = rankers::tournament(d, !f.no_per_year);
  const fs::path dir(f.out);
  ensure_dir(dir);
  write_ranking_pair(result.ranking, dir, "ranking_tournament");

  std::ostringstream points;
  points << "program_id";
  for (const auto& p : result.programs) points << '\t' << p.value;
  points << '\n';
  for (std::size_t a = 0; a < result.programs.size(); ++a) {
    points << result.programs[a].value;
    for (auto v : result.points[a]) points << '\t' << v;
    points << '\n';
  }
  write_text(dir / "tournament_points.tsv", points.str());

  ordered_json meta;
  meta["command"] = "tournament";
  meta["seed"] = nullptr;
  meta["ingest"] = ingest_json(f.ingest);
  meta["per_year"] = !f.no_per_year;
  meta["programs"] = d.program_count();
  meta["config_fnv1a"] = hex(fnv1a(meta.dump()));
  write_text(dir / "metadata.json", meta.dump(2) + "\n");

  const auto top = result.ranking.top(10);
  for (const auto& e : top.entries()) {
    out << e.rank << '\t' << e.program_id.value << '\t' << io::format_number(e.metric_value) << " wins\n";
  }
  return kExitOk;
}

// ---- fit-beta ----

struct FitFlags {
  IngestFlags ingest;
  std::string features;
  std::vector<double> box_lo{-1.0};
  std::vector<double> box_hi{1.0};
  int max_iters = 10000;
  double step = 1.0;
  std::size_t min_bin_count = 0;
  std::string normalization = "candidate";
  std::string out = ".";
  std::string truth;
};

std::vector<double> broadcast(const std::vector<double>& v, std::size_t n, const char* flag) {
  if (v.size() == 1) return std::vector<double>(n, v.front());
  if (v.size() != n) {
    throw UsageError(std::string(flag) + " needs 1 or " + std::to_string(n) + " values");
  }
  return v;
}

int cmd_fit_beta(const FitFlags& f, std::ostream& out, std::ostream& err) {
  const auto normalization = normalization_of(f.normalization);
  const Dataset d = load_dataset(f.ingest, err);
  const auto features = betafit::FeatureMatrix::read_csv(f.features);
  const std::size_t n = features.feature_count();
  betafit::Box box{broadcast(f.box_lo, n, "--box-lo"), broadcast(f.box_hi, n, "--box-hi")};
  for (std::size_t k = 0; k < n; ++k) {
    if (!(box.lo[k] <= box.hi[k])) throw UsageError("box bounds need lo <= hi");
  }
  // The objective scales with beta, so a box holding the origin admits the
  // trivial minimizer beta = 0.
  bool holds_zero = true;
  for (std::size_t k = 0; k < n; ++k) holds_zero = holds_zero && box.lo[k] <= 0.0 && 0.0 <= box.hi[k];
  if (holds_zero) {
    err << "warning: the box contains beta = 0, where the objective is 0; pin one coordinate away from 0 "
           "(e.g. --box-lo 1,-1 --box-hi 1,1) for a meaningful fit\n";
  }
  const auto dist = rankers::score_distribution(d, normalization);
  betafit::BetaModel model;
  try {
    const auto objective = f.min_bin_count > 0
                               ? betafit::Objective(betafit::bin_scores(dist, f.min_bin_count), features)
                               : betafit::Objective(dist, features);
    model = betafit::fit(objective, box, f.max_iters, {f.step});
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  model.feature_names = features.feature_names;
  const auto ranking = betafit::rank_by_beta(model, features);

  const fs::path dir(f.out);
  ensure_dir(dir);
  betafit::write_model_json(model, (dir / "beta_model.json").string());
  write_ranking_pair(ranking, dir, "ranking_beta");
  out << "objective " << io::format_number(model.objective_value) << " after " << model.iterations_run
      << " iterations\nbeta";
  for (double b : model.beta) out << ' ' << io::format_number(b);
  out << '\n';
  if (!f.truth.empty()) {
    out << "spearman vs truth: " << io::format_number(safe_spearman(ranking, io::read_ranking(f.truth))) << '\n';
  }
  return kExitOk;
}

// ---- compare ----

struct CompareFlags {
  std::vector<std::string> files;
  std::size_t top = 0;
  std::string out;
  bool classic = false;
};

int cmd_compare(const CompareFlags& f, std::ostream& out, std::ostream& err) {
  if (f.files.size() < 2) throw UsageError("compare needs at least 2 ranking files");
  std::vector<std::pair<std::string, Ranking>> rankings;
  for (const auto& path : f.files) {
    Ranking r = io::read_ranking(path);
    if (f.top > 0) {
      if (f.top > r.size()) {
        err << "warning: " << path << " has only " << r.size() << " entries; --top " << f.top << " uses all of them\n";
      }
      r = r.top(f.top);
    }
    rankings.emplace_back(path, std::move(r));
  }
  std::ostringstream matrix;
  for (const auto& [name, r] : rankings) matrix << '\t' << name;
  matrix << '\n';
  for (const auto& [name_a, a] : rankings) {
    matrix << name_a;
    for (const auto& [name_b, b] : rankings) {
      double rho = 0.0;
      try {
        rho = f.classic ? stats::spearman_classic(a, b) : stats::spearman(a, b);
      } catch (const std::invalid_argument& e) {
        throw DataError(name_a + " vs " + name_b + ": " + e.what());
      }
      matrix << '\t' << io::format_number(rho);
    }
    matrix << '\n';
  }
  out << matrix.str();
  if (!f.out.empty()) write_text(f.out, matrix.str());
  return kExitOk;
}

// ---- export ----

struct ExportFlags {
  IngestFlags ingest;
  std::string kind = "distributions";
  std::string out;
  std::vector<std::string> groups;
  std::size_t heatmap_min_reports = stats::kHeatmapMinReports;
  std::string order;
  std::string normalization = "candidate";
};

int cmd_export(const ExportFlags& f, std::ostream& out, std::ostream& err) {
  const Dataset d = load_dataset(f.ingest, err);
  const fs::path path(f.out);
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  if (f.kind == "distributions") {
    std::vector<stats::ProgramGroup> groups;
    for (const auto& g : f.groups) {
      const auto eq = g.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("--group expects name=PROGRAM;PROGRAM");
      stats::ProgramGroup group{g.substr(0, eq), {}};
      std::stringstream ss(g.substr(eq + 1));
      std::string id;
      while (std::getline(ss, id, ';')) {
        if (!id.empty()) group.programs.emplace_back(id);
      }
      groups.push_back(std::move(group));
    }
    stats::export_distributions(d, groups, f.out);
  } else if (f.kind == "heatmap") {
    stats::export_heatmap(d, f.out, f.heatmap_min_reports);
  } else if (f.kind == "tails") {
    if (f.order.empty()) throw UsageError("--kind tails needs --order RANKING");
    const auto dist = rankers::score_distribution(d, normalization_of(f.normalization));
    stats::export_tails(dist, io::read_ranking(f.order), f.out);
  } else {
    throw UsageError("--kind must be distributions, heatmap or tails");
  }
  out << "wrote " << f.out << '\n';
  return kExitOk;
}

// ---- validate ----

struct ValidateFlags {
  IngestFlags ingest;
};

int cmd_validate(const ValidateFlags& f, std::ostream& out, std::ostream& err) {
  const Dataset d = ingest::parse_csv(f.ingest.input, ingest_config(f.ingest));
  const auto violations = validate_dataset(d, {f.ingest.max_selections, f.ingest.strict_cap});
  report_violations(violations, err, violations.size());
  std::size_t errors = 0;
  for (const auto& v : violations) errors += v.severity == Severity::Error;
  out << d.size() << " reports, " << d.program_count() << " programs, " << errors << " errors, "
      << violations.size() - errors << " warnings\n";
  return errors > 0 ? kExitData : kExitOk;
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank programs from the choices applicants reveal with their test scores", "revrank"};
  app.require_subcommand(1);
  app.set_config("--run-config", "", "TOML/INI file with flag values, one [command] section each; goes before the command (command-line flags win)");
  app.allow_config_extras(CLI::config_extras_mode::error);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic score-report market");
  simulate->add_option("--config", sim.config, "Market description (key = value lines)");
  simulate->add_option("--n", sim.n, "Number of students");
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--out", sim.out, "Dataset CSV; truth and metadata are written beside it")
      ->capture_default_str();
  simulate->add_option("--set", sim.sets, "Override a config key (key=value), repeatable");
  simulate->add_option("--test-year", sim.test_year, "test_year stamped on every report")->capture_default_str();

  RankFlags rank;
  auto* rank_cmd = app.add_subcommand("rank", "Rank programs with m, mplus and/or tournament");
  add_ingest_flags(rank_cmd, rank.ingest, 122);
  rank_cmd->add_option("--method", rank.methods, "Comma-separated: m, mplus, tournament")
      ->delimiter(',')
      ->capture_default_str();
  rank_cmd->add_option("--normalization", rank.normalization, "candidate | report")->capture_default_str();
  rank_cmd->add_flag("--no-per-year", rank.no_per_year, "Tournament across test years");
  rank_cmd->add_option("--out", rank.out, "Output directory")->capture_default_str();
  rank_cmd->add_option("--truth", rank.truth, "Reference ranking added to the Spearman summary");

  TournamentFlags tour;
  auto* tour_cmd = app.add_subcommand("tournament", "Pairwise tournament with the full points matrix");
  add_ingest_flags(tour_cmd, tour.ingest, 122);
  tour_cmd->add_flag("--no-per-year", tour.no_per_year, "Compare sittings across test years");
  tour_cmd->add_option("--out", tour.out, "Output directory")->capture_default_str();

  FitFlags fitf;
  auto* fit_cmd = app.add_subcommand("fit-beta", "Fit covariate weights and rank by beta . x");
  add_ingest_flags(fit_cmd, fitf.ingest, 122);
  fit_cmd->add_option("--features", fitf.features, "Feature CSV: program_id,<f1>,...")->required();
  fit_cmd->add_option("--box-lo", fitf.box_lo, "Lower bound(s), one value or one per feature")->delimiter(',');
  fit_cmd->add_option("--box-hi", fitf.box_hi, "Upper bound(s), one value or one per feature")->delimiter(',');
  fit_cmd->add_option("--max-iters", fitf.max_iters, "Iteration budget")->capture_default_str()->check(
      CLI::PositiveNumber);
  fit_cmd->add_option("--step", fitf.step, "Step scale a in a/sqrt(k)")->capture_default_str()->check(
      CLI::PositiveNumber);
  fit_cmd->add_option("--min-bin-count", fitf.min_bin_count, "Merge scores into bins of at least this many candidates (0 = off)")
      ->capture_default_str();
  fit_cmd->add_option("--normalization", fitf.normalization, "candidate | report")->capture_default_str();
  fit_cmd->add_option("--out", fitf.out, "Output directory")->capture_default_str();
  fit_cmd->add_option("--truth", fitf.truth, "Reference ranking to correlate with");

  CompareFlags cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Spearman matrix over ranking files");
  cmp_cmd->add_option("files", cmp.files, "Ranking CSV or JSON files")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--top", cmp.top, "Restrict each ranking to its first K entries");
  cmp_cmd->add_option("--out", cmp.out, "Also write the matrix to this TSV");
  cmp_cmd->add_flag("--classic", cmp.classic, "Use 1 - 6 sum d^2 / (n (n^2 - 1)) on positions");

  ExportFlags exp;
  auto* exp_cmd = app.add_subcommand("export", "Plot-ready TSV exports");
  add_ingest_flags(exp_cmd, exp.ingest, 0);
  exp_cmd->add_option("--kind", exp.kind, "distributions | heatmap | tails")->capture_default_str();
  exp_cmd->add_option("--out", exp.out, "Output TSV")->required();
  exp_cmd->add_option("--group", exp.groups, "name=PROGRAM;PROGRAM (distributions), repeatable");
  exp_cmd->add_option("--heatmap-min-reports", exp.heatmap_min_reports, "Heatmap program report floor")
      ->capture_default_str();
  exp_cmd->add_option("--order", exp.order, "Ranking file giving the tail order (tails)");
  exp_cmd->add_option("--normalization", exp.normalization, "candidate | report (tails)")->capture_default_str();

  ValidateFlags val;
  auto* val_cmd = app.add_subcommand("validate", "Check a score-report CSV");
  add_ingest_flags(val_cmd, val.ingest, 0);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, *simulate, out);
    if (rank_cmd->parsed()) return cmd_rank(rank, out, err);
    if (tour_cmd->parsed()) return cmd_tournament(tour, out, err);
    if (fit_cmd->parsed()) return cmd_fit_beta(fitf, out, err);
    if (cmp_cmd->parsed()) return cmd_compare(cmp, out, err);
    if (exp_cmd->parsed()) return cmd_export(exp, out, err);
    if (val_cmd->parsed()) return cmd_validate(val, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ingest::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace revrank::cli
