#include "madness/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "madness/bracketbuild.hpp"
#include "madness/evalcal.hpp"
#include "madness/field.hpp"
#include "madness/ingest.hpp"
#include "madness/predict.hpp"
#include "madness/ratings.hpp"
#include "madness/season.hpp"
#include "madness/synthetic.hpp"
#include "madness/tourney.hpp"

namespace madness::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct RunConfig {
  std::string command;
  std::string league = "women";
  std::string season;
  std::string data_dir;
  std::string teams_path;
  std::string games_path;
  std::string method = "conformal";
  std::string out_dir;
  std::uint64_t seed = 0;
  int field_size = 64;
  double tau = kMidTau;
};

struct Artifact {
  std::string name;
  std::string content;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string header(const RunConfig& c, const std::string& extra = {}) {
  std::string h = "# madness " + c.command + " version=" + kVersion;
  if (!c.league.empty()) h += " league=" + c.league;
  if (!c.season.empty()) h += " season=" + c.season;
  h += " seed=" + std::to_string(c.seed);
  if (!extra.empty()) h += " " + extra;
  return h + "\n";
}

// Resolves the season inputs either from explicit files or the data-dir layout.
class Inputs {
 public:
  explicit Inputs(const RunConfig& c) : config_(c) {
    if (!c.teams_path.empty() || !c.games_path.empty()) {
      if (c.teams_path.empty() || c.games_path.empty()) throw Error("--teams and --games must be given together");
      teams_path_ = c.teams_path;
      games_path_ = c.games_path;
    } else {
      if (c.data_dir.empty()) throw Error("give --teams/--games or --data-dir (or set MADNESS_DATA_DIR)");
      if (c.season.empty()) throw Error("--season is required with --data-dir");
      paths_ = SeasonPaths::under(c.data_dir, parse_league(c.league), c.season);
      teams_path_ = paths_->teams();
      games_path_ = paths_->games();
    }
    for (const auto& p : {teams_path_, games_path_}) {
      if (!fs::exists(p)) throw Error("input file " + p.string() + " does not exist");
    }
  }

  const TeamTable& teams() {
    if (!teams_) {
      teams_ = parse_teams(teams_path_);
      record(teams_path_);
    }
    return *teams_;
  }

  const std::vector<GameRecord>& games() {
    if (!games_) {
      games_ = parse_games(games_path_, teams(), parse_league(config_.league), config_.season);
      record(games_path_);
    }
    return *games_;
  }

  const SeasonModels& models() {
    if (!models_) {
      auto [regular, post] = season_split(games());
      (void)post;
      models_.emplace(teams(), regular);
    }
    return *models_;
  }

  fs::path conf_bracket_dir(const std::string& given) const {
    if (!given.empty()) return given;
    if (paths_) return paths_->conf_brackets();
    throw Error("--conf-brackets is required when inputs are given as files");
  }

  std::vector<BracketSpec> conf_brackets(const std::string& given) {
    const auto dir = conf_bracket_dir(given);
    if (!fs::is_directory(dir)) throw Error("conference bracket directory " + dir.string() + " does not exist");
    auto brackets = parse_bracket_dir(dir, teams());
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() == ".json") record(e.path());
    }
    return brackets;
  }

  BracketSpec bracket(const std::string& path) {
    if (!fs::exists(path)) throw Error("bracket file " + path + " does not exist");
    auto b = parse_bracket(fs::path(path), teams());
    record(path);
    return b;
  }

  void record(const fs::path& p) { hashes_[p.string()] = fnv1a_hex(read_file(p)); }
  const std::map<std::string, std::string>& hashes() const { return hashes_; }

 private:
  const RunConfig& config_;
  std::optional<SeasonPaths> paths_;
  fs::path teams_path_;
  fs::path games_path_;
  std::optional<TeamTable> teams_;
  std::optional<std::vector<GameRecord>> games_;
  std::optional<SeasonModels> models_;
  std::map<std::string, std::string> hashes_;
};

std::string csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.parent_path() / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << content;
    if (!f) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

void emit(const RunConfig& c, const std::vector<std::string>& args, const std::vector<Artifact>& artifacts,
          const std::map<std::string, std::string>& inputs, std::ostream& out) {
  if (c.out_dir.empty()) {
    for (const auto& a : artifacts) {
      if (artifacts.size() > 1) out << "# file: " << a.name << "\n";
      out << a.content;
    }
    return;
  }
  fs::create_directories(c.out_dir);
  json manifest;
  manifest["tool"] = "madness";
  manifest["version"] = kVersion;
  manifest["command"] = c.command;
  manifest["args"] = args;
  manifest["config"] = {{"league", c.league},     {"season", c.season},   {"method", c.method},
                        {"field_size", c.field_size}, {"tau", c.tau},    {"seed", c.seed}};
  manifest["inputs"] = json::array();
  for (const auto& [path, hash] : inputs) manifest["inputs"].push_back({{"path", path}, {"fnv1a64", hash}});
  manifest["outputs"] = json::array();
  for (const auto& a : artifacts) {
    write_atomic(fs::path(c.out_dir) / a.name, a.content);
    manifest["outputs"].push_back({{"path", a.name}, {"fnv1a64", fnv1a_hex(a.content)}});
  }
  write_atomic(fs::path(c.out_dir) / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<Method> parse_methods(const std::string& text) {
  if (text == "all") return {std::begin(kAllMethods), std::end(kAllMethods)};
  std::vector<Method> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) out.push_back(parse_method(item));
  if (out.empty()) throw Error("no methods given");
  return out;
}

// "2015..2021" -> 2014-15 .. 2020-21; "2019-20,2020-21" kept literally.
std::vector<std::string> parse_seasons(const std::string& text) {
  auto label = [](int end_year) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%d-%02d", end_year - 1, end_year % 100);
    return std::string(buf);
  };
  std::vector<std::string> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    try {
      const int a = std::stoi(text.substr(0, dots));
      const int b = std::stoi(text.substr(dots + 2));
      if (b < a) throw Error("");
      for (int y = a; y <= b; ++y) out.push_back(label(y));
    } catch (...) {
      throw UsageError("season range must look like 2015..2021");
    }
    return out;
  }
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    if (item.find('-') == std::string::npos && !item.empty() &&
        std::all_of(item.begin(), item.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
      out.push_back(label(std::stoi(item)));
    } else {
      out.push_back(item);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

std::vector<Artifact> cmd_rank(const RunConfig& c, Inputs& in) {
  const auto& m = in.models();
  std::ostringstream s;
  s << header(c, "home_advantage=" + fmt6(m.strengths().mu_hat) + " sigma=" + fmt6(std::sqrt(m.strengths().sigma2_hat)));
  s << "rank,team,conference,strength\n";
  const auto& teams = m.teams();
  for (const auto& r : m.ranking()) {
    s << r.rank << ',' << csv(teams.name(r.team)) << ','
      << csv(teams.conferences()[static_cast<std::size_t>(teams.conference_of(r.team))].name) << ','
      << fmt6(r.strength) << '\n';
  }
  return {{"rank.csv", s.str()}};
}

struct MatchArgs {
  std::string home;
  std::string away;
  bool neutral = false;
};

std::vector<Artifact> cmd_winprob(const RunConfig& c, const MatchArgs& a, Inputs& in) {
  const auto& m = in.models();
  const MatchQuery q{m.teams().id(a.home), m.teams().id(a.away), a.neutral};
  q.validate();
  std::ostringstream s;
  s << header(c, "home=" + csv(a.home) + " away=" + csv(a.away) + (a.neutral ? " neutral" : ""));
  s << "method,home,away,neutral,p_home_win\n";
  for (Method method : parse_methods(c.method)) {
    s << to_string(method) << ',' << csv(a.home) << ',' << csv(a.away) << ',' << (a.neutral ? 1 : 0) << ','
      << fmt6(m.win_prob(method, q)) << '\n';
  }
  return {{"winprob.csv", s.str()}};
}

std::vector<Artifact> cmd_cpd(const RunConfig& c, const MatchArgs& a, const std::string& grid_text, Inputs& in) {
  const auto& m = in.models();
  const MatchQuery q{m.teams().id(a.home), m.teams().id(a.away), a.neutral};
  const MovGrid grid = MovGrid::parse(grid_text);
  const auto curve = cpd_curve(m.conformal(), q, m.n_teams(), grid);
  std::ostringstream s;
  s << header(c, "home=" + csv(a.home) + " away=" + csv(a.away) + " tau=" + fmt6(c.tau));
  s << "mov,pi\n";
  for (const auto& p : curve.points) s << fmt6(p.y_c) << ',' << fmt6(p.pi) << '\n';
  return {{"cpd.csv", s.str()}};
}

struct TournamentArgs {
  std::string bracket;
  bool round_by_round = false;
  std::int64_t simulate = 0;
  unsigned threads = 1;
};

std::vector<Artifact> cmd_tournament(const RunConfig& c, const TournamentArgs& a, Inputs& in) {
  const auto& m = in.models();
  const Method method = parse_method(c.method);
  const BracketSpec bracket = in.bracket(a.bracket);
  const BracketSpec live = bracket.completed.empty() ? bracket : prune(bracket);
  const auto probs = m.pairwise(method, live.teams(), bracket.host);
  const auto& names = m.teams();
  std::ostringstream s;
  s << header(c, "method=" + std::string(to_string(method)) + " bracket=" + csv(a.bracket));

  if (a.simulate > 0) {
    const auto sim = monte_carlo(live, probs, a.simulate, c.seed, a.threads);
    std::vector<std::size_t> order(sim.teams.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return sim.champion_freq(static_cast<Eigen::Index>(x)) > sim.champion_freq(static_cast<Eigen::Index>(y));
    });
    s << "team,frequency,std_error\n";
    for (std::size_t i : order) {
      const double f = sim.champion_freq(static_cast<Eigen::Index>(i));
      s << csv(names.name(sim.teams[i])) << ',' << fmt6(f) << ','
        << fmt6(std::sqrt(f * (1.0 - f) / static_cast<double>(sim.draws))) << '\n';
    }
    return {{"simulation.csv", s.str()}};
  }

  const RoundProbs q = closed_form(live, probs);
  std::vector<Eigen::Index> order(q.teams.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return q.q(x, q.rounds) > q.q(y, q.rounds); });
  const int first = q.play_ins ? 0 : 1;
  s << "team,overall";
  if (a.round_by_round) {
    for (int j = first; j <= q.rounds; ++j) s << ",round_" << j;
  }
  s << '\n';
  for (Eigen::Index i : order) {
    s << csv(names.name(q.teams[static_cast<std::size_t>(i)])) << ',' << fmt6(q.q(i, q.rounds));
    if (a.round_by_round) {
      for (int j = first; j <= q.rounds; ++j) s << ',' << fmt6(q.q(i, j));
    }
    s << '\n';
  }
  return {{"tournament.csv", s.str()}};
}

struct FieldArgs {
  std::string conf_brackets;
  std::string rank_dist;
};

std::vector<Artifact> cmd_field(const RunConfig& c, const FieldArgs& a, Inputs& in) {
  const auto& m = in.models();
  const Method method = parse_method(c.method);
  const auto champions = conference_outlook(m, method, in.conf_brackets(a.conf_brackets));
  const auto& names = m.teams();
  std::ostringstream s;
  s << header(c, "method=" + std::string(to_string(method)) + " field_size=" + std::to_string(c.field_size));
  if (!a.rank_dist.empty()) {
    const TeamId t = names.id(a.rank_dist);
    const int rank = m.rank_of()[static_cast<std::size_t>(t.index)];
    const auto o = conference_outcome(t, champions, m.rank_of(), names);
    const auto mass = rank_distribution(o, rank, c.field_size);
    s << "# team=" << csv(a.rank_dist) << " rank=" << rank
      << " p_field=" << fmt6(make_field_prob(o, at_large_threshold(rank, c.field_size))) << '\n';
    s << "tournament_rank,probability\n";
    for (Eigen::Index r = 0; r < mass.size(); ++r) {
      if (mass(r) > 0.0) s << r + 1 << ',' << fmt6(mass(r)) << '\n';
    }
    return {{"rank_distribution.csv", s.str()}};
  }
  const auto report = field_report(champions, m.rank_of(), names, c.field_size);
  s << "team,conference,rank,situation,threshold,probability\n";
  for (const auto& r : report.rows) {
    s << csv(names.name(r.team)) << ','
      << csv(names.conferences()[static_cast<std::size_t>(names.conference_of(r.team))].name) << ',' << r.rank << ','
      << r.situation << ',' << r.threshold << ',' << fmt6(r.probability) << '\n';
  }
  return {{"field.csv", s.str()}};
}

struct BracketArgs {
  std::string rule = "strongest";
  std::string conf_brackets;
  bool seeded = false;
};

std::vector<Artifact> cmd_bracket(const RunConfig& c, const BracketArgs& a, Inputs& in) {
  const auto& m = in.models();
  const Method method = parse_method(c.method);
  const SelectionRule rule = parse_selection_rule(a.rule);
  const auto champions = conference_outlook(m, method, in.conf_brackets(a.conf_brackets));
  const auto field = exemplar_field(rule, champions, m.rank_of(), c.field_size,
                                    a.seeded ? std::optional<std::uint64_t>(c.seed) : std::nullopt);
  auto bracket = s_curve_place(field).to_bracket();
  bracket.name = std::string(to_string(rule)) + " exemplar";
  bracket.league = c.league;
  bracket.season = c.season;
  json doc = bracket_to_json(bracket, m.teams());
  doc["rule"] = std::string(to_string(rule));
  doc["seed"] = c.seed;
  return {{"bracket.json", doc.dump(2) + "\n"}};
}

struct EvalArgs {
  std::string seasons = "2015..2021";
  bool plot_data = false;
};

std::vector<Artifact> cmd_eval(RunConfig c, const EvalArgs& a, std::map<std::string, std::string>& hashes,
                               std::ostream& err) {
  if (c.data_dir.empty()) throw Error("eval needs --data-dir (or MADNESS_DATA_DIR)");
  const auto methods = parse_methods(c.method);
  std::vector<std::string> leagues;
  if (c.league == "both") leagues = {"women", "men"};
  else leagues = {std::string(to_string(parse_league(c.league)))};

  std::vector<GamePrediction> all;
  for (const auto& league : leagues) {
    for (const auto& season : parse_seasons(a.seasons)) {
      RunConfig sc = c;
      sc.league = league;
      sc.season = season;
      Inputs in(sc);
      const auto [regular, post] = season_split(in.games());
      if (post.empty()) {
        err << "note: " << league << " " << season << " has no postseason games; skipped\n";
        continue;
      }
      const SeasonModels models(in.teams(), regular);
      auto preds = predict_games(models, post, methods);
      all.insert(all.end(), preds.begin(), preds.end());
      for (const auto& [p, h] : in.hashes()) hashes[p] = h;
    }
  }
  if (all.empty()) throw Error("no postseason games found for the requested seasons");
  const auto ev = evaluate(all, methods);

  c.season = a.seasons;
  std::vector<Artifact> out;
  std::ostringstream loss;
  loss << header(c, "clamped=" + std::to_string(ev.losses.clamped));
  loss << "league,season,method,games,mean_log_loss,relative_loss\n";
  for (const auto& r : ev.losses.rows) {
    loss << r.league << ',' << r.season << ',' << to_string(r.method) << ',' << r.games << ',' << fmt6(r.loss) << ','
         << fmt6(r.relative) << '\n';
  }
  out.push_back({"loss.csv", loss.str()});
  for (const auto& cal : ev.calibration) {
    std::ostringstream s;
    s << header(c, "method=" + std::string(to_string(cal.method)) + " bin_width=" + fmt6(kBinWidth));
    s << "lower,upper,count,mean_predicted,frequency\n";
    for (const auto& b : cal.bins) {
      s << fmt6(b.lower) << ',' << fmt6(b.upper) << ',' << b.count << ',';
      if (b.count > 0) s << fmt6(b.mean_predicted);
      s << ',';
      if (b.frequency) s << fmt6(*b.frequency);
      s << '\n';
    }
    out.push_back({"reliability_" + std::string(to_string(cal.method)) + ".csv", s.str()});
  }
  if (a.plot_data) {
    std::ostringstream s;
    s << header(c);
    s << "method,bin_midpoint,mean_predicted,frequency,count\n";
    for (const auto& cal : ev.calibration) {
      for (const auto& b : cal.bins) {
        if (!b.frequency) continue;
        s << to_string(cal.method) << ',' << fmt6(0.5 * (b.lower + b.upper)) << ',' << fmt6(b.mean_predicted) << ','
          << fmt6(*b.frequency) << ',' << b.count << '\n';
      }
    }
    out.push_back({"calibration_points.csv", s.str()});
  }
  return out;
}

void cmd_simulate(const RunConfig& c, const SyntheticOptions& opt, const std::vector<std::string>& args,
                  std::ostream& out) {
  if (c.out_dir.empty()) throw Error("simulate needs --out, the data directory to create");
  const League league = parse_league(c.league);
  const std::string season = c.season.empty() ? "2019-20" : c.season;
  const auto synthetic = make_synthetic_league(opt, league, season);
  const auto paths = SeasonPaths::under(c.out_dir, league, season);
  write_season(synthetic, paths.dir);

  std::ostringstream truth;
  truth << header(c) << "team,conference,true_strength\n";
  for (std::size_t i = 0; i < synthetic.teams.size(); ++i) {
    const TeamId t(static_cast<int>(i));
    truth << csv(synthetic.teams.name(t)) << ','
          << csv(synthetic.teams.conferences()[static_cast<std::size_t>(synthetic.teams.conference_of(t))].name) << ','
          << fmt6(synthetic.strength(t.index)) << '\n';
  }
  std::vector<Artifact> artifacts{{"truth.csv", truth.str()}};
  RunConfig mc = c;
  mc.out_dir = paths.dir.string();
  emit(mc, args, artifacts, {}, out);
  out << "wrote " << synthetic.teams.size() << " teams and " << synthetic.games.size() << " games to "
      << paths.dir.string() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Win probabilities for NCAA basketball: ratings, conformal predictive distributions, "
               "tournament and field probabilities."};
  app.name("madness");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunConfig c;
  if (const char* env = std::getenv("MADNESS_DATA_DIR")) c.data_dir = env;

  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--league", c.league, "women or men")->capture_default_str();
    sub->add_option("--season", c.season, "season label, e.g. 2019-20");
    sub->add_option("--data-dir", c.data_dir, "root of <league>/<season>/ directories (default $MADNESS_DATA_DIR)");
    sub->add_option("--teams", c.teams_path, "teams CSV (team,conference)");
    sub->add_option("--games", c.games_path, "games CSV");
    sub->add_option("--out", c.out_dir, "write outputs and a manifest to this directory");
  };
  auto add_method = [&](CLI::App* sub, const std::string& help) {
    sub->add_option("--method", c.method, help)->capture_default_str();
  };

  auto* rank = app.add_subcommand("rank", "fit team strengths and list them by rank");
  add_data(rank);

  MatchArgs match;
  auto* winprob = app.add_subcommand("winprob", "win probability for one game");
  add_data(winprob);
  add_method(winprob, "conformal, linear, logistic, a comma list, or all");
  for (auto* sub : {winprob}) {
    sub->add_option("--home", match.home, "first-listed (home) team")->required();
    sub->add_option("--away", match.away, "second-listed (away) team")->required();
    sub->add_flag("--neutral", match.neutral, "neutral site");
  }
  winprob->get_option("--method")->default_str("all");

  std::string grid = "-80:80:1";
  auto* cpd = app.add_subcommand("cpd", "conformal predictive distribution of the margin of victory");
  add_data(cpd);
  cpd->add_option("--home", match.home, "first-listed (home) team")->required();
  cpd->add_option("--away", match.away, "second-listed (away) team")->required();
  cpd->add_flag("--neutral", match.neutral, "neutral site");
  cpd->add_option("--grid", grid, "margin grid lo:hi:step")->capture_default_str();

  TournamentArgs tour;
  auto* tournament = app.add_subcommand("tournament", "exact bracket win probabilities");
  add_data(tournament);
  add_method(tournament, "conformal, linear or logistic");
  tournament->add_option("--bracket", tour.bracket, "bracket JSON")->required();
  tournament->add_flag("--round-by-round", tour.round_by_round, "per-round probabilities");
  tournament->add_option("--simulate", tour.simulate, "Monte Carlo draws instead of the exact calculation");
  tournament->add_option("--seed", c.seed, "random seed")->capture_default_str();
  tournament->add_option("--threads", tour.threads, "worker threads for --simulate")->capture_default_str();

  FieldArgs field_args;
  auto* field = app.add_subcommand("field", "probability of making the national tournament field");
  add_data(field);
  add_method(field, "conformal, linear or logistic");
  field->add_option("--conf-brackets", field_args.conf_brackets, "directory of conference bracket JSON files");
  field->add_option("--field-size", c.field_size, "64 or 68")->check(CLI::IsMember({64, 68}))->capture_default_str();
  field->add_option("--rank-dist", field_args.rank_dist, "team whose tournament-rank distribution to print");

  BracketArgs bracket_args;
  auto* bracket = app.add_subcommand("bracket", "build an exemplar national bracket by the S-curve");
  add_data(bracket);
  add_method(bracket, "conformal, linear or logistic");
  bracket->add_option("--rule", bracket_args.rule, "strongest, weakest or random")->capture_default_str();
  auto* bracket_seed = bracket->add_option("--seed", c.seed, "random seed (required for --rule random)");
  bracket->add_option("--conf-brackets", bracket_args.conf_brackets, "directory of conference bracket JSON files");
  bracket->add_option("--field-size", c.field_size, "64 or 68")->check(CLI::IsMember({64, 68}))->capture_default_str();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "calibration and log loss over historical postseasons");
  eval->add_option("--data-dir", c.data_dir, "root of <league>/<season>/ directories (default $MADNESS_DATA_DIR)");
  eval->add_option("--league", c.league, "women, men or both")->capture_default_str();
  eval->add_option("--seasons", eval_args.seasons, "range 2015..2021 (end years) or a comma list")->capture_default_str();
  auto* eval_methods = eval->add_option("--methods", c.method, "comma list or all")->default_str("all");
  eval->add_flag("--plot-data", eval_args.plot_data, "also write calibration scatter data");
  eval->add_option("--out", c.out_dir, "write outputs and a manifest to this directory");

  SyntheticOptions syn;
  auto* simulate = app.add_subcommand("simulate", "write a synthetic season in the data-directory layout");
  simulate->add_option("--out", c.out_dir, "data directory to create")->required();
  simulate->add_option("--league", c.league, "women or men")->capture_default_str();
  simulate->add_option("--season", c.season, "season label (default 2019-20)");
  simulate->add_option("--seed", c.seed, "random seed")->capture_default_str();
  simulate->add_option("--conferences", syn.conferences)->capture_default_str();
  simulate->add_option("--teams-per-conference", syn.teams_per_conference)->capture_default_str();
  simulate->add_option("--periods", syn.periods)->capture_default_str();
  simulate->add_option("--games-per-period", syn.games_per_period)->capture_default_str();
  simulate->add_option("--completed-rounds", syn.completed_rounds)->capture_default_str();

  if (args.empty()) {
    err << app.help();
    return 2;
  }
  if (args.size() == 1 && (args[0] == "help")) {
    out << app.help();
    return 0;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    if ((sub == winprob && winprob->get_option("--method")->count() == 0) ||
        (sub == eval && eval_methods->count() == 0)) {
      c.method = "all";
    }
    if (c.command == "simulate") {
      syn.seed = c.seed;
      cmd_simulate(c, syn, args, out);
      return 0;
    }
    if (c.command == "eval") {
      std::map<std::string, std::string> hashes;
      const auto artifacts = cmd_eval(c, eval_args, hashes, err);
      RunConfig shown = c;
      shown.season = eval_args.seasons;
      emit(shown, args, artifacts, hashes, out);
      return 0;
    }
    Inputs in(c);
    std::vector<Artifact> artifacts;
    if (c.command == "rank") {
      artifacts = cmd_rank(c, in);
    } else if (c.command == "winprob") {
      artifacts = cmd_winprob(c, match, in);
    } else if (c.command == "cpd") {
      artifacts = cmd_cpd(c, match, grid, in);
    } else if (c.command == "tournament") {
      if (tour.simulate < 0) throw UsageError("--simulate needs a positive draw count");
      artifacts = cmd_tournament(c, tour, in);
    } else if (c.command == "field") {
      artifacts = cmd_field(c, field_args, in);
    } else if (c.command == "bracket") {
      bracket_args.seeded = bracket_seed->count() > 0;
      artifacts = cmd_bracket(c, bracket_args, in);
    }
    emit(c, args, artifacts, in.hashes(), out);
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace madness::cli
