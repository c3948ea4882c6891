#include "madness/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "madness/tourney.hpp"

namespace madness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::optional<int> to_int(const std::string& s) {
  int value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::optional<bool> to_bool(const std::string& s) {
  const auto v = lower(s);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  return std::nullopt;
}

std::optional<Phase> to_phase(const std::string& s) {
  const auto v = lower(s);
  if (v == "regular") return Phase::regular;
  if (v == "post" || v == "postseason") return Phase::postseason;
  return std::nullopt;
}

std::ifstream open(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

// ---------------------------------------------------------------------------
// Teams
// ---------------------------------------------------------------------------

TeamTable parse_teams(std::istream& in) {
  std::string line;
  std::vector<IngestError::Issue> issues;
  if (!std::getline(in, line)) throw IngestError({{1, IngestError::Kind::header, "empty teams file"}});
  auto header = split_csv_line(line);
  for (auto& h : header) h = lower(h);
  const auto col = [&](const char* name) -> int {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int team_col = col("team");
  const int conf_col = col("conference");
  if (team_col < 0 || conf_col < 0) {
    throw IngestError({{1, IngestError::Kind::header, "teams header must contain team,conference"}});
  }
  std::vector<std::pair<std::string, std::string>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_csv_line(line);
    if (static_cast<int>(f.size()) <= std::max(team_col, conf_col) || f[team_col].empty()) {
      issues.push_back({lineno, IngestError::Kind::malformed, "expected team,conference"});
      continue;
    }
    rows.emplace_back(f[team_col], f[conf_col]);
  }
  if (!issues.empty()) throw IngestError(std::move(issues));
  return TeamTable::from_pairs(std::move(rows));
}

TeamTable parse_teams(const fs::path& path) {
  auto in = open(path);
  return parse_teams(in);
}

void write_teams(std::ostream& out, const TeamTable& teams) {
  out << "team,conference\n";
  for (const auto& t : teams.teams()) {
    out << csv_field(t.name) << ',' << csv_field(teams.conferences().at(static_cast<std::size_t>(t.conference)).name)
        << '\n';
  }
}

// ---------------------------------------------------------------------------
// Games
// ---------------------------------------------------------------------------

std::vector<GameRecord> parse_games(std::istream& in, const TeamTable& teams, League league,
                                    const std::string& season) {
  using Kind = IngestError::Kind;
  std::string line;
  if (!std::getline(in, line)) throw IngestError({{1, Kind::header, "empty games file"}});
  auto header = split_csv_line(line);
  for (auto& h : header) h = lower(h);
  const auto col = [&](const char* name) -> int {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int c_date = col("date"), c_home = col("home"), c_away = col("away"), c_hp = col("home_points"),
            c_ap = col("away_points"), c_neutral = col("neutral"), c_phase = col("phase"), c_period = col("period");
  if (std::min({c_date, c_home, c_away, c_hp, c_ap, c_neutral, c_phase}) < 0) {
    throw IngestError({{1, Kind::header,
                        "games header must contain date,home,away,home_points,away_points,neutral,phase[,period]"}});
  }
  const int needed = std::max({c_date, c_home, c_away, c_hp, c_ap, c_neutral, c_phase, c_period});

  std::vector<GameRecord> games;
  std::vector<std::size_t> lines;
  std::vector<IngestError::Issue> issues;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (static_cast<int>(f.size()) <= needed) {
      issues.push_back({lineno, Kind::malformed, "expected " + std::to_string(needed + 1) + " fields, got " +
                                                     std::to_string(f.size())});
      continue;
    }
    GameRecord g;
    g.date = f[c_date];
    g.season = season;
    g.league = league;
    const auto hp = to_int(f[c_hp]);
    const auto ap = to_int(f[c_ap]);
    const auto neutral = to_bool(f[c_neutral]);
    const auto phase = to_phase(f[c_phase]);
    std::optional<int> period = 1;
    if (c_period >= 0) period = to_int(f[c_period]);
    if (!hp || !ap || *hp < 0 || *ap < 0 || !neutral || !phase || !period || *period < 1 || g.date.empty()) {
      issues.push_back({lineno, Kind::malformed, "unparseable field in '" + line + "'"});
      continue;
    }
    const auto home = teams.find(f[c_home]);
    const auto away = teams.find(f[c_away]);
    if (!home || !away) {
      std::string names;
      if (!home) names += "'" + f[c_home] + "'";
      if (!away) names += std::string(names.empty() ? "" : ", ") + "'" + f[c_away] + "'";
      issues.push_back({lineno, Kind::unknown_team, "unknown team " + names});
      continue;
    }
    if (*home == *away) {
      issues.push_back({lineno, Kind::same_team, "team plays itself: " + f[c_home]});
      continue;
    }
    if (*hp == *ap) {
      issues.push_back({lineno, Kind::tied_score, "tied score " + f[c_hp] + "-" + f[c_ap]});
      continue;
    }
    g.home = *home;
    g.away = *away;
    g.home_points = *hp;
    g.away_points = *ap;
    g.neutral_site = *neutral;
    g.phase = *phase;
    g.period = *period;
    games.push_back(std::move(g));
    lines.push_back(lineno);
  }

  if (c_period >= 0 && !games.empty()) {
    std::vector<std::size_t> order(games.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return games[a].date < games[b].date; });
    int max_before = 0;  // max period over strictly earlier dates
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      int group_max = 0;
      while (j < order.size() && games[order[j]].date == games[order[i]].date) {
        const auto& g = games[order[j]];
        if (g.period < max_before) {
          issues.push_back({lines[order[j]], Kind::period_order,
                            "period " + std::to_string(g.period) + " on " + g.date + " precedes an earlier period " +
                                std::to_string(max_before)});
        }
        group_max = std::max(group_max, g.period);
        ++j;
      }
      max_before = std::max(max_before, group_max);
      i = j;
    }
  }

  if (!issues.empty()) {
    std::sort(issues.begin(), issues.end(), [](const auto& a, const auto& b) { return a.line < b.line; });
    throw IngestError(std::move(issues));
  }
  return games;
}

std::vector<GameRecord> parse_games(const fs::path& path, const TeamTable& teams, League league,
                                    const std::string& season) {
  auto in = open(path);
  return parse_games(in, teams, league, season);
}

void write_games(std::ostream& out, const std::vector<GameRecord>& games, const TeamTable& teams) {
  out << "date,home,away,home_points,away_points,neutral,phase,period\n";
  for (const auto& g : games) {
    out << g.date << ',' << csv_field(teams.name(g.home)) << ',' << csv_field(teams.name(g.away)) << ','
        << g.home_points << ',' << g.away_points << ',' << (g.neutral_site ? "true" : "false") << ','
        << (g.phase == Phase::regular ? "regular" : "post") << ',' << g.period << '\n';
  }
}

std::pair<std::vector<GameRecord>, std::vector<GameRecord>> season_split(const std::vector<GameRecord>& games) {
  std::pair<std::vector<GameRecord>, std::vector<GameRecord>> out;
  for (const auto& g : games) (g.phase == Phase::regular ? out.first : out.second).push_back(g);
  return out;
}

std::vector<GameRecord> games_before(const std::vector<GameRecord>& games, int period) {
  std::vector<GameRecord> out;
  std::copy_if(games.begin(), games.end(), std::back_inserter(out), [period](const auto& g) { return g.period < period; });
  return out;
}

// ---------------------------------------------------------------------------
// Brackets
// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kBye = "BYE";

struct TreeShape {
  int depth_min = 0;
  int depth_max = 0;
};

TreeShape shape_of(const json& node) {
  if (node.is_string()) return {0, 0};
  if (!node.is_array() || node.size() != 2) throw StructureError("tree nodes must be team names or pairs");
  const auto l = shape_of(node[0]);
  const auto r = shape_of(node[1]);
  return {1 + std::min(l.depth_min, r.depth_min), 1 + std::max(l.depth_max, r.depth_max)};
}

// Returns the node index, or -1 for a bye marker.
int build_tree(BracketSpec& b, const json& node, int round, const TeamTable& teams) {
  if (node.is_string()) {
    const auto name = node.get<std::string>();
    if (name == kBye) return -1;
    return b.add_leaf(teams.id(name));
  }
  const int l = build_tree(b, node[0], round - 1, teams);
  const int r = build_tree(b, node[1], round - 1, teams);
  if (l < 0 && r < 0) throw StructureError("game between two byes");
  if (l < 0) return r;
  if (r < 0) return l;
  return b.add_game(l, r, round);
}

std::vector<GameResult> parse_results(const json& doc, const TeamTable& teams) {
  std::vector<GameResult> out;
  if (!doc.contains("completed")) return out;
  for (const auto& r : doc.at("completed")) {
    out.push_back({teams.id(r.at("winner").get<std::string>()), teams.id(r.at("loser").get<std::string>())});
  }
  return out;
}

RegionSlot parse_slot(const json& entry, const TeamTable& teams) {
  RegionSlot slot;
  if (entry.is_string()) {
    slot.teams.push_back(teams.id(entry.get<std::string>()));
  } else if (entry.is_array() && entry.size() == 2) {
    slot.teams.push_back(teams.id(entry[0].get<std::string>()));
    slot.teams.push_back(teams.id(entry[1].get<std::string>()));
  } else {
    throw StructureError("seed entries must be a team name or a two-team play-in pair");
  }
  return slot;
}

json emit_tree(const BracketSpec& b, int i, int target_round, const TeamTable& teams) {
  const auto& n = b.node(i);
  json value = n.is_leaf() ? json(teams.name(n.team)) : json::array({emit_tree(b, n.left, n.round - 1, teams),
                                                                     emit_tree(b, n.right, n.round - 1, teams)});
  for (int r = n.is_leaf() ? 1 : n.round + 1; r <= target_round; ++r) value = json::array({value, kBye});
  return value;
}

}  // namespace

BracketSpec parse_bracket(const json& doc, const TeamTable& teams) {
  BracketSpec b;
  b.name = doc.value("name", "");
  b.league = doc.value("league", "");
  b.season = doc.value("season", "");
  b.conference = doc.value("conference", "");
  if (doc.contains("champion") && !doc.at("champion").is_null()) b.champion = teams.id(doc.at("champion").get<std::string>());
  if (doc.contains("host") && !doc.at("host").is_null()) b.host = teams.id(doc.at("host").get<std::string>());

  if (doc.contains("regions")) {
    std::vector<Region> regions;
    for (const auto& r : doc.at("regions")) {
      Region region;
      region.name = r.value("name", "");
      for (const auto& s : r.at("seeds")) region.seeds.push_back(parse_slot(s, teams));
      regions.push_back(std::move(region));
    }
    if (doc.contains("play_ins")) {
      for (const auto& p : doc.at("play_ins")) {
        const auto pair = parse_slot(p, teams);
        const bool listed = std::any_of(regions.begin(), regions.end(), [&](const Region& reg) {
          return std::any_of(reg.seeds.begin(), reg.seeds.end(), [&](const RegionSlot& s) {
            return s.teams.size() == 2 && std::is_permutation(s.teams.begin(), s.teams.end(), pair.teams.begin());
          });
        });
        if (!listed) throw StructureError("play-in pair not found among region seeds");
      }
    }
    auto tree = bracket_from_regions(std::move(regions));
    tree.name = b.name;
    tree.league = b.league;
    tree.season = b.season;
    tree.conference = b.conference;
    tree.champion = b.champion;
    tree.host = b.host;
    b = std::move(tree);
  } else if (doc.contains("tree") && !doc.at("tree").is_null()) {
    const auto& t = doc.at("tree");
    const auto shape = shape_of(t);
    if (shape.depth_min != shape.depth_max) {
      throw StructureError("conference tree '" + b.conference +
                           "' is unbalanced; mark byes explicitly with \"BYE\" leaves");
    }
    const int root = build_tree(b, t, shape.depth_max, teams);
    if (root < 0) throw StructureError("tree contains only byes");
    b.set_root(root);
  } else if (!b.champion) {
    throw StructureError("bracket needs regions, a tree, or a champion");
  }

  b.completed = parse_results(doc, teams);
  if (!b.empty()) {
    const auto present = b.teams();
    for (const auto& r : b.completed) {
      for (TeamId t : {r.winner, r.loser}) {
        if (std::find(present.begin(), present.end(), t) == present.end()) {
          throw ConsistencyError("completed result names " + teams.name(t) + ", who is not in the bracket");
        }
      }
    }
    (void)prune(b);  // validates that every result fits the tree
  } else if (!b.completed.empty()) {
    throw ConsistencyError("completed results given without a bracket tree");
  }
  return b;
}

BracketSpec parse_bracket(const fs::path& path, const TeamTable& teams) {
  auto in = open(path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return parse_bracket(doc, teams);
}

std::vector<BracketSpec> parse_bracket_dir(const fs::path& dir, const TeamTable& teams) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<BracketSpec> out;
  for (const auto& f : files) out.push_back(parse_bracket(f, teams));
  return out;
}

json bracket_to_json(const BracketSpec& b, const TeamTable& teams) {
  json doc = json::object();
  if (!b.name.empty()) doc["name"] = b.name;
  if (!b.league.empty()) doc["league"] = b.league;
  if (!b.season.empty()) doc["season"] = b.season;
  if (!b.conference.empty()) doc["conference"] = b.conference;
  if (b.champion) doc["champion"] = teams.name(*b.champion);
  if (b.host) doc["host"] = teams.name(*b.host);

  if (!b.regions.empty()) {
    json regions = json::array();
    json play_ins = json::array();
    for (const auto& r : b.regions) {
      json seeds = json::array();
      for (const auto& s : r.seeds) {
        if (s.teams.size() == 1) {
          seeds.push_back(teams.name(s.teams[0]));
        } else {
          json pair = json::array({teams.name(s.teams[0]), teams.name(s.teams[1])});
          seeds.push_back(pair);
          play_ins.push_back(pair);
        }
      }
      regions.push_back({{"name", r.name}, {"seeds", seeds}});
    }
    doc["regions"] = regions;
    doc["play_ins"] = play_ins;
  } else if (!b.empty()) {
    const auto& root = b.node(b.root());
    doc["tree"] = emit_tree(b, b.root(), root.is_leaf() ? 0 : root.round, teams);
  }
  json completed = json::array();
  for (const auto& r : b.completed) completed.push_back({{"winner", teams.name(r.winner)}, {"loser", teams.name(r.loser)}});
  doc["completed"] = completed;
  return doc;
}

}  // namespace madness
