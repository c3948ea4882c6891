#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "madness/bracket.hpp"
#include "madness/core.hpp"

namespace madness {

// Games CSV columns: date,home,away,home_points,away_points,neutral,phase[,period]
// Teams CSV columns: team,conference

TeamTable parse_teams(std::istream& in);
TeamTable parse_teams(const std::filesystem::path& path);

/// Parses and validates a game log. Every rejected row is reported in the
/// thrown IngestError with its line number.
std::vector<GameRecord> parse_games(std::istream& in, const TeamTable& teams, League league,
                                    const std::string& season);
std::vector<GameRecord> parse_games(const std::filesystem::path& path, const TeamTable& teams,
                                    League league, const std::string& season);

void write_games(std::ostream& out, const std::vector<GameRecord>& games, const TeamTable& teams);
void write_teams(std::ostream& out, const TeamTable& teams);

/// Partition by phase, order preserved.
std::pair<std::vector<GameRecord>, std::vector<GameRecord>> season_split(
    const std::vector<GameRecord>& games);

/// Games strictly before `period` (data available for a period-`period` prediction).
std::vector<GameRecord> games_before(const std::vector<GameRecord>& games, int period);

// Bracket JSON, either
//   {name, league, season, regions:[{name, seeds:[team | [a,b]]}], play_ins:[[a,b]], completed:[{winner,loser}]}
// or, for conference tournaments,
//   {conference, tree: nested pairs of names ("BYE" marks a bye), completed:[...], champion?, host?}
BracketSpec parse_bracket(const nlohmann::json& doc, const TeamTable& teams);
BracketSpec parse_bracket(const std::filesystem::path& path, const TeamTable& teams);
nlohmann::json bracket_to_json(const BracketSpec& bracket, const TeamTable& teams);

/// Every *.json file in `dir`, sorted by file name.
std::vector<BracketSpec> parse_bracket_dir(const std::filesystem::path& dir, const TeamTable& teams);

/// Splits one CSV line, honoring double quotes.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace madness
