#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "madness/bracket.hpp"
#include "madness/core.hpp"

namespace madness {

/// Knobs for a simulated league drawn from the margin-of-victory model.
struct SyntheticOptions {
  int conferences = 4;
  int teams_per_conference = 8;  // power of two: each conference plays a full bracket
  int periods = 12;              // regular-season weeks
  int games_per_period = 2;      // per team, roughly
  double home_advantage = 3.5;
  double strength_sd = 8.0;
  double noise_sd = 11.0;
  double neutral_share = 0.1;
  int completed_rounds = 1;      // conference-tournament rounds already played
  std::uint64_t seed = 1;
};

struct SyntheticLeague {
  TeamTable teams;
  Eigen::VectorXd strength;  // true strengths, by team id
  std::vector<GameRecord> games;           // regular season then played tournament games
  std::vector<BracketSpec> conf_brackets;  // partly completed
};

SyntheticLeague make_synthetic_league(const SyntheticOptions& options, League league = League::women,
                                      const std::string& season = "2019-20");

/// Writes teams.csv, games.csv and conf_brackets/*.json under `dir`.
void write_season(const SyntheticLeague& league, const std::filesystem::path& dir);

}  // namespace madness
