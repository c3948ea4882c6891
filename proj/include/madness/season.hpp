#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "madness/bracket.hpp"
#include "madness/core.hpp"
#include "madness/evalcal.hpp"
#include "madness/field.hpp"
#include "madness/predict.hpp"
#include "madness/ratings.hpp"
#include "madness/tourney.hpp"

namespace madness {

/// On-disk layout of one season: <root>/<league>/<season>/{teams.csv, games.csv, conf_brackets/*.json}.
struct SeasonPaths {
  std::filesystem::path dir;

  static SeasonPaths under(const std::filesystem::path& root, League league, const std::string& season);
  std::filesystem::path teams() const { return dir / "teams.csv"; }
  std::filesystem::path games() const { return dir / "games.csv"; }
  std::filesystem::path conf_brackets() const { return dir / "conf_brackets"; }
};

/// All three predictors fitted to one season's regular-season games.
class SeasonModels {
 public:
  SeasonModels(TeamTable teams, const std::vector<GameRecord>& regular_season);

  const TeamTable& teams() const { return teams_; }
  const StrengthModel& strengths() const { return strengths_; }
  const LogisticModel& logistic() const { return logistic_; }
  const ConformalModel& conformal() const { return *conformal_; }
  const std::vector<RankedTeam>& ranking() const { return ranking_; }
  const std::vector<int>& rank_of() const { return rank_of_; }
  int n_teams() const { return static_cast<int>(teams_.size()); }

  /// P(query.home beats query.away).
  double win_prob(Method method, const MatchQuery& query) const;

  /// Coherent pairwise matrix over `teams`. Games are neutral-site unless one
  /// side is `host`, who is then treated as the home team.
  PairwiseMatrix pairwise(Method method, std::vector<TeamId> teams, std::optional<TeamId> host = std::nullopt) const;

 private:
  TeamTable teams_;
  StrengthModel strengths_;
  LogisticModel logistic_;
  std::unique_ptr<ConformalModel> conformal_;
  std::vector<RankedTeam> ranking_;
  std::vector<int> rank_of_;
};

/// Predictions for every listed game at its recorded venue.
std::vector<GamePrediction> predict_games(const SeasonModels& models, const std::vector<GameRecord>& games,
                                          const std::vector<Method>& methods);

/// Champion distributions of every conference tournament under `method`.
std::vector<ChampionDistribution> conference_outlook(const SeasonModels& models, Method method,
                                                     const std::vector<BracketSpec>& conf_brackets);

}  // namespace madness
