#include "madness/season.hpp"

namespace madness {

SeasonPaths SeasonPaths::under(const std::filesystem::path& root, League league, const std::string& season) {
  return SeasonPaths{root / std::string(to_string(league)) / season};
}

SeasonModels::SeasonModels(TeamTable teams, const std::vector<GameRecord>& regular_season) : teams_(std::move(teams)) {
  const Design design = build_design(regular_season, teams_);
  strengths_ = fit_strengths(design, teams_);
  logistic_ = fit_logistic(design.X, win_indicators(design.y));
  conformal_ = std::make_unique<ConformalModel>(design.X, strengths_);
  ranking_ = rank_teams(strengths_, teams_);
  rank_of_ = rank_lookup(ranking_);
}

double SeasonModels::win_prob(Method method, const MatchQuery& query) const {
  switch (method) {
    case Method::conformal: return conformal_win_prob(*conformal_, query, n_teams()).p;
    case Method::linear_t: return linear_t_win_prob(strengths_, query).p;
    case Method::logistic: return logistic_win_prob(logistic_, query).p;
  }
  throw Error("unknown method");
}

PairwiseMatrix SeasonModels::pairwise(Method method, std::vector<TeamId> teams, std::optional<TeamId> host) const {
  return PairwiseMatrix::symmetrized(std::move(teams), [&](TeamId a, TeamId b) {
    if (host && *host == b) return 1.0 - win_prob(method, MatchQuery{b, a, false});
    if (host && *host == a) return win_prob(method, MatchQuery{a, b, false});
    return win_prob(method, MatchQuery{a, b, true});
  });
}

std::vector<GamePrediction> predict_games(const SeasonModels& models, const std::vector<GameRecord>& games,
                                          const std::vector<Method>& methods) {
  std::vector<GamePrediction> out;
  out.reserve(games.size());
  for (const auto& g : games) {
    GamePrediction p;
    p.league = std::string(to_string(g.league));
    p.season = g.season;
    p.home = g.home;
    p.away = g.away;
    p.home_won = g.home_won();
    for (Method m : methods) p.probs.push_back(WinProb{models.win_prob(m, MatchQuery{g.home, g.away, g.neutral_site}), m});
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<ChampionDistribution> conference_outlook(const SeasonModels& models, Method method,
                                                     const std::vector<BracketSpec>& conf_brackets) {
  return conference_champions(
      conf_brackets,
      [&](const BracketSpec& b) {
        const BracketSpec live = b.completed.empty() ? b : prune(b);
        return models.pairwise(method, live.teams(), b.host);
      },
      models.teams());
}

}  // namespace madness
