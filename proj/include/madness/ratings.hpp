#pragma once

#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "madness/core.hpp"

namespace madness {

/// Margin-of-victory regression inputs. Column 0 is the home-court indicator;
/// column 1 + t is team t for t < p - 1. The baseline team (p - 1) has no column.
struct Design {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  int n_teams = 0;
};

/// Covariate row for one game: e_home + e_{u} - e_{v} with the baseline column dropped.
Eigen::VectorXd design_row(TeamId home, TeamId away, bool neutral_site, int n_teams);

Design build_design(const std::vector<GameRecord>& games, const TeamTable& teams);

/// Least-squares fit of the home-advantage + team-strength model.
struct StrengthModel {
  double mu_hat = 0.0;
  Eigen::VectorXd theta_hat;  // length p, baseline entry exactly 0
  TeamId baseline;
  Eigen::VectorXd beta_hat;   // (mu, theta_0 .. theta_{p-2})
  Eigen::LLT<Eigen::MatrixXd> xtx_factor;
  double sigma2_hat = 0.0;
  Eigen::Index n = 0;
  Eigen::Index p_eff = 0;
  Eigen::VectorXd residuals;

  /// x'(X'X)^{-1}x for a covariate row.
  double leverage(const Eigen::VectorXd& x) const;
  double predict(const Eigen::VectorXd& x) const { return x.dot(beta_hat); }
  Eigen::Index df() const { return n - p_eff; }
};

/// Throws RankDeficientError when X lacks full column rank; names the teams
/// cut off from the baseline when the schedule graph is disconnected.
StrengthModel fit_strengths(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);
StrengthModel fit_strengths(const Design& design, const TeamTable& teams);

struct RankedTeam {
  TeamId team;
  double strength = 0.0;
  int rank = 0;
};

/// Strictly by decreasing strength; equal strengths fall back to team name.
std::vector<RankedTeam> rank_teams(const Eigen::VectorXd& strengths, const TeamTable& teams);
inline std::vector<RankedTeam> rank_teams(const StrengthModel& model, const TeamTable& teams) {
  return rank_teams(model.theta_hat, teams);
}
/// rank_of[team.index] = 1-based overall rank.
std::vector<int> rank_lookup(const std::vector<RankedTeam>& ranking);

struct LogisticOptions {
  int max_iterations = 100;
  double score_tolerance = 1e-8;
  double separation_bound = 50.0;  // |beta_j| in log-odds
};

struct LogisticModel {
  double mu_hat = 0.0;
  Eigen::VectorXd theta_hat;
  TeamId baseline;
  Eigen::VectorXd beta_hat;
  bool converged = false;
  bool separation = false;
  int iterations = 0;
  double score_norm = 0.0;
  Eigen::VectorXd std_errors;  // sqrt(diag((X'WX)^{-1})) at the final iterate
  std::string warning;

  double log_odds(const Eigen::VectorXd& x) const { return x.dot(beta_hat); }
};

/// Maximum likelihood by iteratively reweighted least squares (Newton).
LogisticModel fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& z, const LogisticOptions& options = {});

/// Win indicators 1{y > 0}.
Eigen::VectorXd win_indicators(const Eigen::VectorXd& y);

}  // namespace madness
