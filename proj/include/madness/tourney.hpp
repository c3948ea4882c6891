#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "madness/bracket.hpp"
#include "madness/core.hpp"

namespace madness {

/// Win probabilities for every ordered pair of a team set; p(u, v) + p(v, u) = 1.
class PairwiseMatrix {
 public:
  PairwiseMatrix() = default;
  /// Validates coherence (|p_uv + p_vu - 1| <= 1e-9, entries in [0, 1]).
  PairwiseMatrix(std::vector<TeamId> teams, Eigen::MatrixXd probs);

  /// Evaluates `first_beats_second(u, v)` once per unordered pair with u the
  /// alphabetically-first team (lower id) and fills p(v, u) = 1 - p(u, v).
  static PairwiseMatrix symmetrized(std::vector<TeamId> teams,
                                    const std::function<double(TeamId, TeamId)>& first_beats_second);
  /// Every pair at probability `p_all` (0.5 gives the uniform instance).
  static PairwiseMatrix constant(std::vector<TeamId> teams, double p_all = 0.5);

  double operator()(TeamId u, TeamId v) const { return probs_(index(u), index(v)); }
  bool covers(TeamId team) const { return index_.count(team) > 0; }
  Eigen::Index index(TeamId team) const;
  const std::vector<TeamId>& teams() const { return teams_; }
  const Eigen::MatrixXd& matrix() const { return probs_; }

 private:
  std::vector<TeamId> teams_;
  std::unordered_map<TeamId, Eigen::Index> index_;
  Eigen::MatrixXd probs_;
};

/// Potential opponents per team per round; sets are empty for bye rounds.
struct OpponentSets {
  std::vector<TeamId> teams;                            // bracket order
  int rounds = 0;                                       // J
  std::vector<std::vector<std::vector<TeamId>>> sets;  // [team row][round 0..J]

  const std::vector<TeamId>& of(TeamId team, int round) const;
};

/// q(u, j): probability team u wins its round-j game (carried through byes).
/// Column 0 is the play-in round; it is 1 for teams without a play-in game.
struct RoundProbs {
  std::vector<TeamId> teams;
  Eigen::MatrixXd q;  // teams x (rounds + 1)
  int rounds = 0;
  bool play_ins = false;

  Eigen::Index row(TeamId team) const;
  double champion(TeamId team) const { return q(row(team), rounds); }
  double at(TeamId team, int round) const { return q(row(team), round); }
};

/// Applies completed results: losers removed, winners advanced in place so
/// later rounds keep their indices. Throws ConsistencyError on results that
/// contradict the tree or each other.
BracketSpec prune(const BracketSpec& bracket);

OpponentSets opponent_sets(const BracketSpec& bracket);

/// Exact per-round win probabilities by the round-by-round product-sum
/// recursion: q_{u,j} = q_{u,j-1} * sum_{s in O_{u,j}} p_{us} q_{s,j-1}.
/// Completed results are pruned first. Throws NumericalError if the champion
/// probabilities do not sum to 1 within 1e-10.
RoundProbs closed_form(const BracketSpec& bracket, const PairwiseMatrix& probs);

struct SimulationResult {
  std::vector<TeamId> teams;
  Eigen::VectorXd champion_freq;
  std::int64_t draws = 0;

  double frequency(TeamId team) const;
};

/// Monte Carlo tournament replay. Each game's uniform draw is a pure function
/// of (seed, draw index, game index), so results do not depend on `threads`.
SimulationResult monte_carlo(const BracketSpec& bracket, const PairwiseMatrix& probs, std::int64_t draws,
                             std::uint64_t seed, unsigned threads = 1);

/// Counter-based uniform in [0, 1).
double counter_uniform(std::uint64_t seed, std::uint64_t counter);

/// Number of distinct single-elimination brackets for N = 2^J teams:
/// prod_{i=1}^{N/2} C(2i, 2) / 2^(N/2 - 1).
boost::multiprecision::cpp_int bracket_count(unsigned n_teams);

}  // namespace madness
