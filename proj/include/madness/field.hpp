#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "madness/bracket.hpp"
#include "madness/core.hpp"
#include "madness/numeric.hpp"
#include "madness/tourney.hpp"

namespace madness {

/// Count of independent, non-identical Bernoulli successes.
class PoissonBinomial {
 public:
  PoissonBinomial() = default;
  /// Throws Error for entries outside [0, 1].
  explicit PoissonBinomial(Eigen::VectorXd ps);

  Eigen::Index size() const { return ps_.size(); }
  const Eigen::VectorXd& probabilities() const { return ps_; }
  double cdf(Eigen::Index l) const { return poisson_binomial_cdf(ps_, l); }
  Eigen::VectorXd pmf() const { return poisson_binomial_pmf(ps_); }
  /// Same distribution with entry k replaced by `p`.
  PoissonBinomial with(Eigen::Index k, double p) const;

 private:
  Eigen::VectorXd ps_;
};

inline double pb_cdf(const PoissonBinomial& dist, Eigen::Index l) { return dist.cdf(l); }

/// Who can still win one conference tournament, with probabilities.
struct ChampionDistribution {
  int conference = -1;
  std::vector<TeamId> teams;
  Eigen::VectorXd prob;
  bool decided = false;
};

/// Closed-form champion probabilities of a (possibly partly played) conference
/// bracket; a decided bracket or awarded bid is a point mass.
ChampionDistribution champion_distribution(const BracketSpec& bracket, const PairwiseMatrix& probs,
                                           const TeamTable& teams);

/// One distribution per conference of `teams`, in conference order. Throws
/// ConsistencyError for a conference with no bracket, two brackets, or an
/// unknown conference name.
std::vector<ChampionDistribution> conference_champions(
    const std::vector<BracketSpec>& brackets, const std::function<PairwiseMatrix(const BracketSpec&)>& probs_for,
    const TeamTable& teams);

/// The conference picture seen from one focal team.
struct ConferenceOutcome {
  Eigen::VectorXd p_low;   // per conference: champion ranked below the focal team
  Eigen::VectorXd p_high;  // per conference: champion is the focal team or ranked above it
  int own_conf = -1;
  double q_own = 0.0;      // focal team wins its own tournament
};

/// `rank_of[team.index]` is the 1-based overall rank.
ConferenceOutcome conference_outcome(TeamId team, const std::vector<ChampionDistribution>& champions,
                                     const std::vector<int>& rank_of, const TeamTable& teams);

/// At-large threshold: the focal team is in as an at-large bid when at most
/// field_size - rank conferences go to lower-ranked teams.
inline int at_large_threshold(int rank, int field_size) { return field_size - rank; }

/// P(F_u = 1) = q_own + P(L <= t) - P(L <= t | own conference zeroed) q_own.
double make_field_prob(const ConferenceOutcome& outcome, int threshold);

/// 1 locked in, 2 alive and partly reliant on others, 3 eliminated but
/// reliant on others, 4 must win its tournament, 5 no path left.
int classify_situation(const ConferenceOutcome& outcome, int threshold);

/// P(R_u = r, F_u = 1) for r = 1..field_size (index r - 1). Mass sits at
/// r = u when at most t_u conferences go to lower-ranked teams, and at
/// r = field_size - L < u when the team wins its tournament with L lower
/// champions; ranks below u are impossible. Sums to P(F_u = 1).
Eigen::VectorXd rank_distribution(const ConferenceOutcome& outcome, int rank, int field_size);

struct FieldRow {
  TeamId team;
  int rank = 0;
  int situation = 0;
  int threshold = 0;
  double probability = 0.0;
};

struct FieldReport {
  int field_size = 64;
  std::vector<FieldRow> rows;  // by overall rank
};

FieldReport field_report(const std::vector<ChampionDistribution>& champions, const std::vector<int>& rank_of,
                         const TeamTable& teams, int field_size = 64);

}  // namespace madness
