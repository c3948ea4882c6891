#include "madness/field.hpp"

#include <algorithm>
#include <cmath>

namespace madness {

namespace {

constexpr double kCertain = 1e-12;

}  // namespace

PoissonBinomial::PoissonBinomial(Eigen::VectorXd ps) : ps_(std::move(ps)) {
  for (Eigen::Index k = 0; k < ps_.size(); ++k) {
    if (!(ps_(k) >= 0.0 && ps_(k) <= 1.0)) throw Error("Poisson-binomial probability outside [0, 1]");
  }
}

PoissonBinomial PoissonBinomial::with(Eigen::Index k, double p) const {
  Eigen::VectorXd ps = ps_;
  ps(k) = p;
  return PoissonBinomial(std::move(ps));
}

ChampionDistribution champion_distribution(const BracketSpec& bracket, const PairwiseMatrix& probs,
                                           const TeamTable& teams) {
  ChampionDistribution out;
  const auto conf = teams.find_conference(bracket.conference);
  if (!conf) throw ConsistencyError("bracket names unknown conference '" + bracket.conference + "'");
  out.conference = *conf;

  const BracketSpec pruned = bracket.completed.empty() ? bracket : prune(bracket);
  if (pruned.empty() || pruned.node(pruned.root()).is_leaf()) {
    const auto champ = pruned.empty() ? pruned.champion : std::optional<TeamId>(pruned.node(pruned.root()).team);
    if (!champ) throw ConsistencyError("conference '" + bracket.conference + "' has neither a bracket nor a champion");
    out.teams = {*champ};
    out.prob = Eigen::VectorXd::Ones(1);
    out.decided = true;
  } else {
    const RoundProbs q = closed_form(pruned, probs);
    out.teams = q.teams;
    out.prob = q.q.col(q.rounds);
  }
  for (TeamId t : out.teams) {
    if (teams.conference_of(t) != out.conference) {
      throw ConsistencyError("team '" + teams.name(t) + "' appears in the " + bracket.conference +
                             " tournament but belongs to another conference");
    }
  }
  return out;
}

std::vector<ChampionDistribution> conference_champions(
    const std::vector<BracketSpec>& brackets, const std::function<PairwiseMatrix(const BracketSpec&)>& probs_for,
    const TeamTable& teams) {
  const auto K = teams.conferences().size();
  std::vector<ChampionDistribution> out(K);
  std::vector<bool> seen(K, false);
  for (const auto& b : brackets) {
    const auto conf = teams.find_conference(b.conference);
    if (!conf) throw ConsistencyError("bracket names unknown conference '" + b.conference + "'");
    const auto k = static_cast<std::size_t>(*conf);
    if (seen[k]) throw ConsistencyError("conference '" + b.conference + "' has more than one bracket");
    seen[k] = true;
    const PairwiseMatrix probs = b.empty() ? PairwiseMatrix{} : probs_for(b);
    out[k] = champion_distribution(b, probs, teams);
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (!seen[k]) {
      throw ConsistencyError("conference '" + teams.conferences()[k].name + "' has neither a bracket nor a champion");
    }
  }
  return out;
}

ConferenceOutcome conference_outcome(TeamId team, const std::vector<ChampionDistribution>& champions,
                                     const std::vector<int>& rank_of, const TeamTable& teams) {
  ConferenceOutcome o;
  const auto K = static_cast<Eigen::Index>(champions.size());
  o.p_low = Eigen::VectorXd::Zero(K);
  o.p_high = Eigen::VectorXd::Zero(K);
  o.own_conf = teams.conference_of(team);
  const int u = rank_of.at(static_cast<std::size_t>(team.index));
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto& c = champions[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < c.teams.size(); ++i) {
      const double p = c.prob(static_cast<Eigen::Index>(i));
      if (rank_of.at(static_cast<std::size_t>(c.teams[i].index)) > u) o.p_low(k) += p;
      else o.p_high(k) += p;
      if (c.teams[i] == team) o.q_own = p;
    }
  }
  // Champion probabilities sum to 1 only up to rounding.
  o.p_low = o.p_low.cwiseMin(1.0);
  o.p_high = o.p_high.cwiseMin(1.0);
  return o;
}

double make_field_prob(const ConferenceOutcome& o, int threshold) {
  const PoissonBinomial all(o.p_low);
  const double at_large = all.cdf(threshold);
  if (o.q_own == 0.0) return at_large;
  const double given_win = all.with(o.own_conf, 0.0).cdf(threshold);
  return std::clamp(o.q_own + at_large - given_win * o.q_own, 0.0, 1.0);
}

int classify_situation(const ConferenceOutcome& o, int threshold) {
  if (o.q_own >= 1.0 - kCertain) return 1;
  // Conditional on losing its own tournament, which conferences must, or may,
  // go to a lower-ranked team?
  const double not_own = 1.0 - o.q_own;
  int sure = 0;
  int possible = 0;
  for (Eigen::Index k = 0; k < o.p_low.size(); ++k) {
    const double p = o.p_low(k);
    const double full = k == o.own_conf ? not_own : 1.0;
    if (p >= full - kCertain) ++sure;
    if (p > kCertain) ++possible;
  }
  const bool alive = o.q_own > 0.0;
  if (possible <= threshold) return 1;
  if (sure > threshold) return alive ? 4 : 5;
  return alive ? 2 : 3;
}

Eigen::VectorXd rank_distribution(const ConferenceOutcome& o, int rank, int field_size) {
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(field_size);
  if (rank <= field_size) mass(rank - 1) = PoissonBinomial(o.p_low).cdf(at_large_threshold(rank, field_size));
  if (o.q_own > 0.0) {
    const Eigen::VectorXd lower = PoissonBinomial(o.p_low).with(o.own_conf, 0.0).pmf();
    // Winning with L lower-ranked champions puts the team at field_size - L.
    for (int r = 1; r < std::min(rank, field_size + 1); ++r) {
      const int L = field_size - r;
      if (L >= 0 && L < lower.size()) mass(r - 1) += o.q_own * lower(L);
    }
  }
  return mass;
}

FieldReport field_report(const std::vector<ChampionDistribution>& champions, const std::vector<int>& rank_of,
                         const TeamTable& teams, int field_size) {
  if (field_size < static_cast<int>(champions.size())) {
    throw Error("field size " + std::to_string(field_size) + " is smaller than the number of automatic bids");
  }
  if (field_size > static_cast<int>(teams.size())) {
    throw Error("field size " + std::to_string(field_size) + " exceeds the " + std::to_string(teams.size()) + " teams");
  }
  FieldReport report;
  report.field_size = field_size;
  for (std::size_t i = 0; i < teams.size(); ++i) {
    const TeamId t(static_cast<int>(i));
    FieldRow row;
    row.team = t;
    row.rank = rank_of.at(i);
    row.threshold = at_large_threshold(row.rank, field_size);
    const auto o = conference_outcome(t, champions, rank_of, teams);
    row.probability = make_field_prob(o, row.threshold);
    row.situation = classify_situation(o, row.threshold);
    // Structurally settled cases are reported exactly.
    if (row.situation == 1) row.probability = 1.0;
    if (row.situation == 5) row.probability = 0.0;
    report.rows.push_back(row);
  }
  std::sort(report.rows.begin(), report.rows.end(), [](const FieldRow& a, const FieldRow& b) { return a.rank < b.rank; });
  return report;
}

}  // namespace madness
