#include "madness/ratings.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/SparseCore>

#include "madness/numeric.hpp"

namespace madness {

namespace {

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// X'X and X'W X exploit the ~3 nonzeros per game row.
Eigen::MatrixXd gram(const SparseRows& X) { return Eigen::MatrixXd(X.transpose() * X); }

Eigen::MatrixXd weighted_gram(const SparseRows& X, const Eigen::VectorXd& w) {
  return Eigen::MatrixXd(X.transpose() * w.asDiagonal() * X);
}

bool factor_is_full_rank(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::MatrixXd& A) {
  if (llt.info() != Eigen::Success) return false;
  const Eigen::VectorXd d = llt.matrixLLT().diagonal();
  const double scale = A.diagonal().cwiseAbs().maxCoeff();
  return scale > 0 && (d.array().square().minCoeff() > 1e-12 * scale);
}

Eigen::VectorXd expand_theta(const Eigen::VectorXd& beta) {
  // beta = (mu, theta_0 .. theta_{p-2}); theta_{p-1} pinned at 0.
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(beta.size());
  theta.head(beta.size() - 1) = beta.tail(beta.size() - 1);
  return theta;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
    return a;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

void check_schedule(const Design& d, const TeamTable& teams) {
  const int p = d.n_teams;
  if (p < 2) throw RankDeficientError("need at least two teams");
  if (d.X.rows() == 0 || d.X.col(0).cwiseAbs().maxCoeff() == 0.0) {
    throw RankDeficientError("no non-neutral games: home advantage is not identifiable");
  }
  UnionFind uf(p);
  const int baseline = p - 1;
  for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
    int first = -1;
    int count = 0;
    for (Eigen::Index c = 1; c < d.X.cols(); ++c) {
      if (d.X(i, c) == 0.0) continue;
      const int t = static_cast<int>(c - 1);
      if (first < 0) first = t;
      else uf.unite(first, t);
      ++count;
    }
    if (count == 1) uf.unite(first, baseline);
  }
  std::vector<std::string> cut_off;
  for (int t = 0; t < p; ++t) {
    if (uf.find(t) != uf.find(baseline)) cut_off.push_back(teams.name(TeamId(t)));
  }
  if (!cut_off.empty()) {
    std::ostringstream os;
    os << "schedule graph is disconnected; " << cut_off.size() << " team(s) have no path to "
       << teams.name(TeamId(baseline)) << ":";
    for (std::size_t i = 0; i < cut_off.size() && i < 20; ++i) os << ' ' << cut_off[i] << (i + 1 < cut_off.size() ? "," : "");
    if (cut_off.size() > 20) os << " ...";
    throw RankDeficientError(os.str());
  }
}

}  // namespace

Eigen::VectorXd design_row(TeamId home, TeamId away, bool neutral_site, int n_teams) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n_teams);
  if (!neutral_site) x(0) = 1.0;
  if (home.index < n_teams - 1) x(1 + home.index) += 1.0;
  if (away.index < n_teams - 1) x(1 + away.index) -= 1.0;
  return x;
}

Design build_design(const std::vector<GameRecord>& games, const TeamTable& teams) {
  const int p = static_cast<int>(teams.size());
  Design d;
  d.n_teams = p;
  d.X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(games.size()), p);
  d.y.resize(static_cast<Eigen::Index>(games.size()));
  for (std::size_t i = 0; i < games.size(); ++i) {
    const auto& g = games[i];
    if (g.home.index < 0 || g.home.index >= p || g.away.index < 0 || g.away.index >= p) {
      throw Error("game on " + g.date + " references a team outside the team table");
    }
    d.X.row(static_cast<Eigen::Index>(i)) = design_row(g.home, g.away, g.neutral_site, p).transpose();
    d.y(static_cast<Eigen::Index>(i)) = g.mov();
  }
  return d;
}

double StrengthModel::leverage(const Eigen::VectorXd& x) const { return x.dot(xtx_factor.solve(x)); }

StrengthModel fit_strengths(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size()) throw Error("design and response sizes differ");
  const SparseRows Xs = X.sparseView();
  const Eigen::MatrixXd A = gram(Xs);

  StrengthModel m;
  m.xtx_factor.compute(A);
  if (!factor_is_full_rank(m.xtx_factor, A)) throw RankDeficientError("design matrix is rank deficient");
  m.beta_hat = m.xtx_factor.solve(Eigen::VectorXd(Xs.transpose() * y));
  m.residuals = y - Xs * m.beta_hat;
  m.n = X.rows();
  m.p_eff = X.cols();
  m.mu_hat = m.beta_hat(0);
  m.theta_hat = expand_theta(m.beta_hat);
  m.baseline = TeamId(static_cast<int>(X.cols()) - 1);
  m.sigma2_hat = m.n > m.p_eff ? m.residuals.squaredNorm() / static_cast<double>(m.n - m.p_eff)
                               : std::numeric_limits<double>::quiet_NaN();
  return m;
}

StrengthModel fit_strengths(const Design& design, const TeamTable& teams) {
  check_schedule(design, teams);
  return fit_strengths(design.X, design.y);
}

std::vector<RankedTeam> rank_teams(const Eigen::VectorXd& strengths, const TeamTable& teams) {
  std::vector<RankedTeam> out;
  for (Eigen::Index i = 0; i < strengths.size(); ++i) out.push_back({TeamId(static_cast<int>(i)), strengths(i), 0});
  std::sort(out.begin(), out.end(), [&](const RankedTeam& a, const RankedTeam& b) {
    if (a.strength != b.strength) return a.strength > b.strength;
    return teams.name(a.team) < teams.name(b.team);
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
  return out;
}

std::vector<int> rank_lookup(const std::vector<RankedTeam>& ranking) {
  std::vector<int> rank_of(ranking.size(), 0);
  for (const auto& r : ranking) rank_of.at(static_cast<std::size_t>(r.team.index)) = r.rank;
  return rank_of;
}

Eigen::VectorXd win_indicators(const Eigen::VectorXd& y) { return (y.array() > 0.0).cast<double>(); }

// Beyond this |log-odds| a fitted probability is within 1e-13 of 0 or 1 and
// the score no longer carries information about the direction of divergence.
constexpr double kSaturatedLogOdds = 30.0;

LogisticModel fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& z, const LogisticOptions& options) {
  if (X.rows() != z.size()) throw Error("design and response sizes differ");
  const SparseRows Xs = X.sparseView();
  LogisticModel m;
  m.beta_hat = Eigen::VectorXd::Zero(X.cols());
  m.baseline = TeamId(static_cast<int>(X.cols()) - 1);

  Eigen::LDLT<Eigen::MatrixXd> hessian;
  for (m.iterations = 0; m.iterations <= options.max_iterations; ++m.iterations) {
    const Eigen::VectorXd eta = Xs * m.beta_hat;
    const Eigen::VectorXd prob = inverse_logit(eta);
    const Eigen::VectorXd w = (prob.array() * (1.0 - prob.array())).matrix();
    const Eigen::VectorXd score = Xs.transpose() * (z - prob);
    m.score_norm = score.cwiseAbs().maxCoeff();
    hessian.compute(weighted_gram(Xs, w));
    if (hessian.info() != Eigen::Success) {
      m.warning = "information matrix is singular";
      break;
    }
    if (eta.cwiseAbs().maxCoeff() > kSaturatedLogOdds) {
      m.separation = true;
      m.warning = "separation detected: fitted probabilities reached 0 or 1; the maximum likelihood estimate does not exist";
      break;
    }
    const Eigen::VectorXd step = hessian.solve(score);
    // Under separation the score vanishes while Newton steps stay near unit
    // length, so a small score alone does not mean convergence.
    if (m.score_norm < options.score_tolerance && step.cwiseAbs().maxCoeff() < std::sqrt(options.score_tolerance)) {
      m.converged = true;
      break;
    }
    if (m.iterations == options.max_iterations) break;
    m.beta_hat += step;
    if (m.beta_hat.cwiseAbs().maxCoeff() > options.separation_bound) {
      m.separation = true;
      m.warning = "separation detected: a coefficient exceeded " + std::to_string(options.separation_bound) +
                  " log-odds; the maximum likelihood estimate does not exist";
      break;
    }
  }
  if (!m.converged && m.warning.empty()) {
    m.warning = "IRLS did not converge in " + std::to_string(options.max_iterations) + " iterations";
  }
  if (hessian.info() == Eigen::Success) {
    const Eigen::MatrixXd cov = hessian.solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
    m.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  }
  m.mu_hat = m.beta_hat(0);
  m.theta_hat = expand_theta(m.beta_hat);
  return m;
}

}  // namespace madness
