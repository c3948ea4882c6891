#pragma once

// Slow, independent reference computations used to check the fast paths.

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "madness/bracket.hpp"
#include "madness/core.hpp"
#include "madness/field.hpp"
#include "madness/tourney.hpp"

namespace oracle {

using madness::BracketSpec;
using madness::TeamId;

/// Conformal pi by refitting the augmented least-squares problem from scratch.
inline double conformal_pi_refit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                                 double y_c, double tau) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd Xa(n + 1, X.cols());
  Xa << X, x.transpose();
  Eigen::VectorXd ya(n + 1);
  ya << y, y_c;
  const Eigen::VectorXd beta = Xa.colPivHouseholderQr().solve(ya);
  const Eigen::VectorXd r = ya - Xa * beta;
  const double self = r(n);
  double below = 0;
  double ties = 0;
  for (Eigen::Index i = 0; i <= n; ++i) {
    if (std::abs(r(i) - self) <= 1e-9 * (1.0 + std::abs(self))) ties += 1;
    else if (r(i) < self) below += 1;
  }
  return (below + tau * ties) / static_cast<double>(n + 1);
}

/// Student-t CDF by adaptive Simpson integration of the density.
inline double t_cdf_simpson(double x, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
  auto f = [&](double t) { return c * std::pow(1 + t * t / df, -(df + 1) / 2); };
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double a, double b, double fa, double fm, double fb, double whole, int depth) {
        const double m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a) / 6 * (fa + 4 * flm + fm);
        const double right = (b - m) / 6 * (fm + 4 * frm + fb);
        if (depth <= 0 || std::abs(left + right - whole) < 1e-14) return left + right + (left + right - whole) / 15;
        return rec(a, m, fa, flm, fm, left, depth - 1) + rec(m, b, fm, frm, fb, right, depth - 1);
      };
  const double b = std::abs(x);
  const double whole = b / 6 * (f(0) + 4 * f(b / 2) + f(b));
  const double area = b == 0 ? 0 : rec(0, b, f(0), f(b / 2), f(b), whole, 40);
  return x >= 0 ? 0.5 + area : 0.5 - area;
}

/// P(L <= l) by summing over all 2^K success patterns.
inline double pb_cdf_enumerate(const Eigen::VectorXd& ps, int l) {
  const int K = static_cast<int>(ps.size());
  double total = 0;
  for (unsigned long mask = 0; mask < (1ul << K); ++mask) {
    double p = 1;
    int count = 0;
    for (int k = 0; k < K; ++k) {
      if (mask >> k & 1ul) {
        p *= ps(k);
        ++count;
      } else {
        p *= 1 - ps(k);
      }
    }
    if (count <= l) total += p;
  }
  return total;
}

/// Field selection by brute force over every combination of conference
/// champions: champions plus the best field_size - K non-champions.
struct FieldEnumeration {
  std::vector<double> p_field;                  // by team index
  std::vector<std::vector<double>> rank_mass;   // [team][r - 1]
};

inline FieldEnumeration enumerate_field(const std::vector<madness::ChampionDistribution>& champs,
                                        const std::vector<int>& rank_of, int field_size) {
  const std::size_t T = rank_of.size();
  const int K = static_cast<int>(champs.size());
  FieldEnumeration out;
  out.p_field.assign(T, 0.0);
  out.rank_mass.assign(T, std::vector<double>(static_cast<std::size_t>(field_size), 0.0));
  std::vector<std::size_t> pick(champs.size(), 0);
  std::function<void(std::size_t, double)> walk = [&](std::size_t k, double prob) {
    if (prob == 0.0) return;
    if (k == champs.size()) {
      std::vector<bool> in(T, false);
      for (std::size_t c = 0; c < champs.size(); ++c) in[static_cast<std::size_t>(champs[c].teams[pick[c]].index)] = true;
      std::vector<std::size_t> order(T);
      for (std::size_t i = 0; i < T; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return rank_of[a] < rank_of[b]; });
      int at_large = field_size - K;
      for (std::size_t i : order) {
        if (!in[i] && at_large > 0) {
          in[i] = true;
          --at_large;
        }
      }
      int position = 0;
      for (std::size_t i : order) {
        if (!in[i]) continue;
        ++position;
        out.p_field[i] += prob;
        out.rank_mass[i][static_cast<std::size_t>(position - 1)] += prob;
      }
      return;
    }
    for (std::size_t i = 0; i < champs[k].teams.size(); ++i) {
      pick[k] = i;
      walk(k + 1, prob * champs[k].prob(static_cast<Eigen::Index>(i)));
    }
  };
  walk(0, 1.0);
  return out;
}

/// Champion distribution of a bracket by enumerating every game outcome.
/// `keep` filters histories (for conditioning); returns unnormalized mass.
inline std::map<int, double> enumerate_champions(
    const BracketSpec& b, const madness::PairwiseMatrix& p,
    const std::function<bool(const std::vector<madness::GameResult>&)>& keep = {}) {
  std::vector<int> games;
  std::function<void(int)> post = [&](int i) {
    const auto& n = b.node(i);
    if (n.is_leaf()) return;
    post(n.left);
    post(n.right);
    games.push_back(i);
  };
  post(b.root());
  std::map<int, double> out;
  const std::size_t G = games.size();
  for (unsigned long mask = 0; mask < (1ul << G); ++mask) {
    std::map<int, TeamId> winner;
    std::vector<madness::GameResult> history;
    double prob = 1;
    auto team_at = [&](int i) { return b.node(i).is_leaf() ? b.node(i).team : winner.at(i); };
    for (std::size_t g = 0; g < G; ++g) {
      const auto& n = b.node(games[g]);
      const TeamId l = team_at(n.left), r = team_at(n.right);
      const bool left_wins = (mask >> g & 1ul) == 0;
      winner[games[g]] = left_wins ? l : r;
      prob *= left_wins ? p(l, r) : p(r, l);
      history.push_back(left_wins ? madness::GameResult{l, r} : madness::GameResult{r, l});
    }
    if (keep && !keep(history)) continue;
    out[team_at(b.root()).index] += prob;
  }
  return out;
}

/// Random bracket over teams 0..n-1 with random shape (uneven splits give byes).
inline BracketSpec random_bracket(int n, std::mt19937_64& rng) {
  BracketSpec b;
  std::vector<int> ids(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
  std::shuffle(ids.begin(), ids.end(), rng);
  std::function<int(int, int, int&)> build = [&](int lo, int hi, int& height) -> int {
    if (hi - lo == 1) {
      height = 0;
      return b.add_leaf(TeamId(ids[static_cast<std::size_t>(lo)]));
    }
    const int mid = std::uniform_int_distribution<int>(lo + 1, hi - 1)(rng);
    int hl = 0, hr = 0;
    const int l = build(lo, mid, hl);
    const int r = build(mid, hi, hr);
    height = std::max(hl, hr) + 1;
    return b.add_game(l, r, height);
  };
  int h = 0;
  b.set_root(build(0, n, h));
  return b;
}

inline madness::PairwiseMatrix random_pairwise(int n, std::mt19937_64& rng) {
  std::vector<TeamId> teams;
  for (int i = 0; i < n; ++i) teams.emplace_back(i);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  return madness::PairwiseMatrix::symmetrized(teams, [&](TeamId, TeamId) { return u(rng); });
}

/// A team table holding every name found in a bracket document.
inline madness::TeamTable teams_from_bracket(const nlohmann::json& doc) {
  std::set<std::string> names;
  std::function<void(const nlohmann::json&)> collect = [&](const nlohmann::json& j) {
    if (j.is_string()) {
      if (j.get<std::string>() != "BYE") names.insert(j.get<std::string>());
    } else if (j.is_array()) {
      for (const auto& e : j) collect(e);
    }
  };
  if (doc.contains("regions")) {
    for (const auto& r : doc.at("regions")) collect(r.at("seeds"));
  }
  if (doc.contains("tree")) collect(doc.at("tree"));
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& n : names) rows.emplace_back(n, "fixture");
  return madness::TeamTable::from_pairs(rows);
}

}  // namespace oracle
