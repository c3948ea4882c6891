#include "madness/tourney.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace madness {

// ---------------------------------------------------------------------------
// PairwiseMatrix
// ---------------------------------------------------------------------------

PairwiseMatrix::PairwiseMatrix(std::vector<TeamId> teams, Eigen::MatrixXd probs)
    : teams_(std::move(teams)), probs_(std::move(probs)) {
  const auto n = static_cast<Eigen::Index>(teams_.size());
  if (probs_.rows() != n || probs_.cols() != n) throw Error("pairwise matrix size does not match its team list");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!index_.emplace(teams_[static_cast<std::size_t>(i)], i).second) throw Error("duplicate team in pairwise matrix");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double p = probs_(i, j);
      if (!(p >= 0.0 && p <= 1.0)) throw Error("pairwise probability outside [0, 1]");
      if (std::abs(p + probs_(j, i) - 1.0) > 1e-9) throw Error("pairwise probabilities are not complementary");
    }
  }
}

PairwiseMatrix PairwiseMatrix::symmetrized(std::vector<TeamId> teams,
                                           const std::function<double(TeamId, TeamId)>& first_beats_second) {
  const auto n = static_cast<Eigen::Index>(teams.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(n, n, 0.5);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const TeamId a = teams[static_cast<std::size_t>(i)];
      const TeamId b = teams[static_cast<std::size_t>(j)];
      if (a < b) {
        p(i, j) = first_beats_second(a, b);
        p(j, i) = 1.0 - p(i, j);
      } else {
        p(j, i) = first_beats_second(b, a);
        p(i, j) = 1.0 - p(j, i);
      }
    }
  }
  return PairwiseMatrix(std::move(teams), std::move(p));
}

PairwiseMatrix PairwiseMatrix::constant(std::vector<TeamId> teams, double p_all) {
  if (p_all != 0.5) {
    return symmetrized(std::move(teams), [p_all](TeamId, TeamId) { return p_all; });
  }
  const auto n = static_cast<Eigen::Index>(teams.size());
  return PairwiseMatrix(std::move(teams), Eigen::MatrixXd::Constant(n, n, 0.5));
}

Eigen::Index PairwiseMatrix::index(TeamId team) const {
  auto it = index_.find(team);
  if (it == index_.end()) throw Error("team " + std::to_string(team.index) + " is not covered by the pairwise matrix");
  return it->second;
}

// ---------------------------------------------------------------------------
// Bracket evaluation
// ---------------------------------------------------------------------------

namespace {

Eigen::Index row_of(const std::vector<TeamId>& teams, TeamId team) {
  auto it = std::find(teams.begin(), teams.end(), team);
  if (it == teams.end()) throw Error("team " + std::to_string(team.index) + " is not in this bracket");
  return it - teams.begin();
}

// Lowest common ancestor of two leaves given parent links.
int meeting_node(const BracketSpec& b, const std::vector<int>& parent, int a, int c) {
  std::vector<int> up;
  for (int i = a; i >= 0; i = parent[static_cast<std::size_t>(i)]) up.push_back(i);
  for (int i = c; i >= 0; i = parent[static_cast<std::size_t>(i)]) {
    if (std::find(up.begin(), up.end(), i) != up.end()) return i;
  }
  (void)b;
  return -1;
}

int find_leaf(const BracketSpec& b, TeamId team) {
  const auto path = b.path_to_root(team);
  return path.empty() ? -1 : path.front();
}

}  // namespace

const std::vector<TeamId>& OpponentSets::of(TeamId team, int round) const {
  return sets.at(static_cast<std::size_t>(row_of(teams, team))).at(static_cast<std::size_t>(round));
}

Eigen::Index RoundProbs::row(TeamId team) const { return row_of(teams, team); }

double SimulationResult::frequency(TeamId team) const { return champion_freq(row_of(teams, team)); }

BracketSpec prune(const BracketSpec& bracket) {
  BracketSpec out = bracket;
  out.completed.clear();
  if (bracket.empty()) return out;

  std::vector<GameResult> pending = bracket.completed;
  while (!pending.empty()) {
    std::vector<GameResult> deferred;
    for (const auto& r : pending) {
      if (r.winner == r.loser) throw ConsistencyError("a result lists the same team as winner and loser");
      const int w = find_leaf(out, r.winner);
      const int l = find_leaf(out, r.loser);
      if (w < 0 || l < 0) {
        throw ConsistencyError("result " + std::to_string(r.winner.index) + " over " + std::to_string(r.loser.index) +
                               " involves a team that is not (or no longer) in the bracket");
      }
      const auto parent = out.parents();
      const int game = meeting_node(out, parent, w, l);
      const auto& g = out.node(game);
      const bool ready = out.node(g.left).is_leaf() && out.node(g.right).is_leaf();
      if (ready) {
        out.collapse(game, r.winner);
      } else {
        deferred.push_back(r);
      }
    }
    if (deferred.size() == pending.size()) {
      throw ConsistencyError("completed results cannot all be applied: a listed game could not have been played");
    }
    pending = std::move(deferred);
  }
  if (out.node(out.root()).is_leaf()) out.champion = out.node(out.root()).team;
  return out;
}

OpponentSets opponent_sets(const BracketSpec& bracket) {
  OpponentSets o;
  o.teams = bracket.teams();
  o.rounds = bracket.rounds();
  o.sets.assign(o.teams.size(), std::vector<std::vector<TeamId>>(static_cast<std::size_t>(o.rounds) + 1));
  for (std::size_t t = 0; t < o.teams.size(); ++t) {
    const auto path = bracket.path_to_root(o.teams[t]);
    for (std::size_t k = 1; k < path.size(); ++k) {
      const auto& game = bracket.node(path[k]);
      const int sibling = game.left == path[k - 1] ? game.right : game.left;
      o.sets[t][static_cast<std::size_t>(game.round)] = bracket.teams_under(sibling);
    }
  }
  return o;
}

RoundProbs closed_form(const BracketSpec& input, const PairwiseMatrix& probs) {
  const BracketSpec bracket = input.completed.empty() ? input : prune(input);
  RoundProbs out;
  if (bracket.empty()) {
    if (!bracket.champion) throw Error("bracket has neither a tree nor a champion");
    out.teams = {*bracket.champion};
    out.q = Eigen::MatrixXd::Ones(1, 1);
    return out;
  }
  out.teams = bracket.teams();
  out.rounds = bracket.rounds();
  out.play_ins = bracket.has_play_ins();
  const auto T = static_cast<Eigen::Index>(out.teams.size());

  // Map bracket rows onto pairwise-matrix rows once.
  Eigen::MatrixXd p(T, T);
  std::vector<Eigen::Index> idx(out.teams.size());
  for (Eigen::Index i = 0; i < T; ++i) idx[static_cast<std::size_t>(i)] = probs.index(out.teams[static_cast<std::size_t>(i)]);
  for (Eigen::Index i = 0; i < T; ++i) {
    for (Eigen::Index j = 0; j < T; ++j) {
      p(i, j) = i == j ? 0.0 : probs.matrix()(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
  }

  // win[node](row) = P(team in row wins the game at node); leaves are 1.
  std::vector<Eigen::VectorXd> win(bracket.nodes().size());
  std::function<void(int)> solve = [&](int i) {
    const auto& n = bracket.node(i);
    auto& w = win[static_cast<std::size_t>(i)];
    w = Eigen::VectorXd::Zero(T);
    if (n.is_leaf()) {
      w(row_of(out.teams, n.team)) = 1.0;
      return;
    }
    solve(n.left);
    solve(n.right);
    const auto& wl = win[static_cast<std::size_t>(n.left)];
    const auto& wr = win[static_cast<std::size_t>(n.right)];
    // Each side's survivors face the other side's distribution.
    w = wl.cwiseProduct(p * wr) + wr.cwiseProduct(p * wl);
  };
  solve(bracket.root());

  out.q = Eigen::MatrixXd::Ones(T, out.rounds + 1);
  for (Eigen::Index t = 0; t < T; ++t) {
    const auto path = bracket.path_to_root(out.teams[static_cast<std::size_t>(t)]);
    std::vector<int> game_at(static_cast<std::size_t>(out.rounds) + 1, -1);
    for (std::size_t k = 1; k < path.size(); ++k) game_at[static_cast<std::size_t>(bracket.node(path[k]).round)] = path[k];
    double carried = 1.0;
    for (int j = 0; j <= out.rounds; ++j) {
      const int g = game_at[static_cast<std::size_t>(j)];
      if (g >= 0) carried = win[static_cast<std::size_t>(g)](t);
      out.q(t, j) = carried;
    }
  }

  const double total = out.q.col(out.rounds).sum();
  if (std::abs(total - 1.0) > 1e-10) {
    throw NumericalError("champion probabilities sum to " + std::to_string(total) + ", not 1");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  // SplitMix64 finalizer over a Weyl sequence keyed by the seed.
  std::uint64_t z = seed * 0xD1B54A32D192ED03ull + counter * 0x9E3779B97F4A7C15ull + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

SimulationResult monte_carlo(const BracketSpec& input, const PairwiseMatrix& probs, std::int64_t draws,
                             std::uint64_t seed, unsigned threads) {
  if (draws < 1) throw Error("need at least one draw");
  const BracketSpec bracket = input.completed.empty() ? input : prune(input);
  SimulationResult res;
  res.draws = draws;
  if (bracket.empty()) {
    if (!bracket.champion) throw Error("bracket has neither a tree nor a champion");
    res.teams = {*bracket.champion};
    res.champion_freq = Eigen::VectorXd::Ones(1);
    return res;
  }
  res.teams = bracket.teams();
  const auto T = static_cast<Eigen::Index>(res.teams.size());

  // Flatten to post-order: leaves carry their team row, games their children.
  struct Flat {
    int left = -1, right = -1, team_row = -1;
  };
  std::vector<Flat> flat;
  std::function<int(int)> lower = [&](int i) -> int {
    const auto& n = bracket.node(i);
    Flat f;
    if (n.is_leaf()) {
      f.team_row = static_cast<int>(row_of(res.teams, n.team));
    } else {
      f.left = lower(n.left);
      f.right = lower(n.right);
    }
    flat.push_back(f);
    return static_cast<int>(flat.size()) - 1;
  };
  lower(bracket.root());
  std::vector<int> games;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (flat[i].team_row < 0) games.push_back(static_cast<int>(i));
  }
  const auto n_games = static_cast<std::uint64_t>(games.size());

  Eigen::MatrixXd p(T, T);
  for (Eigen::Index i = 0; i < T; ++i) {
    for (Eigen::Index j = 0; j < T; ++j) {
      p(i, j) = i == j ? 0.0 : probs(res.teams[static_cast<std::size_t>(i)], res.teams[static_cast<std::size_t>(j)]);
    }
  }

  auto run = [&](std::int64_t begin, std::int64_t end, Eigen::VectorXd& counts) {
    std::vector<int> winner(flat.size());
    for (std::size_t i = 0; i < flat.size(); ++i) winner[i] = flat[i].team_row;
    for (std::int64_t d = begin; d < end; ++d) {
      std::uint64_t counter = static_cast<std::uint64_t>(d) * n_games;
      for (int g : games) {
        const auto& f = flat[static_cast<std::size_t>(g)];
        const int u = winner[static_cast<std::size_t>(f.left)];
        const int v = winner[static_cast<std::size_t>(f.right)];
        winner[static_cast<std::size_t>(g)] = counter_uniform(seed, counter++) < p(u, v) ? u : v;
      }
      counts(winner.back()) += 1.0;
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::int64_t>(draws, 64))));
  std::vector<Eigen::VectorXd> partial(threads, Eigen::VectorXd::Zero(T));
  if (threads == 1) {
    run(0, draws, partial[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      const std::int64_t begin = draws * t / threads;
      const std::int64_t end = draws * (t + 1) / threads;
      pool.emplace_back(run, begin, end, std::ref(partial[t]));
    }
    for (auto& th : pool) th.join();
  }
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(T);
  for (const auto& c : partial) counts += c;
  res.champion_freq = counts / static_cast<double>(draws);
  return res;
}

boost::multiprecision::cpp_int bracket_count(unsigned n_teams) {
  if (n_teams < 2 || (n_teams & (n_teams - 1)) != 0) {
    throw Error("bracket_count needs a power-of-two team count >= 2, got " + std::to_string(n_teams));
  }
  using boost::multiprecision::cpp_int;
  cpp_int product = 1;
  for (unsigned i = 1; i <= n_teams / 2; ++i) product *= cpp_int(i) * (2 * i - 1);  // C(2i, 2) = i(2i - 1)
  return product >> (n_teams / 2 - 1);
}

}  // namespace madness
