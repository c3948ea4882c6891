#pragma once

#include <optional>
#include <string>
#include <vector>

#include "madness/core.hpp"

namespace madness {

/// One node of a single-elimination tree. Leaves hold a team; games hold two
/// children and the round in which they are played. Play-in games are round 0
/// and may only sit directly above two team leaves at the deepest level.
struct BracketNode {
  TeamId team;  // valid only for leaves
  int left = -1;
  int right = -1;
  int round = 0;
  bool play_in = false;

  bool is_leaf() const { return left < 0; }
};

struct GameResult {
  TeamId winner;
  TeamId loser;
  bool operator==(const GameResult&) const = default;
};

/// Region-format metadata kept so a bracket can be written back out.
struct RegionSlot {
  std::vector<TeamId> teams;  // one team, or two for a play-in pair
  bool operator==(const RegionSlot&) const = default;
};

struct Region {
  std::string name;
  std::vector<RegionSlot> seeds;  // seed order 1..N
  bool operator==(const Region&) const = default;
};

/// A tournament bracket. Round indices are stored on game nodes so that
/// pruning completed games never renumbers the remaining rounds; a team whose
/// path skips a round has a bye in it.
class BracketSpec {
 public:
  std::string name;
  std::string league;
  std::string season;
  std::string conference;  // conference-tournament brackets only
  std::vector<GameResult> completed;
  std::optional<TeamId> champion;  // awarded without a (finished) tree
  std::optional<TeamId> host;      // non-neutral venue for games involving host
  std::vector<Region> regions;     // empty for tree-format brackets

  BracketSpec() = default;

  int add_leaf(TeamId team);
  int add_game(int left, int right, int round, bool play_in = false);
  void set_root(int root) { root_ = root; }
  /// Replaces a decided game by a leaf holding its winner.
  void collapse(int node, TeamId winner);

  bool empty() const { return root_ < 0; }
  int root() const { return root_; }
  const BracketNode& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  const std::vector<BracketNode>& nodes() const { return nodes_; }

  /// Highest round index (0 for a single leaf).
  int rounds() const;
  bool has_play_ins() const;
  /// Teams in the subtree rooted at `node`, left to right.
  std::vector<TeamId> teams_under(int node) const;
  std::vector<TeamId> teams() const { return empty() ? std::vector<TeamId>{} : teams_under(root_); }
  /// Node indices from the team's leaf up to the root.
  std::vector<int> path_to_root(TeamId team) const;
  /// Parent links, -1 for the root.
  std::vector<int> parents() const;

  /// Structural equality of the reachable trees plus metadata.
  bool same_tree(const BracketSpec& other) const;

 private:
  std::vector<BracketNode> nodes_;
  int root_ = -1;
};

/// Seed pairing order for a region of `n` seeds (power of two): adjacent
/// slots meet first (1v16, 8v9, 4v13, 5v12, ...) and the top seeds meet last.
std::vector<int> seed_order(int n);

/// Builds the tree for region-format brackets: within a region seeds meet by
/// seed_order (1v16, 8v9, 5v12, 4v13, ...); regions meet in the same pattern
/// (1-4 and 2-3 for four regions).
BracketSpec bracket_from_regions(std::vector<Region> regions);

}  // namespace madness
