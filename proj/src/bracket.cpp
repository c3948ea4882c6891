#include "madness/bracket.hpp"

#include <algorithm>
#include <functional>

namespace madness {

int BracketSpec::add_leaf(TeamId team) {
  BracketNode node;
  node.team = team;
  nodes_.push_back(node);
  return static_cast<int>(nodes_.size()) - 1;
}

int BracketSpec::add_game(int left, int right, int round, bool play_in) {
  BracketNode node;
  node.left = left;
  node.right = right;
  node.round = round;
  node.play_in = play_in;
  nodes_.push_back(node);
  return static_cast<int>(nodes_.size()) - 1;
}

void BracketSpec::collapse(int i, TeamId winner) {
  auto& n = nodes_.at(static_cast<std::size_t>(i));
  n = BracketNode{};
  n.team = winner;
}

int BracketSpec::rounds() const {
  if (empty()) return 0;
  int best = 0;
  std::function<void(int)> walk = [&](int i) {
    const auto& n = node(i);
    if (n.is_leaf()) return;
    best = std::max(best, n.round);
    walk(n.left);
    walk(n.right);
  };
  walk(root_);
  return best;
}

bool BracketSpec::has_play_ins() const {
  if (empty()) return false;
  bool found = false;
  std::function<void(int)> walk = [&](int i) {
    const auto& n = node(i);
    if (n.is_leaf()) return;
    found = found || n.play_in;
    walk(n.left);
    walk(n.right);
  };
  walk(root_);
  return found;
}

std::vector<TeamId> BracketSpec::teams_under(int start) const {
  std::vector<TeamId> out;
  std::vector<int> stack{start};
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    const auto& n = node(i);
    if (n.is_leaf()) {
      out.push_back(n.team);
    } else {
      stack.push_back(n.right);
      stack.push_back(n.left);
    }
  }
  return out;
}

std::vector<int> BracketSpec::parents() const {
  std::vector<int> parent(nodes_.size(), -1);
  if (empty()) return parent;
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    const auto& n = node(i);
    if (n.is_leaf()) continue;
    parent[static_cast<std::size_t>(n.left)] = i;
    parent[static_cast<std::size_t>(n.right)] = i;
    stack.push_back(n.left);
    stack.push_back(n.right);
  }
  return parent;
}

std::vector<int> BracketSpec::path_to_root(TeamId team) const {
  if (empty()) return {};
  const auto parent = parents();
  int leaf = -1;
  std::vector<int> stack{root_};
  while (!stack.empty() && leaf < 0) {
    const int i = stack.back();
    stack.pop_back();
    const auto& n = node(i);
    if (n.is_leaf()) {
      if (n.team == team) leaf = i;
    } else {
      stack.push_back(n.left);
      stack.push_back(n.right);
    }
  }
  std::vector<int> path;
  for (int i = leaf; i >= 0; i = parent[static_cast<std::size_t>(i)]) path.push_back(i);
  return path;
}

bool BracketSpec::same_tree(const BracketSpec& other) const {
  std::function<bool(int, int)> eq = [&](int a, int b) {
    const auto& x = node(a);
    const auto& y = other.node(b);
    if (x.is_leaf() != y.is_leaf()) return false;
    if (x.is_leaf()) return x.team == y.team;
    return x.round == y.round && x.play_in == y.play_in && eq(x.left, y.left) && eq(x.right, y.right);
  };
  if (empty() || other.empty()) {
    if (empty() != other.empty()) return false;
  } else if (!eq(root_, other.root_)) {
    return false;
  }
  return name == other.name && league == other.league && season == other.season &&
         conference == other.conference && completed == other.completed && champion == other.champion &&
         host == other.host && regions == other.regions;
}

std::vector<int> seed_order(int n) {
  if (n < 1 || (n & (n - 1)) != 0) throw StructureError("region size must be a power of two");
  std::vector<int> order{1};
  for (int size = 2; size <= n; size *= 2) {
    std::vector<int> next;
    for (int s : order) {
      next.push_back(s);
      next.push_back(size + 1 - s);
    }
    order = std::move(next);
  }
  return order;
}

BracketSpec bracket_from_regions(std::vector<Region> regions) {
  if (regions.empty()) throw StructureError("bracket has no regions");
  const auto n_regions = static_cast<int>(regions.size());
  const auto n_seeds = static_cast<int>(regions.front().seeds.size());
  for (const auto& r : regions) {
    if (static_cast<int>(r.seeds.size()) != n_seeds) {
      throw StructureError("region '" + r.name + "' has a different number of seeds");
    }
  }
  const auto within = seed_order(n_seeds);
  const auto across = seed_order(n_regions);

  BracketSpec b;
  // Build a region subtree: leaves (or play-in games) then pairwise merges.
  auto build_region = [&](const Region& region) {
    std::vector<int> level;
    for (int seed : within) {
      const auto& slot = region.seeds.at(static_cast<std::size_t>(seed - 1));
      if (slot.teams.size() == 1) {
        level.push_back(b.add_leaf(slot.teams[0]));
      } else if (slot.teams.size() == 2) {
        level.push_back(b.add_game(b.add_leaf(slot.teams[0]), b.add_leaf(slot.teams[1]), 0, true));
      } else {
        throw StructureError("region '" + region.name + "' seed " + std::to_string(seed) +
                             " must hold one team or a play-in pair");
      }
    }
    return level;
  };

  std::vector<int> level;
  for (int r : across) {
    auto leaves = build_region(regions.at(static_cast<std::size_t>(r - 1)));
    level.insert(level.end(), leaves.begin(), leaves.end());
  }
  int round = 1;
  while (level.size() > 1) {
    std::vector<int> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(b.add_game(level[i], level[i + 1], round));
    level = std::move(next);
    ++round;
  }
  b.set_root(level.front());
  b.regions = std::move(regions);
  return b;
}

}  // namespace madness
