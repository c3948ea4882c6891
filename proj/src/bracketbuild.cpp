#include "madness/bracketbuild.hpp"

#include <algorithm>

#include "madness/tourney.hpp"

namespace madness {

namespace {

constexpr int kRegions = 4;

bool by_rank(const FieldEntry& a, const FieldEntry& b) { return a.rank < b.rank; }

}  // namespace

const SeededEntry& SeededField::at(int region, int seed) const {
  for (const auto& e : entries) {
    if (e.region == region && e.seed == seed) return e;
  }
  throw Error("no entry at region " + std::to_string(region) + ", seed " + std::to_string(seed));
}

BracketSpec SeededField::to_bracket(const std::vector<std::string>& region_names) const {
  const int seeds = static_cast<int>(entries.size()) / kRegions;
  std::vector<Region> regions(kRegions);
  for (int r = 0; r < kRegions; ++r) {
    regions[static_cast<std::size_t>(r)].name =
        static_cast<std::size_t>(r) < region_names.size() ? region_names[static_cast<std::size_t>(r)]
                                                           : "Region " + std::to_string(r + 1);
    regions[static_cast<std::size_t>(r)].seeds.resize(static_cast<std::size_t>(seeds));
  }
  for (const auto& e : entries) {
    auto& slot = regions[static_cast<std::size_t>(e.region - 1)].seeds[static_cast<std::size_t>(e.seed - 1)];
    for (const auto& t : e.teams) slot.teams.push_back(t.team);
  }
  return bracket_from_regions(std::move(regions));
}

std::pair<int, int> s_curve_cell(int position) {
  if (position < 1) throw Error("S-curve positions start at 1");
  const int seed = (position - 1) / kRegions + 1;
  const int across = (position - 1) % kRegions;
  const int region = seed % 2 == 1 ? across + 1 : kRegions - across;
  return {region, seed};
}

SeededField s_curve_place(std::vector<FieldEntry> field) {
  if (field.size() != 64 && field.size() != 68) {
    throw Error("S-curve placement needs 64 or 68 teams, got " + std::to_string(field.size()));
  }
  std::sort(field.begin(), field.end(), by_rank);
  for (std::size_t i = 1; i < field.size(); ++i) {
    if (field[i].rank == field[i - 1].rank) throw Error("two field entries share overall rank " + std::to_string(field[i].rank));
    if (field[i].team == field[i - 1].team) throw Error("a team appears twice in the field");
  }

  std::vector<std::vector<FieldEntry>> groups;
  if (field.size() == 64) {
    for (const auto& f : field) groups.push_back({f});
  } else {
    std::vector<std::size_t> autos;
    std::vector<std::size_t> at_large;
    for (std::size_t i = 0; i < field.size(); ++i) (field[i].automatic ? autos : at_large).push_back(i);
    if (autos.size() < 4 || at_large.size() < 4) throw Error("a 68-team field needs at least four automatic and four at-large bids");
    std::vector<bool> paired(field.size(), false);
    auto pair_lowest = [&](const std::vector<std::size_t>& pool) {
      const std::size_t n = pool.size();
      const std::size_t a = pool[n - 4], b = pool[n - 3], c = pool[n - 2], d = pool[n - 1];
      groups.push_back({field[a], field[d]});
      groups.push_back({field[b], field[c]});
      for (auto i : {a, b, c, d}) paired[i] = true;
    };
    pair_lowest(autos);
    pair_lowest(at_large);
    for (std::size_t i = 0; i < field.size(); ++i) {
      if (!paired[i]) groups.push_back({field[i]});
    }
    std::sort(groups.begin(), groups.end(), [](const auto& x, const auto& y) { return x.front().rank < y.front().rank; });
  }

  SeededField out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto [region, seed] = s_curve_cell(static_cast<int>(i) + 1);
    out.entries.push_back(SeededEntry{groups[i], region, seed});
  }
  return out;
}

std::string_view to_string(SelectionRule rule) {
  switch (rule) {
    case SelectionRule::strongest: return "strongest";
    case SelectionRule::weakest: return "weakest";
    case SelectionRule::random: return "random";
  }
  return "?";
}

SelectionRule parse_selection_rule(std::string_view text) {
  if (text == "strongest") return SelectionRule::strongest;
  if (text == "weakest") return SelectionRule::weakest;
  if (text == "random") return SelectionRule::random;
  throw Error("unknown selection rule '" + std::string(text) + "' (expected strongest, weakest or random)");
}

std::vector<FieldEntry> exemplar_field(SelectionRule rule, const std::vector<ChampionDistribution>& champions,
                                       const std::vector<int>& rank_of, int field_size,
                                       std::optional<std::uint64_t> seed) {
  if (rule == SelectionRule::random && !seed) throw Error("the random rule needs an explicit seed");
  const auto K = static_cast<int>(champions.size());
  if (field_size < K) throw Error("field size is smaller than the number of conferences");
  auto rank = [&](TeamId t) { return rank_of.at(static_cast<std::size_t>(t.index)); };

  std::vector<FieldEntry> field;
  std::vector<bool> taken(rank_of.size(), false);
  for (std::size_t k = 0; k < champions.size(); ++k) {
    const auto& c = champions[k];
    std::vector<std::size_t> alive;
    for (std::size_t i = 0; i < c.teams.size(); ++i) {
      if (c.prob(static_cast<Eigen::Index>(i)) > 0.0) alive.push_back(i);
    }
    if (alive.empty()) throw Error("a conference has no team left that can win it");
    std::size_t pick = alive.front();
    if (rule == SelectionRule::random) {
      const double u = counter_uniform(*seed, k);
      double cum = 0.0;
      pick = alive.back();
      for (std::size_t i : alive) {
        cum += c.prob(static_cast<Eigen::Index>(i));
        if (u < cum) {
          pick = i;
          break;
        }
      }
    } else {
      for (std::size_t i : alive) {
        const int a = rank(c.teams[i]);
        const int b = rank(c.teams[pick]);
        if (rule == SelectionRule::strongest ? a < b : a > b) pick = i;
      }
    }
    const TeamId t = c.teams[pick];
    taken[static_cast<std::size_t>(t.index)] = true;
    field.push_back(FieldEntry{t, rank(t), true});
  }

  std::vector<std::size_t> order(rank_of.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rank_of[a] < rank_of[b]; });
  for (std::size_t i : order) {
    if (static_cast<int>(field.size()) == field_size) break;
    if (!taken[i]) field.push_back(FieldEntry{TeamId(static_cast<int>(i)), rank_of[i], false});
  }
  if (static_cast<int>(field.size()) < field_size) throw Error("not enough teams to fill the field");
  std::sort(field.begin(), field.end(), by_rank);
  return field;
}

}  // namespace madness
