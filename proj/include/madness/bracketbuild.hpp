#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "madness/bracket.hpp"
#include "madness/core.hpp"
#include "madness/field.hpp"

namespace madness {

/// A team selected for the national tournament.
struct FieldEntry {
  TeamId team;
  int rank = 0;  // overall rank
  bool automatic = false;
  bool operator==(const FieldEntry&) const = default;
};

/// One (region, seed) cell; two teams when the cell is decided by a play-in game.
struct SeededEntry {
  std::vector<FieldEntry> teams;
  int region = 0;  // 1..4
  int seed = 0;    // 1..16
  bool play_in() const { return teams.size() == 2; }
};

struct SeededField {
  std::vector<SeededEntry> entries;  // S-curve order

  const SeededEntry& at(int region, int seed) const;
  /// Region-format bracket; regions meet 1-4 and 2-3.
  BracketSpec to_bracket(const std::vector<std::string>& region_names = {}) const;
};

/// (region, seed) of the S-curve position `position` (1-based): seeds fill in
/// rank order, odd seed lines left to right and even seed lines right to left.
std::pair<int, int> s_curve_cell(int position);

/// Places a 64-team field, or a 68-team field whose four lowest automatic and
/// four lowest at-large bids meet in play-in games (best against worst in
/// each group). A play-in pair takes the S-curve position of its better team.
SeededField s_curve_place(std::vector<FieldEntry> field);

enum class SelectionRule { strongest, weakest, random };

std::string_view to_string(SelectionRule rule);
SelectionRule parse_selection_rule(std::string_view text);

/// Picks one champion per conference by the rule (decided conferences pass
/// through), then fills the remaining field_size - K places with the
/// highest-ranked non-champions. Sorted by overall rank. The random rule
/// samples each conference independently from its champion distribution and
/// requires a seed.
std::vector<FieldEntry> exemplar_field(SelectionRule rule, const std::vector<ChampionDistribution>& champions,
                                       const std::vector<int>& rank_of, int field_size = 64,
                                       std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace madness
