#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace madness {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV/JSON) or a row that violates a record invariant.
/// Carries every offending location so a whole file can be reported at once.
class IngestError : public Error {
 public:
  enum class Kind { malformed, tied_score, same_team, unknown_team, period_order, header };

  struct Issue {
    std::size_t line = 0;
    Kind kind = Kind::malformed;
    std::string message;
  };

  explicit IngestError(std::vector<Issue> issues);

  const std::vector<Issue>& issues() const { return issues_; }
  bool has(Kind kind) const;

 private:
  std::vector<Issue> issues_;
};

/// Bracket tree shape problems (unbalanced without byes, misplaced play-ins).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Completed results that do not fit the bracket they refer to.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Design matrix without full column rank (disconnected schedule, no home games).
class RankDeficientError : public Error {
 public:
  using Error::Error;
};

/// Internal numerical invariant broken (normalization, monotonicity).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Identifiers and records
// ---------------------------------------------------------------------------

/// Dense index into a TeamTable (alphabetical order, 0-based).
struct TeamId {
  int index = -1;

  constexpr TeamId() = default;
  constexpr explicit TeamId(int i) : index(i) {}
  constexpr bool valid() const { return index >= 0; }
  constexpr auto operator<=>(const TeamId&) const = default;
};

enum class League { women, men };
enum class Phase { regular, postseason };

std::string_view to_string(League league);
League parse_league(std::string_view text);

struct GameRecord {
  std::string date;  // ISO yyyy-mm-dd
  std::string season;
  League league = League::women;
  int period = 1;
  TeamId home;
  TeamId away;
  int home_points = 0;
  int away_points = 0;
  bool neutral_site = false;
  Phase phase = Phase::regular;

  /// Margin of victory for the first-listed ("home") team.
  int mov() const { return home_points - away_points; }
  bool home_won() const { return home_points > away_points; }

  bool operator==(const GameRecord&) const = default;
};

struct Team {
  std::string name;
  int conference = -1;
};

struct Conference {
  std::string name;
  int rounds = 0;  // J_k, 0 when unknown
};

/// Teams sorted alphabetically by name; ids are positions in that order.
class TeamTable {
 public:
  TeamTable() = default;

  /// Builds the table from (team, conference) pairs in any order.
  static TeamTable from_pairs(std::vector<std::pair<std::string, std::string>> rows);

  std::size_t size() const { return teams_.size(); }
  const Team& operator[](TeamId id) const { return teams_.at(static_cast<std::size_t>(id.index)); }
  const std::string& name(TeamId id) const { return (*this)[id].name; }
  int conference_of(TeamId id) const { return (*this)[id].conference; }

  std::optional<TeamId> find(std::string_view name) const;
  /// Throws Error naming the team when absent.
  TeamId id(std::string_view name) const;

  const std::vector<Team>& teams() const { return teams_; }
  const std::vector<Conference>& conferences() const { return conferences_; }
  std::optional<int> find_conference(std::string_view name) const;
  std::vector<TeamId> members(int conference) const;
  void set_rounds(int conference, int rounds) { conferences_.at(static_cast<std::size_t>(conference)).rounds = rounds; }

  /// Alphabetically last team; pinned to strength 0 in fitted models.
  TeamId baseline() const { return TeamId(static_cast<int>(teams_.size()) - 1); }

 private:
  std::vector<Team> teams_;
  std::vector<Conference> conferences_;
};

}  // namespace madness

template <>
struct std::hash<madness::TeamId> {
  std::size_t operator()(madness::TeamId id) const noexcept { return std::hash<int>{}(id.index); }
};
