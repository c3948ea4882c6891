#include "madness/core.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace madness {

namespace {

std::string describe(const std::vector<IngestError::Issue>& issues) {
  std::ostringstream os;
  os << issues.size() << " rejected row(s)";
  for (const auto& issue : issues) {
    os << "\n  line " << issue.line << ": " << issue.message;
  }
  return os.str();
}

}  // namespace

IngestError::IngestError(std::vector<Issue> issues) : Error(describe(issues)), issues_(std::move(issues)) {}

bool IngestError::has(Kind kind) const {
  return std::any_of(issues_.begin(), issues_.end(), [kind](const Issue& i) { return i.kind == kind; });
}

std::string_view to_string(League league) { return league == League::women ? "women" : "men"; }

League parse_league(std::string_view text) {
  if (text == "women" || text == "w" || text == "womens") return League::women;
  if (text == "men" || text == "m" || text == "mens") return League::men;
  throw Error("unknown league '" + std::string(text) + "' (expected women or men)");
}

TeamTable TeamTable::from_pairs(std::vector<std::pair<std::string, std::string>> rows) {
  std::sort(rows.begin(), rows.end());
  TeamTable table;
  std::map<std::string, int> conf_index;
  std::vector<std::string> conf_names;
  for (const auto& [team, conf] : rows) conf_index.emplace(conf, 0);
  for (auto& [name, idx] : conf_index) {
    idx = static_cast<int>(conf_names.size());
    conf_names.push_back(name);
  }
  for (const auto& name : conf_names) table.conferences_.push_back({name, 0});

  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].first == rows[i - 1].first) {
      throw Error("team '" + rows[i].first + "' listed more than once (every team belongs to exactly one conference)");
    }
    table.teams_.push_back({rows[i].first, conf_index.at(rows[i].second)});
  }
  return table;
}

std::optional<TeamId> TeamTable::find(std::string_view name) const {
  auto it = std::lower_bound(teams_.begin(), teams_.end(), name,
                             [](const Team& t, std::string_view n) { return t.name < n; });
  if (it == teams_.end() || it->name != name) return std::nullopt;
  return TeamId(static_cast<int>(it - teams_.begin()));
}

TeamId TeamTable::id(std::string_view name) const {
  if (auto found = find(name)) return *found;
  throw Error("unknown team '" + std::string(name) + "'");
}

std::optional<int> TeamTable::find_conference(std::string_view name) const {
  for (std::size_t k = 0; k < conferences_.size(); ++k) {
    if (conferences_[k].name == name) return static_cast<int>(k);
  }
  return std::nullopt;
}

std::vector<TeamId> TeamTable::members(int conference) const {
  std::vector<TeamId> out;
  for (std::size_t i = 0; i < teams_.size(); ++i) {
    if (teams_[i].conference == conference) out.emplace_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace madness
