#include "madness/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "madness/ingest.hpp"

namespace madness {

namespace {

std::string iso_date(int day_offset) {
  using namespace std::chrono;
  const sys_days start = year{2019} / November / 5;
  const year_month_day d{start + days{day_offset}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

std::string conference_name(int k) {
  if (k < 26) return std::string("Conf ") + static_cast<char>('A' + k);
  return "Conf " + std::to_string(k + 1);
}

struct Simulator {
  const SyntheticOptions& opt;
  const Eigen::VectorXd& strength;
  std::mt19937_64& rng;

  // Returns (home points, away points) with a nonzero margin.
  std::pair<int, int> play(TeamId home, TeamId away, bool neutral) {
    std::normal_distribution<double> noise(0.0, opt.noise_sd);
    const double mean = (neutral ? 0.0 : opt.home_advantage) + strength(home.index) - strength(away.index);
    const double draw = mean + noise(rng);
    int mov = static_cast<int>(std::lround(draw));
    if (mov == 0) mov = draw >= 0.0 ? 1 : -1;
    const int base = std::uniform_int_distribution<int>(50, 70)(rng);
    return mov > 0 ? std::pair{base + mov, base} : std::pair{base, base - mov};
  }
};

}  // namespace

SyntheticLeague make_synthetic_league(const SyntheticOptions& opt, League league, const std::string& season) {
  if (opt.conferences < 1) throw Error("need at least one conference");
  const int per = opt.teams_per_conference;
  if (per < 2 || (per & (per - 1)) != 0) throw Error("teams per conference must be a power of two >= 2");
  if (opt.periods < 1 || opt.games_per_period < 1) throw Error("need at least one period and one game per period");

  std::vector<std::pair<std::string, std::string>> rows;
  for (int k = 0; k < opt.conferences; ++k) {
    for (int i = 0; i < per; ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "Team %c%02d", k < 26 ? 'A' + k : 'Z', i + 1);
      rows.emplace_back(k < 26 ? std::string(name) : std::string(name) + "-" + std::to_string(k), conference_name(k));
    }
  }
  SyntheticLeague out;
  out.teams = TeamTable::from_pairs(rows);
  const int n = static_cast<int>(out.teams.size());

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> spread(0.0, opt.strength_sd);
  out.strength.resize(n);
  for (int t = 0; t < n; ++t) out.strength(t) = spread(rng);
  Simulator sim{opt, out.strength, rng};
  std::bernoulli_distribution neutral(opt.neutral_share);
  std::bernoulli_distribution coin(0.5);

  auto record = [&](TeamId home, TeamId away, bool neutral_site, int period, int day, Phase phase) {
    const auto [hp, ap] = sim.play(home, away, neutral_site);
    GameRecord g;
    g.date = iso_date(day);
    g.season = season;
    g.league = league;
    g.period = period;
    g.home = home;
    g.away = away;
    g.home_points = hp;
    g.away_points = ap;
    g.neutral_site = neutral_site;
    g.phase = phase;
    out.games.push_back(g);
    return hp > ap ? home : away;
  };

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int p = 1; p <= opt.periods; ++p) {
    for (int g = 0; g < opt.games_per_period; ++g) {
      const int day = 7 * (p - 1) + 3 * g;
      std::shuffle(order.begin(), order.end(), rng);
      if (p == 1 && g == 0) {
        // A ring through every team keeps the schedule connected.
        for (int i = 0; i < n; ++i) {
          const TeamId a(order[static_cast<std::size_t>(i)]);
          const TeamId b(order[static_cast<std::size_t>((i + 1) % n)]);
          if (n > 2 || i == 0) record(a, b, neutral(rng), p, day, Phase::regular);
        }
        continue;
      }
      for (int i = 0; i + 1 < n; i += 2) {
        TeamId a(order[static_cast<std::size_t>(i)]);
        TeamId b(order[static_cast<std::size_t>(i + 1)]);
        if (coin(rng)) std::swap(a, b);
        record(a, b, neutral(rng), p, day, Phase::regular);
      }
    }
  }

  // Conference tournaments seeded by true strength, the first rounds played.
  const int post_day = 7 * opt.periods + 1;
  for (int k = 0; k < opt.conferences; ++k) {
    auto members = out.teams.members(k);
    std::sort(members.begin(), members.end(),
              [&](TeamId a, TeamId b) { return out.strength(a.index) > out.strength(b.index); });
    BracketSpec b;
    b.conference = out.teams.conferences()[static_cast<std::size_t>(k)].name;
    b.league = std::string(to_string(league));
    b.season = season;
    b.name = b.conference + " tournament";
    std::vector<int> level;
    std::vector<TeamId> alive;
    for (int s : seed_order(per)) {
      const TeamId t = members[static_cast<std::size_t>(s - 1)];
      level.push_back(b.add_leaf(t));
      alive.push_back(t);
    }
    int round = 1;
    while (level.size() > 1) {
      std::vector<int> next;
      std::vector<TeamId> next_alive;
      for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
        next.push_back(b.add_game(level[i], level[i + 1], round));
        if (round <= opt.completed_rounds) {
          const TeamId w = record(alive[i], alive[i + 1], true, opt.periods + 1, post_day + round, Phase::postseason);
          b.completed.push_back(GameResult{w, w == alive[i] ? alive[i + 1] : alive[i]});
          next_alive.push_back(w);
        } else {
          next_alive.push_back(TeamId{});
        }
      }
      level = std::move(next);
      alive = std::move(next_alive);
      ++round;
    }
    b.set_root(level.front());
    out.conf_brackets.push_back(std::move(b));
  }
  return out;
}

void write_season(const SyntheticLeague& league, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "conf_brackets");
  {
    std::ofstream teams(dir / "teams.csv");
    write_teams(teams, league.teams);
    std::ofstream games(dir / "games.csv");
    write_games(games, league.games, league.teams);
    if (!teams || !games) throw Error("cannot write season files under " + dir.string());
  }
  for (const auto& b : league.conf_brackets) {
    std::string slug = b.conference;
    std::replace(slug.begin(), slug.end(), ' ', '_');
    std::ofstream f(dir / "conf_brackets" / (slug + ".json"));
    f << bracket_to_json(b, league.teams).dump(2) << '\n';
    if (!f) throw Error("cannot write bracket for " + b.conference);
  }
}

}  // namespace madness
