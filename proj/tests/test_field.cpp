#include <doctest.h>

#include <numeric>
#include <random>

#include "madness/field.hpp"
#include "oracles.hpp"

using namespace madness;

namespace {

/// K conferences of `per` teams each: names "c<k>t<i>", ranks shuffled.
struct Toy {
  TeamTable teams;
  std::vector<int> rank_of;
  std::vector<ChampionDistribution> champs;
};

Toy random_toy(int K, int per, std::mt19937_64& rng) {
  Toy toy;
  std::vector<std::pair<std::string, std::string>> rows;
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < per; ++i) rows.emplace_back("c" + std::to_string(k) + "t" + std::to_string(i), "c" + std::to_string(k));
  }
  toy.teams = TeamTable::from_pairs(rows);
  toy.rank_of.resize(toy.teams.size());
  std::iota(toy.rank_of.begin(), toy.rank_of.end(), 1);
  std::shuffle(toy.rank_of.begin(), toy.rank_of.end(), rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < K; ++k) {
    ChampionDistribution c;
    c.conference = k;
    for (TeamId t : toy.teams.members(k)) {
      if (u(rng) < 0.6) c.teams.push_back(t);
    }
    if (c.teams.empty()) c.teams.push_back(toy.teams.members(k).front());
    c.prob.resize(static_cast<Eigen::Index>(c.teams.size()));
    for (Eigen::Index i = 0; i < c.prob.size(); ++i) c.prob(i) = u(rng) < 0.15 ? 0.0 : u(rng);
    if (c.prob.sum() == 0.0) c.prob(0) = 1.0;
    c.prob /= c.prob.sum();
    c.decided = c.teams.size() == 1;
    toy.champs.push_back(std::move(c));
  }
  return toy;
}

ChampionDistribution point_mass(int conference, TeamId team) {
  return {conference, {team}, Eigen::VectorXd::Ones(1), true};
}

}  // namespace

TEST_SUITE("field") {

TEST_CASE("Poisson-binomial small cases") {
  CHECK(PoissonBinomial(Eigen::VectorXd::Zero(5)).cdf(0) == 1.0);
  const PoissonBinomial half((Eigen::VectorXd(2) << 0.5, 0.5).finished());
  CHECK(half.cdf(0) == doctest::Approx(0.25));
  CHECK(half.cdf(1) == doctest::Approx(0.75));
  CHECK(half.cdf(2) == 1.0);
  CHECK(half.cdf(-1) == 0.0);
  CHECK(PoissonBinomial(Eigen::VectorXd::Ones(4)).cdf(3) == 0.0);
  CHECK(PoissonBinomial().cdf(0) == 1.0);
  CHECK_THROWS(PoissonBinomial((Eigen::VectorXd(1) << 1.5).finished()));
}

TEST_CASE("Poisson-binomial agrees with enumeration") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 60; ++rep) {
    const int K = std::uniform_int_distribution<int>(0, 12)(rng);
    Eigen::VectorXd ps(K);
    for (int k = 0; k < K; ++k) ps(k) = u(rng) < 0.1 ? std::round(u(rng)) : u(rng);
    const PoissonBinomial d(ps);
    const Eigen::VectorXd pmf = d.pmf();
    CHECK(pmf.sum() == doctest::Approx(1.0).epsilon(1e-13));
    double running = 0;
    for (int l = -1; l <= K + 1; ++l) {
      CHECK(std::abs(d.cdf(l) - oracle::pb_cdf_enumerate(ps, l)) < 1e-12);
      if (l >= 0 && l <= K) {
        running += pmf(l);
        CHECK(running == doctest::Approx(d.cdf(l)).epsilon(1e-12));
      }
    }
    if (K > 0) {
      const auto z = d.with(0, 0.0);
      CHECK(z.probabilities()(0) == 0.0);
      CHECK(z.cdf(K - 1) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("field probabilities and rank distributions match brute-force selection") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 40; ++rep) {
    const int K = std::uniform_int_distribution<int>(2, 5)(rng);
    const int per = std::uniform_int_distribution<int>(2, 4)(rng);
    const auto toy = random_toy(K, per, rng);
    const int T = K * per;
    const int field = std::uniform_int_distribution<int>(K, T - 1)(rng);
    const auto brute = oracle::enumerate_field(toy.champs, toy.rank_of, field);
    const auto report = field_report(toy.champs, toy.rank_of, toy.teams, field);
    double total = 0;
    for (const auto& row : report.rows) {
      const auto i = static_cast<std::size_t>(row.team.index);
      const auto o = conference_outcome(row.team, toy.champs, toy.rank_of, toy.teams);
      CHECK(row.probability == doctest::Approx(brute.p_field[i]).epsilon(1e-12));
      total += row.probability;
      const Eigen::VectorXd mass = rank_distribution(o, row.rank, field);
      REQUIRE(mass.size() == field);
      for (int r = 0; r < field; ++r) CHECK(std::abs(mass(r) - brute.rank_mass[i][static_cast<std::size_t>(r)]) < 1e-12);
      CHECK(mass.sum() == doctest::Approx(make_field_prob(o, row.threshold)).epsilon(1e-12));
      for (int r = row.rank; r < field; ++r) CHECK(mass(r) == 0.0);  // never below the team's own rank

      switch (row.situation) {
        case 1: CHECK(brute.p_field[i] == doctest::Approx(1.0).epsilon(1e-12)); break;
        case 4: CHECK(brute.p_field[i] == doctest::Approx(o.q_own).epsilon(1e-12)); break;
        case 5: CHECK(brute.p_field[i] == doctest::Approx(0.0).epsilon(1e-12)); break;
        case 3: CHECK(o.q_own == 0.0); break;
        case 2: CHECK(o.q_own > 0.0); break;
        default: FAIL("unknown situation");
      }
    }
    CHECK(total == doctest::Approx(static_cast<double>(field)).epsilon(1e-12));
  }
}

TEST_CASE("situations on a hand-built three-conference league") {
  // Ranks by level: a1 b1 c1 a2 b2 c2 a3 b3 c3; one at-large place in a field of four.
  const auto teams = TeamTable::from_pairs({{"a1", "A"}, {"a2", "A"}, {"a3", "A"}, {"b1", "B"}, {"b2", "B"},
                                            {"b3", "B"}, {"c1", "C"}, {"c2", "C"}, {"c3", "C"}});
  const std::vector<int> rank_of{1, 4, 7, 2, 5, 8, 3, 6, 9};
  auto id = [&](const char* s) { return teams.id(s); };
  std::vector<ChampionDistribution> champs{
      {0, {id("a2"), id("a3")}, (Eigen::VectorXd(2) << 0.5, 0.5).finished(), false},
      point_mass(1, id("b2")),
      {2, {id("c1"), id("c3")}, (Eigen::VectorXd(2) << 0.4, 0.6).finished(), false}};
  const auto report = field_report(champs, rank_of, teams, 4);
  auto row = [&](const char* s) {
    for (const auto& r : report.rows)
      if (r.team == id(s)) return r;
    FAIL("missing row");
    return FieldRow{};
  };
  CHECK(row("a1").situation == 1);
  CHECK(row("a1").probability == 1.0);
  CHECK(row("b1").situation == 5);  // every champion sits below it, the one at-large place goes to a1
  CHECK(row("b1").probability == 0.0);
  CHECK(row("c1").situation == 4);
  CHECK(row("c1").probability == doctest::Approx(0.4));
  CHECK(row("a2").situation == 4);
  CHECK(row("a2").probability == doctest::Approx(0.5));
  CHECK(row("b2").situation == 1);
  CHECK(row("b2").probability == 1.0);
  CHECK(row("c2").situation == 5);
  double total = 0;
  for (const auto& r : report.rows) total += r.probability;
  CHECK(total == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("situation rules on direct conference outcomes") {
  ConferenceOutcome o;
  o.p_low = (Eigen::VectorXd(3) << 0.5, 0.3, 0.2).finished();
  o.own_conf = 0;
  o.q_own = 0.5;  // the own conference goes lower exactly whenever the team loses
  CHECK(classify_situation(o, 1) == 2);
  CHECK(classify_situation(o, 3) == 1);
  CHECK(classify_situation(o, 0) == 4);
  o.q_own = 0.0;
  CHECK(classify_situation(o, 1) == 3);
  CHECK(classify_situation(o, -1) == 5);
  o.q_own = 1.0;
  o.p_low(0) = 0.0;
  CHECK(classify_situation(o, -5) == 1);
  CHECK(make_field_prob(o, -5) == 1.0);
}

TEST_CASE("the top-ranked team is always in at rank one") {
  std::mt19937_64 rng(4);
  const auto toy = random_toy(4, 3, rng);
  const auto top = static_cast<int>(std::find(toy.rank_of.begin(), toy.rank_of.end(), 1) - toy.rank_of.begin());
  const auto o = conference_outcome(TeamId(top), toy.champs, toy.rank_of, toy.teams);
  const Eigen::VectorXd mass = rank_distribution(o, 1, 6);
  CHECK(mass(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mass.tail(5).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a low-ranked certain champion is placed after the higher champions") {
  // 32 decided conferences of two teams; conference k's champion has rank 2k+1,
  // except conference 20 whose champion is ranked 64 (below every other team).
  std::vector<std::pair<std::string, std::string>> rows;
  for (int k = 0; k < 32; ++k) {
    char a[8], b[8], c[8];
    std::snprintf(a, sizeof a, "t%02da", k);
    std::snprintf(b, sizeof b, "t%02db", k);
    std::snprintf(c, sizeof c, "k%02d", k);
    rows.emplace_back(a, c);
    rows.emplace_back(b, c);
  }
  const auto teams = TeamTable::from_pairs(rows);
  std::vector<int> rank_of(64);
  std::vector<ChampionDistribution> champs;
  int next = 1;
  for (int k = 0; k < 32; ++k) {
    const auto m = teams.members(k);
    if (k == 20) {
      rank_of[static_cast<std::size_t>(m[1].index)] = 64;
      rank_of[static_cast<std::size_t>(m[0].index)] = 63;
      champs.push_back(point_mass(k, m[1]));
    } else {
      rank_of[static_cast<std::size_t>(m[0].index)] = next++;
      rank_of[static_cast<std::size_t>(m[1].index)] = next++;
      champs.push_back(point_mass(k, m[0]));
    }
  }
  const TeamId low = teams.members(20)[1];
  const auto o = conference_outcome(low, champs, rank_of, teams);
  CHECK(o.q_own == 1.0);
  const Eigen::VectorXd mass = rank_distribution(o, 64, 64);
  // No champion ranks below it, so it is the 64th team: 33 + 31 higher champions.
  CHECK(mass(63) == doctest::Approx(1.0));
  CHECK(mass.sum() == doctest::Approx(1.0));
  const auto report = field_report(champs, rank_of, teams, 64);
  for (const auto& r : report.rows) CHECK(r.probability == 1.0);
  CHECK(report.rows.back().situation == 1);
}

TEST_CASE("a uniform four-team conference gives each team a quarter") {
  const auto teams = TeamTable::from_pairs({{"w", "X"}, {"x", "X"}, {"y", "X"}, {"z", "X"}});
  BracketSpec b;
  b.conference = "X";
  const int l = b.add_game(b.add_leaf(TeamId(0)), b.add_leaf(TeamId(3)), 1);
  const int r = b.add_game(b.add_leaf(TeamId(1)), b.add_leaf(TeamId(2)), 1);
  b.set_root(b.add_game(l, r, 2));
  const auto champs = conference_champions({b}, [](const BracketSpec& br) { return PairwiseMatrix::constant(br.teams()); }, teams);
  REQUIRE(champs.size() == 1);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(champs[0].prob(i) == doctest::Approx(0.25));
  const auto o = conference_outcome(TeamId(2), champs, {1, 2, 3, 4}, teams);
  CHECK(o.q_own == doctest::Approx(0.25));
  CHECK(o.p_low(0) == doctest::Approx(0.25));
  CHECK(o.p_high(0) == doctest::Approx(0.75));
}

TEST_CASE("conference brackets must cover each conference once") {
  const auto teams = TeamTable::from_pairs({{"a", "X"}, {"b", "X"}, {"c", "Y"}});
  auto probs = [](const BracketSpec& br) { return PairwiseMatrix::constant(br.teams()); };
  BracketSpec x;
  x.conference = "X";
  x.set_root(x.add_game(x.add_leaf(TeamId(0)), x.add_leaf(TeamId(1)), 1));
  BracketSpec y;
  y.conference = "Y";
  y.champion = TeamId(2);
  CHECK_NOTHROW(conference_champions({x, y}, probs, teams));
  CHECK_THROWS_AS(conference_champions({x}, probs, teams), ConsistencyError);
  CHECK_THROWS_AS(conference_champions({x, y, y}, probs, teams), ConsistencyError);
  BracketSpec z = y;
  z.conference = "Z";
  CHECK_THROWS_AS(conference_champions({x, y, z}, probs, teams), ConsistencyError);
  BracketSpec wrong = y;
  wrong.champion = TeamId(0);
  CHECK_THROWS_AS(conference_champions({x, wrong}, probs, teams), ConsistencyError);
}

}  // TEST_SUITE
