#include <doctest.h>

#include <random>

#include "madness/evalcal.hpp"

using namespace madness;

TEST_SUITE("evalcal") {

TEST_CASE("a constant one-half forecast scores ln 2") {
  const std::vector<double> p(9, 0.5);
  const std::vector<bool> y{true, false, true, true, false, false, true, false, true};
  CHECK(mean_log_loss(p, y) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("among constant forecasts the base rate minimizes log loss") {
  std::vector<bool> y(100, false);
  for (int i = 0; i < 30; ++i) y[static_cast<std::size_t>(i)] = true;
  const double best = mean_log_loss(std::vector<double>(100, 0.3), y);
  for (double c = 0.05; c < 1.0; c += 0.05) {
    if (std::abs(c - 0.3) < 1e-9) continue;
    CHECK(mean_log_loss(std::vector<double>(100, c), y) > best);
  }
}

TEST_CASE("extreme forecasts are clamped and counted") {
  long clamped = 0;
  const double loss = mean_log_loss({0.0, 1.0, 0.5}, {true, true, false}, &clamped);
  CHECK(clamped == 2);
  CHECK(std::isfinite(loss));
  CHECK(loss == doctest::Approx((-std::log(kClampLow) - std::log(kClampHigh) + std::log(2.0)) / 3).epsilon(1e-12));
  CHECK_THROWS(mean_log_loss({}, {}));
  CHECK_THROWS(mean_log_loss({0.5}, {true, false}));
}

TEST_CASE("forty bins, the last one closed, empty bins without a frequency") {
  const auto r = calibrate({0.0, 0.024999, 0.025, 0.5, 1.0, 0.99}, {true, false, true, true, true, false}, Method::logistic);
  REQUIRE(r.bins.size() == 40);
  CHECK(r.bins[0].count == 2);
  CHECK(r.bins[1].count == 1);
  CHECK(r.bins[20].count == 1);
  CHECK(r.bins[39].count == 2);
  CHECK(r.bins[39].upper == 1.0);
  CHECK(*r.bins[39].frequency == doctest::Approx(0.5));
  CHECK(r.bins[0].mean_predicted == doctest::Approx(0.0124995));
  CHECK_FALSE(r.bins[5].frequency.has_value());
  CHECK(r.bins[5].count == 0);
  CHECK(r.bins[5].lower == doctest::Approx(0.125));
  long total = 0;
  for (const auto& b : r.bins) total += b.count;
  CHECK(total == 6);
  CHECK_THROWS(calibrate({1.2}, {true}, Method::logistic));
}

TEST_CASE("a calibrated forecaster lies near the diagonal") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p;
  std::vector<bool> y;
  for (int i = 0; i < 100000; ++i) {
    p.push_back(u(rng));
    y.push_back(u(rng) < p.back());
  }
  const auto r = calibrate(p, y, Method::conformal);
  for (const auto& b : r.bins) {
    REQUIRE(b.frequency.has_value());
    const double se = std::sqrt(b.mean_predicted * (1 - b.mean_predicted) / static_cast<double>(b.count));
    CHECK(std::abs(*b.frequency - b.mean_predicted) < 4 * se + 1e-3);
  }
}

TEST_CASE("relative losses are scale free and anchored at one") {
  const auto a = relative_losses({0.6, 0.5, 0.55});
  CHECK(a[1] == 1.0);
  CHECK(a[0] == doctest::Approx(1.2));
  const auto b = relative_losses({6.0, 5.0, 5.5});
  for (std::size_t i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-15));
  CHECK(relative_losses({}).empty());
}

TEST_CASE("evaluation groups by league and season with a pooled row per league") {
  std::vector<GamePrediction> games;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    GamePrediction g;
    g.league = i % 3 == 0 ? "men" : "women";
    g.season = i % 2 == 0 ? "2018-19" : "2019-20";
    g.home = TeamId(i);
    g.away = TeamId(i + 1);
    g.home_won = u(rng) < 0.6;
    g.probs = {{u(rng), Method::conformal}, {0.6, Method::linear_t}, {0.5, Method::logistic}};
    games.push_back(g);
  }
  const std::vector<Method> methods{Method::conformal, Method::linear_t, Method::logistic};
  const auto ev = evaluate(games, methods);
  CHECK(ev.calibration.size() == 3);
  // Two leagues x (two seasons + pooled) x three methods.
  CHECK(ev.losses.rows.size() == 18);
  long pooled_women = 0;
  for (const auto& row : ev.losses.rows) {
    CHECK(row.relative >= 1.0);
    if (row.league == "women" && row.season == "pooled" && row.method == Method::logistic) {
      pooled_women = row.games;
      CHECK(row.loss == doctest::Approx(std::log(2.0)));
    }
  }
  CHECK(pooled_women == 20);

  games[4].probs.pop_back();
  CHECK_THROWS(evaluate(games, methods));
}

}  // TEST_SUITE
