#include "madness/evalcal.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace madness {

CalibrationReport calibrate(const std::vector<double>& predicted, const std::vector<bool>& outcome, Method method,
                            double width) {
  if (predicted.size() != outcome.size()) throw Error("predictions and outcomes differ in length");
  if (!(width > 0.0 && width <= 1.0)) throw Error("bin width must lie in (0, 1]");
  const int n_bins = static_cast<int>(std::ceil(1.0 / width - 1e-9));
  CalibrationReport report;
  report.method = method;
  report.bins.resize(static_cast<std::size_t>(n_bins));
  std::vector<double> sum_p(report.bins.size(), 0.0);
  std::vector<long> wins(report.bins.size(), 0);
  for (int b = 0; b < n_bins; ++b) {
    report.bins[static_cast<std::size_t>(b)].lower = b * width;
    report.bins[static_cast<std::size_t>(b)].upper = std::min(1.0, (b + 1) * width);
  }
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double p = predicted[i];
    if (!(p >= 0.0 && p <= 1.0)) throw Error("prediction outside [0, 1]");
    const auto b = static_cast<std::size_t>(std::min(n_bins - 1, static_cast<int>(std::floor(p / width))));
    report.bins[b].count += 1;
    sum_p[b] += p;
    wins[b] += outcome[i] ? 1 : 0;
  }
  for (std::size_t b = 0; b < report.bins.size(); ++b) {
    auto& bin = report.bins[b];
    if (bin.count == 0) continue;
    bin.mean_predicted = sum_p[b] / static_cast<double>(bin.count);
    bin.frequency = static_cast<double>(wins[b]) / static_cast<double>(bin.count);
  }
  return report;
}

double mean_log_loss(const std::vector<double>& predicted, const std::vector<bool>& outcome, long* clamped) {
  if (predicted.size() != outcome.size()) throw Error("predictions and outcomes differ in length");
  if (predicted.empty()) throw Error("no games to score");
  double total = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double p = std::clamp(predicted[i], kClampLow, kClampHigh);
    if (clamped && p != predicted[i]) ++*clamped;
    total -= outcome[i] ? std::log(p) : std::log1p(-p);
  }
  return total / static_cast<double>(predicted.size());
}

std::vector<double> relative_losses(const std::vector<double>& losses) {
  if (losses.empty()) return {};
  const double best = *std::min_element(losses.begin(), losses.end());
  std::vector<double> out;
  for (double l : losses) out.push_back(best > 0.0 ? l / best : 1.0);
  return out;
}

Evaluation evaluate(const std::vector<GamePrediction>& games, const std::vector<Method>& methods) {
  if (methods.empty()) throw Error("no methods to evaluate");
  auto prob_of = [&](const GamePrediction& g, Method m) {
    for (const auto& w : g.probs) {
      if (w.method == m) return w.p;
    }
    throw Error("game " + std::to_string(g.home.index) + " vs " + std::to_string(g.away.index) + " in " + g.league +
                " " + g.season + " has no " + std::string(to_string(m)) + " prediction");
  };

  Evaluation ev;
  std::vector<bool> outcome;
  for (const auto& g : games) outcome.push_back(g.home_won);
  for (Method m : methods) {
    std::vector<double> p;
    for (const auto& g : games) p.push_back(prob_of(g, m));
    ev.calibration.push_back(calibrate(p, outcome, m));
  }

  // Groups keyed by (league, season) plus a game-level pool per league.
  std::map<std::pair<std::string, std::string>, std::vector<const GamePrediction*>> groups;
  for (const auto& g : games) {
    groups[{g.league, g.season}].push_back(&g);
    groups[{g.league, "pooled"}].push_back(&g);
  }
  for (const auto& [key, members] : groups) {
    std::vector<bool> won;
    for (const auto* g : members) won.push_back(g->home_won);
    std::vector<double> losses;
    for (Method m : methods) {
      std::vector<double> p;
      for (const auto* g : members) p.push_back(prob_of(*g, m));
      long clamped = 0;
      losses.push_back(mean_log_loss(p, won, &clamped));
      if (key.second != "pooled") ev.losses.clamped += clamped;
    }
    const auto rel = relative_losses(losses);
    for (std::size_t i = 0; i < methods.size(); ++i) {
      ev.losses.rows.push_back(
          LossRow{key.first, key.second, methods[i], static_cast<long>(members.size()), losses[i], rel[i]});
    }
  }
  return ev;
}

}  // namespace madness
