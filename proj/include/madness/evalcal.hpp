#pragma once

#include <optional>
#include <string>
#include <vector>

#include "madness/core.hpp"
#include "madness/predict.hpp"

namespace madness {

/// One evaluated game: the home-win outcome and each method's P(home wins).
struct GamePrediction {
  std::string league;
  std::string season;
  TeamId home;
  TeamId away;
  bool home_won = false;
  std::vector<WinProb> probs;  // one per method
};

struct CalibrationBin {
  double lower = 0.0;
  double upper = 0.0;
  long count = 0;
  double mean_predicted = 0.0;          // 0 for empty bins
  std::optional<double> frequency;      // empirical home-win rate; empty when count == 0
};

struct CalibrationReport {
  Method method = Method::conformal;
  std::vector<CalibrationBin> bins;
};

inline constexpr double kBinWidth = 0.025;
inline constexpr double kClampLow = 1e-6;
inline constexpr double kClampHigh = 1.0 - 1e-6;

/// Reliability bins of width `width` covering [0, 1]; the last bin is closed.
CalibrationReport calibrate(const std::vector<double>& predicted, const std::vector<bool>& outcome, Method method,
                            double width = kBinWidth);

/// Mean negative log-likelihood after clamping to [1e-6, 1 - 1e-6].
double mean_log_loss(const std::vector<double>& predicted, const std::vector<bool>& outcome, long* clamped = nullptr);

struct LossRow {
  std::string league;
  std::string season;  // "pooled" for the per-league game-level pool
  Method method = Method::conformal;
  long games = 0;
  double loss = 0.0;
  double relative = 1.0;
};

struct LossReport {
  std::vector<LossRow> rows;
  long clamped = 0;
};

/// own loss / smallest loss in the group.
std::vector<double> relative_losses(const std::vector<double>& losses);

struct Evaluation {
  std::vector<CalibrationReport> calibration;  // one per method, all games
  LossReport losses;
};

/// Throws Error when a game lacks a prediction for one of `methods`.
Evaluation evaluate(const std::vector<GamePrediction>& games, const std::vector<Method>& methods);

}  // namespace madness
