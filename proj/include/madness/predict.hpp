#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "madness/core.hpp"
#include "madness/ratings.hpp"

namespace madness {

enum class Method { conformal, linear_t, logistic };

inline constexpr Method kAllMethods[] = {Method::conformal, Method::linear_t, Method::logistic};

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

/// A game to predict. `period` w means only data from periods < w is used;
/// 0 means "all training data supplied".
struct MatchQuery {
  TeamId home;
  TeamId away;
  bool neutral_site = false;
  int period = 0;

  /// Throws Error when home == away.
  void validate() const;
  Eigen::VectorXd covariates(int n_teams) const;
};

struct WinProb {
  double p = 0.5;
  Method method = Method::conformal;
};

struct CpdPoint {
  double y_c = 0.0;
  double pi = 0.0;
};

struct CpdCurve {
  std::vector<CpdPoint> points;
  double tau = 0.5;
};

struct MovGrid {
  double lo = -80.0;
  double hi = 80.0;
  double step = 1.0;

  /// Parses "a:b:s".
  static MovGrid parse(std::string_view text);
  std::vector<double> values() const;
};

inline constexpr double kMidTau = 0.5;

/// Conformal predictive distribution for the least-squares model with the
/// signed residual as conformity score.
///
/// For a candidate y_c the augmented data (X; x') , (y; y_c) is refit and
/// every residual R_i(y_c) compared with R_{n+1}(y_c). The refit is done with
/// the rank-one update of the retained (X'X) factor, which is algebraically
/// identical to a fresh least-squares solve:
///   beta(y_c) = beta_hat + A^{-1}x (y_c - x'beta_hat) / (1 + x'A^{-1}x).
/// The original model is never modified, so queries may run concurrently.
class ConformalModel {
 public:
  ConformalModel(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);
  /// Reuses an existing least-squares fit of the same design.
  ConformalModel(const Eigen::MatrixXd& X, const StrengthModel& fit);

  Eigen::Index n() const { return residuals_.size(); }
  Eigen::Index p() const { return beta_.size(); }

  /// pi(y_c, tau) for covariate row x.
  double pi(const Eigen::VectorXd& x, double y_c, double tau = kMidTau) const;
  /// Residuals R_1..R_{n+1} of the augmented fit (last entry is the query).
  Eigen::VectorXd augmented_residuals(const Eigen::VectorXd& x, double y_c) const;
  /// Throws NumericalError if the evaluated curve decreases by more than 1e-12.
  CpdCurve curve(const Eigen::VectorXd& x, const MovGrid& grid, double tau = kMidTau) const;

  /// P(MOV > 0) = 1 - pi(0, 1/2).
  double win_prob(const Eigen::VectorXd& x) const { return 1.0 - pi(x, 0.0, kMidTau); }

 private:
  struct Query {
    Eigen::VectorXd cross;  // X A^{-1} x
    double leverage = 0.0;  // x'A^{-1}x
    double fitted = 0.0;    // x'beta_hat
  };
  Query prepare(const Eigen::VectorXd& x) const;
  double pi_prepared(const Query& q, double y_c, double tau) const;

  Eigen::SparseMatrix<double, Eigen::RowMajor> X_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  Eigen::VectorXd beta_;
  Eigen::VectorXd residuals_;
};

/// Single-shot conformal value: fits on (X, y) and evaluates pi(y_c, tau).
double conformal_pi(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& x, double y_c,
                    double tau = kMidTau);

WinProb conformal_win_prob(const ConformalModel& model, const MatchQuery& query, int n_teams);
CpdCurve cpd_curve(const ConformalModel& model, const MatchQuery& query, int n_teams, const MovGrid& grid = {});

/// 1 - F_t(-yhat / (sigma_hat sqrt(1 + x'(X'X)^{-1}x))) with n - p degrees of freedom.
double linear_t_win_prob(const StrengthModel& model, const Eigen::VectorXd& x);
WinProb linear_t_win_prob(const StrengthModel& model, const MatchQuery& query);

double logistic_win_prob(const LogisticModel& model, const Eigen::VectorXd& x);
WinProb logistic_win_prob(const LogisticModel& model, const MatchQuery& query);

}  // namespace madness
