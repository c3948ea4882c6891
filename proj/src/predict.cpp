#include "madness/predict.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "madness/numeric.hpp"

namespace madness {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::conformal:
      return "conformal";
    case Method::linear_t:
      return "linear";
    case Method::logistic:
      return "logistic";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  if (text == "conformal") return Method::conformal;
  if (text == "linear" || text == "linear_t") return Method::linear_t;
  if (text == "logistic") return Method::logistic;
  throw Error("unknown method '" + std::string(text) + "' (expected conformal, linear or logistic)");
}

void MatchQuery::validate() const {
  if (!home.valid() || !away.valid()) throw Error("query teams are not set");
  if (home == away) throw Error("a team cannot play itself");
}

Eigen::VectorXd MatchQuery::covariates(int n_teams) const {
  validate();
  return design_row(home, away, neutral_site, n_teams);
}

MovGrid MovGrid::parse(std::string_view text) {
  MovGrid g;
  double parts[3];
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const auto end = i < 2 ? text.find(':', start) : text.size();
    if (end == std::string_view::npos) throw Error("grid must look like lo:hi:step");
    const std::string piece(text.substr(start, end - start));
    try {
      std::size_t used = 0;
      parts[i] = std::stod(piece, &used);
      if (used != piece.size()) throw Error("");
    } catch (...) {
      throw Error("grid must look like lo:hi:step, got '" + std::string(text) + "'");
    }
    start = end + 1;
  }
  g.lo = parts[0];
  g.hi = parts[1];
  g.step = parts[2];
  if (!(g.step > 0) || g.hi < g.lo) throw Error("grid needs lo <= hi and step > 0");
  return g;
}

std::vector<double> MovGrid::values() const {
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

// ---------------------------------------------------------------------------
// Conformal
// ---------------------------------------------------------------------------

ConformalModel::ConformalModel(const Eigen::MatrixXd& X, const Eigen::VectorXd& y)
    : ConformalModel(X, fit_strengths(X, y)) {}

ConformalModel::ConformalModel(const Eigen::MatrixXd& X, const StrengthModel& fit)
    : X_(X.sparseView()), factor_(fit.xtx_factor), beta_(fit.beta_hat), residuals_(fit.residuals) {
  if (X.rows() != residuals_.size() || X.cols() != beta_.size()) throw Error("design does not match the fitted model");
}

ConformalModel::Query ConformalModel::prepare(const Eigen::VectorXd& x) const {
  if (x.size() != p()) throw Error("query covariates have the wrong length");
  Query q;
  const Eigen::VectorXd v = factor_.solve(x);
  q.leverage = x.dot(v);
  q.fitted = x.dot(beta_);
  q.cross = X_ * v;
  return q;
}

double ConformalModel::pi_prepared(const Query& q, double y_c, double tau) const {
  const double shift = (y_c - q.fitted) / (1.0 + q.leverage);
  // The query's own residual is y_c - x'beta(y_c) = shift.
  return smoothed_rank(residuals_ - q.cross * shift, shift, tau);
}

double ConformalModel::pi(const Eigen::VectorXd& x, double y_c, double tau) const {
  return pi_prepared(prepare(x), y_c, tau);
}

Eigen::VectorXd ConformalModel::augmented_residuals(const Eigen::VectorXd& x, double y_c) const {
  const auto q = prepare(x);
  const double shift = (y_c - q.fitted) / (1.0 + q.leverage);
  Eigen::VectorXd r(n() + 1);
  r.head(n()) = residuals_ - q.cross * shift;
  r(n()) = shift;
  return r;
}

CpdCurve ConformalModel::curve(const Eigen::VectorXd& x, const MovGrid& grid, double tau) const {
  const auto q = prepare(x);
  CpdCurve c;
  c.tau = tau;
  for (double y_c : grid.values()) {
    const double value = pi_prepared(q, y_c, tau);
    if (!c.points.empty() && value < c.points.back().pi - 1e-12) {
      throw NumericalError("conformal predictive distribution decreases at y_c = " + std::to_string(y_c));
    }
    c.points.push_back({y_c, value});
  }
  return c;
}

double conformal_pi(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& x, double y_c,
                    double tau) {
  return ConformalModel(X, y).pi(x, y_c, tau);
}

WinProb conformal_win_prob(const ConformalModel& model, const MatchQuery& query, int n_teams) {
  return {model.win_prob(query.covariates(n_teams)), Method::conformal};
}

CpdCurve cpd_curve(const ConformalModel& model, const MatchQuery& query, int n_teams, const MovGrid& grid) {
  return model.curve(query.covariates(n_teams), grid, kMidTau);
}

// ---------------------------------------------------------------------------
// Normal theory and logistic
// ---------------------------------------------------------------------------

double linear_t_win_prob(const StrengthModel& model, const Eigen::VectorXd& x) {
  if (model.df() < 1) throw Error("need more games than parameters for the t predictive distribution");
  const double yhat = model.predict(x);
  const double scale = std::sqrt(model.sigma2_hat * (1.0 + model.leverage(x)));
  return 1.0 - student_t_cdf(-yhat / scale, static_cast<double>(model.df()));
}

WinProb linear_t_win_prob(const StrengthModel& model, const MatchQuery& query) {
  return {linear_t_win_prob(model, query.covariates(static_cast<int>(model.p_eff))), Method::linear_t};
}

double logistic_win_prob(const LogisticModel& model, const Eigen::VectorXd& x) {
  return inverse_logit(model.log_odds(x));
}

WinProb logistic_win_prob(const LogisticModel& model, const MatchQuery& query) {
  return {logistic_win_prob(model, query.covariates(static_cast<int>(model.beta_hat.size()))), Method::logistic};
}

}  // namespace madness
