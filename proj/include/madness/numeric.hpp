#pragma once

// Small numeric kernels shared by the predictors and the field calculations.
// Written against Eigen expressions so they accept blocks, maps and
// arbitrary scalar types.

#include <algorithm>
#include <cmath>
#include <type_traits>

#include <Eigen/Core>

namespace madness {

template <typename Derived>
auto inverse_logit(const Eigen::MatrixBase<Derived>& eta) {
  using Scalar = typename Derived::Scalar;
  using Plain = Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  Plain out(eta.rows(), eta.cols());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const Scalar e = eta.derived().coeff(i);
    // Split by sign so exp never overflows.
    out.coeffRef(i) = e >= Scalar(0) ? Scalar(1) / (Scalar(1) + std::exp(-e)) : std::exp(e) / (Scalar(1) + std::exp(e));
  }
  return out;
}

template <typename Scalar>
  requires std::is_floating_point_v<Scalar>
Scalar inverse_logit(Scalar eta) {
  return eta >= Scalar(0) ? Scalar(1) / (Scalar(1) + std::exp(-eta)) : std::exp(eta) / (Scalar(1) + std::exp(eta));
}

/// Smoothed conformal p-value of `self` among `scores` (which do not include
/// `self`): (#{s < self} + tau * (#{s == self} + 1)) / (n + 1).
template <typename Derived>
typename Derived::Scalar smoothed_rank(const Eigen::DenseBase<Derived>& scores, typename Derived::Scalar self,
                                       typename Derived::Scalar tau) {
  using Scalar = typename Derived::Scalar;
  Eigen::Index below = 0;
  Eigen::Index ties = 1;  // the augmented point ties with itself
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const Scalar s = scores.derived().coeff(i);
    if (s < self) ++below;
    else if (s == self) ++ties;
  }
  return (static_cast<Scalar>(below) + tau * static_cast<Scalar>(ties)) / static_cast<Scalar>(scores.size() + 1);
}

/// Probability mass function of a Poisson-binomial count, P(L = m) for
/// m = 0..K, by the standard O(K^2) convolution recurrence.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> poisson_binomial_pmf(const Eigen::MatrixBase<Derived>& ps) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index K = ps.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pmf = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(K + 1);
  pmf(0) = Scalar(1);
  for (Eigen::Index k = 0; k < K; ++k) {
    const Scalar p = ps.derived().coeff(k);
    for (Eigen::Index m = k + 1; m >= 1; --m) pmf(m) = pmf(m) * (Scalar(1) - p) + pmf(m - 1) * p;
    pmf(0) *= Scalar(1) - p;
  }
  return pmf;
}

/// P(L <= l). l < 0 gives 0; l >= K gives exactly 1.
template <typename Derived>
typename Derived::Scalar poisson_binomial_cdf(const Eigen::MatrixBase<Derived>& ps, Eigen::Index l) {
  using Scalar = typename Derived::Scalar;
  if (l < 0) return Scalar(0);
  if (l >= ps.size()) return Scalar(1);
  // Counts above l never flow back below it, so truncating the DP at l is exact: O(K * l).
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pmf = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(l + 1);
  pmf(0) = Scalar(1);
  for (Eigen::Index k = 0; k < ps.size(); ++k) {
    const Scalar p = ps.derived().coeff(k);
    for (Eigen::Index m = std::min(k + 1, l); m >= 1; --m) pmf(m) = pmf(m) * (Scalar(1) - p) + pmf(m - 1) * p;
    pmf(0) *= Scalar(1) - p;
  }
  return pmf.sum();
}

/// Student-t distribution function with `df` degrees of freedom.
double student_t_cdf(double x, double df);

}  // namespace madness
