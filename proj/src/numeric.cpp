#include "madness/numeric.hpp"

#include <boost/math/distributions/students_t.hpp>

namespace madness {

double student_t_cdf(double x, double df) {
  const boost::math::students_t dist(df);
  return boost::math::cdf(dist, x);
}

}  // namespace madness
