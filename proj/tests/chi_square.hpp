#pragma once

// Goodness-of-fit helper for sampling tests.

#include <boost/math/distributions/chi_squared.hpp>

#include <cstddef>
#include <vector>

namespace testing_support {

/// Pearson chi-square p-value of observed counts against probabilities.
inline double chi_square_p_value(const std::vector<std::size_t>& observed,
                                 const std::vector<double>& probabilities) {
  std::size_t total = 0;
  for (auto o : observed) total += o;
  double statistic = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double expected = probabilities[k] * static_cast<double>(total);
    const double diff = static_cast<double>(observed[k]) - expected;
    statistic += diff * diff / expected;
  }
  const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace testing_support
