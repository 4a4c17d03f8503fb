#pragma once

#include <functional>
#include <vector>

#include "polyaprod/types.hpp"

namespace polyaprod {

/// Two-sided p-value -> equivalent Gaussian sigma distance.
double pvalue_to_sigma(double p);

/// Kolmogorov distribution survival function Q(t) = P(K > t).
double kolmogorov_survival(double t);

struct KsResult {
  double statistic = 0.0;   // sup |F_emp - F|
  double p_value = 1.0;
  double sigma = 0.0;
};

/// One-sample KS against a CDF evaluator; samples need not be sorted.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct Chi2Result {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  double sigma = 0.0;
};

/// Equal-probability-bin chi^2 against a CDF evaluator.
Chi2Result chi2_test(const std::vector<double>& samples, const std::function<double(double)>& cdf,
                     int bins = 40);

/// Numeric CDF of a 1-d density on [lo, hi] (cumulative Simpson on a fine
/// grid, renormalized); returned evaluator clamps outside the range.
std::function<double(double)> cdf_from_density(const std::function<double(double)>& density, double lo,
                                               double hi, int grid_points = 4001);

struct MeanStderr {
  double mean = 0.0;
  double stderr_est = 0.0;
  int count = 0;
  double sigma_distance(double reference) const;
};

MeanStderr mean_stderr(const std::vector<double>& xs);

}  // namespace polyaprod
