#include "polyaprod/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace polyaprod {

double pvalue_to_sigma(double p) {
  p = std::clamp(p, 1e-300, 1.0);
  return std::sqrt(2.0) * boost::math::erfc_inv(p);
}

double kolmogorov_survival(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 0.18) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * t * t);
    sum += term;
    if (std::abs(term) < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_test: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  // Stephens' finite-sample scaling.
  const double t = d * (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n));
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_survival(t);
  r.sigma = pvalue_to_sigma(r.p_value);
  return r;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  const double t = d * (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne));
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_survival(t);
  r.sigma = pvalue_to_sigma(r.p_value);
  return r;
}

Chi2Result chi2_test(const std::vector<double>& samples, const std::function<double(double)>& cdf,
                     int bins) {
  if (samples.empty()) throw std::invalid_argument("chi2_test: empty sample");
  if (bins < 2) throw std::invalid_argument("chi2_test: need at least 2 bins");
  std::vector<double> u(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) u[i] = cdf(samples[i]);
  std::vector<int> counts(bins, 0);
  for (double v : u) {
    int b = static_cast<int>(v * bins);
    b = std::clamp(b, 0, bins - 1);
    counts[b]++;
  }
  const double expected = static_cast<double>(samples.size()) / bins;
  double stat = 0.0;
  for (int c : counts) stat += (c - expected) * (c - expected) / expected;
  Chi2Result r;
  r.statistic = stat;
  r.dof = bins - 1;
  r.p_value = std::clamp(boost::math::gamma_q(0.5 * r.dof, 0.5 * stat), 0.0, 1.0);
  r.sigma = pvalue_to_sigma(r.p_value);
  return r;
}

std::function<double(double)> cdf_from_density(const std::function<double(double)>& density, double lo,
                                               double hi, int grid_points) {
  if (!(hi > lo)) throw std::invalid_argument("cdf_from_density: bad range");
  if (grid_points % 2 == 0) ++grid_points;
  const int n = grid_points;
  const double h = (hi - lo) / (n - 1);
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = std::max(0.0, density(lo + i * h));
  // Cumulative Simpson over pairs of panels.
  std::vector<double> cum(n, 0.0);
  for (int i = 2; i < n; i += 2)
    cum[i] = cum[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
  for (int i = 1; i < n; i += 2) cum[i] = cum[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  // Enforce monotonicity against Simpson wiggle, then renormalize.
  for (int i = 1; i < n; ++i) cum[i] = std::max(cum[i], cum[i - 1]);
  const double total = cum[n - 1];
  if (!(total > 0.0)) throw std::invalid_argument("cdf_from_density: density integrates to zero");

  auto grid = std::make_shared<std::vector<double>>(std::move(cum));
  return [grid, lo, hi, h, total, n](double x) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const double pos = (x - lo) / h;
    const int i = std::min(static_cast<int>(pos), n - 2);
    const double w = pos - i;
    return ((1.0 - w) * (*grid)[i] + w * (*grid)[i + 1]) / total;
  };
}

MeanStderr mean_stderr(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("mean_stderr: need at least 2 values");
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= static_cast<double>(xs.size() - 1);
  return {m, std::sqrt(v / static_cast<double>(xs.size())), static_cast<int>(xs.size())};
}

double MeanStderr::sigma_distance(double reference) const {
  if (stderr_est == 0.0) return mean == reference ? 0.0 : 1e9;
  return std::abs(mean - reference) / stderr_est;
}

}  // namespace polyaprod
