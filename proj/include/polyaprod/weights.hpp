#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyaprod/rng.hpp"
#include "polyaprod/specfun.hpp"
#include "polyaprod/types.hpp"

namespace polyaprod {

enum class WeightKind {
  ginibre,          // a^nu e^{-a}
  jacobi,           // a^nu (1-a)^{mu+n-1} on (0,1)
  cauchy_lorentz,   // a^nu / (1+a)^{mu+n}
  muttalib_borodin, // a^nu e^{-a^theta}
  lognormal,        // a^nu e^{-(ln a)^2}
  projection,       // (M-m) a^{m-l} (1-a)^{M-m-1} on (0,1); Dirac at 1 when M = m
  dirac_unit,       // delta(a - 1)
};

std::string to_string(WeightKind k);
WeightKind weight_kind_from_string(const std::string& name);

struct WeightParams {
  double nu = 0.0;
  double mu = 1.0;
  double theta = 1.0;
  int M = 0, m = 0, l = 0;  // projection triple, l <= m <= M
  int n = 1;                // intended rank (fixes mu+n exponents and operator depth)
};

/// One-weight generator of a Polya ensemble: pointwise evaluator, closed-form
/// Mellin transform, and the derivative-operator tower (-a d/da)^k omega.
class PolyaWeight {
 public:
  static PolyaWeight make(WeightKind kind, WeightParams params);

  WeightKind kind() const { return kind_; }
  const WeightParams& params() const { return params_; }

  /// omega(a); zero off the support. Throws for distributional weights.
  double operator()(double a) const;

  /// Closed-form Mellin transform M omega(s) on the half line.
  Complex mellin(Complex s) const;

  /// (-a d/da)^k omega at a. Catalog weights use exact polynomial recurrences
  /// up to operator_power(); beyond that a central-difference ladder in
  /// t = ln a (step 1e-4) is used only when allow_finite_difference is set.
  double derivative_power(int k, double a, bool allow_finite_difference = false) const;

  int operator_power() const { return operator_power_; }
  bool distributional() const { return distributional_; }
  bool sampleable() const { return sampleable_; }

 private:
  PolyaWeight() = default;
  WeightKind kind_{};
  WeightParams params_{};
  int operator_power_ = 0;
  bool distributional_ = false;
  bool sampleable_ = false;
};

struct PolyaCheckReport {
  bool pass = true;
  int worst_order = 0;
  double worst_margin = 0.0;  // most negative normalized determinant seen
};

/// Random-grid check of the Polya frequency inequality
/// Delta_j(x) Delta_j(y) det[f(x_b - y_c)] >= 0 for f = omega o exp, j <= order.
PolyaCheckReport polya_frequency_check(const std::function<double(double)>& omega, int order,
                                       int draws_per_order, RngStream& rng);

}  // namespace polyaprod
