#pragma once

#include <functional>
#include <vector>

#include "polyaprod/quadrature.hpp"
#include "polyaprod/types.hpp"

namespace polyaprod {

/// Mellin frequency on the full real line: one complex plane per parity L.
struct MellinPoint {
  Complex s;
  int L = 0;  // in {0, 1}
};

/// Univariate function with its support tag and L^1_n integrability order.
struct UnivariateFunction {
  std::function<double(double)> f;
  Domain support = Domain::half_line;  // half_line = positive axis, full_line = R
  int integrability_order = 0;
};

/// M f(s) = int_0^inf x^{s-1} f(x) dx.
Complex mellin_half_line(const std::function<double(double)>& f, Complex s, const QuadratureConfig& cfg);

/// M f(s, L) = int dx/|x| sign(x)^L |x|^s f(x); computed as
/// Mf_+(s) + (-1)^L Mf_-(s) from the two half-line pieces.
Complex mellin_full_line(const UnivariateFunction& f, const MellinPoint& p, const QuadratureConfig& cfg);

/// zeta_n(z) = cos z / prod_{k=1}^n [1 - 4 z^2 / (pi (2k-1))^2]; removable
/// singularities at z = +- pi(2k-1)/2, k <= n, evaluated by their limits.
double zeta_regularizer(double z, int order);

struct ExtrapolationResult {
  double value = 0.0;
  double error = 0.0;       // magnitude of the last extrapolation increment
  bool converged = false;
  std::vector<double> per_eps;  // raw regularized values, one per epsilon
};

inline const std::vector<double> kDefaultEpsSchedule = {0.1, 0.05, 0.025, 0.0125};

/// Regularized inverse Mellin transform at x: limit over the epsilon schedule
/// of (1/4pi) sum_L sign(x)^L int Mf(is+1, L) |x|^{-is-1} zeta_1(eps s) ds,
/// Richardson-extrapolated in eps^2.
ExtrapolationResult inverse_mellin(const std::function<Complex(Complex, int)>& Mf, double x,
                                   const std::vector<double>& eps_schedule, const QuadratureConfig& cfg);

/// (p (*) q)(a) = int_0^inf da'/a' p(a') q(a/a') for p on R_+, q on R.
double mellin_convolve(const std::function<double(double)>& p, const UnivariateFunction& q, double a,
                       const QuadratureConfig& cfg);

/// Richardson/Neville extrapolation to eps -> 0 assuming an even expansion.
ExtrapolationResult extrapolate_eps(const std::vector<double>& eps, const std::vector<double>& values,
                                    double tol);

}  // namespace polyaprod
