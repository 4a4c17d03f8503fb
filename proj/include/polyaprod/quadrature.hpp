#pragma once

#include <functional>

#include "polyaprod/types.hpp"

namespace polyaprod {

enum class Domain { interval, half_line, full_line };

template <class T>
struct IntegralResult {
  T value{};
  double error = 0.0;
  bool converged = false;
  int panels = 0;
};

/// Adaptive 15-point Gauss-Kronrod on [a, b].
IntegralResult<double> integrate_interval(const std::function<double(double)>& f, double a, double b,
                                          const QuadratureConfig& cfg);
IntegralResult<Complex> integrate_interval(const std::function<Complex(double)>& f, double a, double b,
                                           const QuadratureConfig& cfg);

/// (0, inf) via x = exp(tan t); integrand must decay at both ends.
IntegralResult<double> integrate_half_line(const std::function<double(double)>& f, const QuadratureConfig& cfg);
IntegralResult<Complex> integrate_half_line(const std::function<Complex(double)>& f, const QuadratureConfig& cfg);

/// (-inf, inf) via x = tan t.
IntegralResult<double> integrate_full_line(const std::function<double(double)>& f, const QuadratureConfig& cfg);
IntegralResult<Complex> integrate_full_line(const std::function<Complex(double)>& f, const QuadratureConfig& cfg);

/// Dispatch on a domain tag; [a, b] ignored unless Domain::interval.
IntegralResult<double> integrate_line(const std::function<double(double)>& f, Domain domain,
                                      const QuadratureConfig& cfg, double a = 0.0, double b = 1.0);

/// (1/2 pi i) closed contour integral around the origin at |z| = radius,
/// N-point trapezoid; exact for Laurent monomials z^k, |k+1| < N.
Complex contour_origin(const std::function<Complex(Complex)>& f, double radius, const QuadratureConfig& cfg);

/// Throwing helper: integral value, or std::runtime_error on non-convergence.
double integrate_or_throw(const std::function<double(double)>& f, Domain domain, const QuadratureConfig& cfg,
                          double a = 0.0, double b = 1.0);
Complex integrate_or_throw_c(const std::function<Complex(double)>& f, Domain domain, const QuadratureConfig& cfg,
                             double a = 0.0, double b = 1.0);

}  // namespace polyaprod
