#include "polyaprod/mellin.hpp"

#include <cmath>

namespace polyaprod {

Complex mellin_half_line(const std::function<double(double)>& f, Complex s, const QuadratureConfig& cfg) {
  auto integrand = [&f, s](double x) -> Complex {
    const double fx = f(x);
    if (fx == 0.0) return {};
    return std::exp((s - 1.0) * std::log(x)) * fx;
  };
  return integrate_or_throw_c(integrand, Domain::half_line, cfg);
}

Complex mellin_full_line(const UnivariateFunction& f, const MellinPoint& p, const QuadratureConfig& cfg) {
  if (p.L != 0 && p.L != 1) throw std::invalid_argument("mellin_full_line: L must be 0 or 1");
  Complex plus = mellin_half_line([&f](double x) { return f.f(x); }, p.s, cfg);
  if (f.support == Domain::half_line) return plus;
  Complex minus = mellin_half_line([&f](double x) { return f.f(-x); }, p.s, cfg);
  return plus + (p.L == 0 ? minus : -minus);
}

double zeta_regularizer(double z, int order) {
  if (order < 1) throw std::invalid_argument("zeta_regularizer: order must be >= 1");
  const double az = std::abs(z);
  // Nearest removable singularity z0 = pi (2k-1)/2, k = 1..order.
  int k_near = static_cast<int>(std::round(az / M_PI + 0.5));
  k_near = std::max(1, std::min(order, k_near));
  const double z0 = 0.5 * M_PI * (2 * k_near - 1);
  const double delta = az - z0;

  double result;
  if (std::abs(delta) < 1e-2) {
    // cos z / (1 - (z/z0)^2) = sin(z0) sinc(delta) z0^2 / (2 z0 + delta),
    // with sinc expanded; exact limit at delta = 0.
    const double sinc = std::abs(delta) < 1e-4 ? 1.0 - delta * delta / 6.0 : std::sin(delta) / delta;
    result = std::sin(z0) * sinc * z0 * z0 / (2.0 * z0 + delta);
    for (int k = 1; k <= order; ++k) {
      if (k == k_near) continue;
      const double zk = 0.5 * M_PI * (2 * k - 1);
      result /= 1.0 - (az / zk) * (az / zk);
    }
  } else {
    result = std::cos(az);
    for (int k = 1; k <= order; ++k) {
      const double zk = 0.5 * M_PI * (2 * k - 1);
      result /= 1.0 - (az / zk) * (az / zk);
    }
  }
  return result;  // even in z
}

ExtrapolationResult extrapolate_eps(const std::vector<double>& eps, const std::vector<double>& values,
                                    double tol) {
  if (eps.size() != values.size() || eps.empty())
    throw std::invalid_argument("extrapolate_eps: schedule/value size mismatch");
  const size_t n = eps.size();
  // Neville in eps^2 towards 0: after level j, t[i] interpolates nodes i..i+j.
  std::vector<double> t(values);
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = eps[i] * eps[i];
  double prev = t[0];
  for (size_t level = 1; level < n; ++level) {
    prev = t[0];
    for (size_t i = 0; i + level < n; ++i) {
      t[i] = (x[i + level] * t[i] - x[i] * t[i + 1]) / (x[i + level] - x[i]);
    }
  }
  ExtrapolationResult r;
  r.per_eps = values;
  r.value = t[0];
  r.error = n > 1 ? std::abs(t[0] - prev) : std::abs(t[0]);
  r.converged = n > 1 && r.error <= std::max(tol, 1e-10 * std::abs(t[0]));
  return r;
}

namespace {

// Symmetric truncation [-S, S] of the frequency line: grow S until the
// transform magnitude at the boundary drops below the tail tolerance.
double choose_truncation(const std::function<double(double)>& magnitude, double tail_tol) {
  double S = 16.0;
  for (int it = 0; it < 8; ++it) {
    double m = 0.0;
    for (double frac : {1.0, 0.85, 0.7}) m = std::max(m, magnitude(S * frac));
    if (m < tail_tol) return S;
    S *= 2.0;
  }
  return S;
}

}  // namespace

ExtrapolationResult inverse_mellin(const std::function<Complex(Complex, int)>& Mf, double x,
                                   const std::vector<double>& eps_schedule, const QuadratureConfig& cfg) {
  if (x == 0.0) throw std::invalid_argument("inverse_mellin: x must be nonzero");
  const double ax = std::abs(x);
  const int sgn = x > 0 ? 1 : -1;

  const double S = choose_truncation(
      [&](double t) {
        double m = 0.0;
        for (int L = 0; L < 2; ++L)
          m = std::max({m, std::abs(Mf(Complex(1.0, t), L)), std::abs(Mf(Complex(1.0, -t), L))});
        return m;
      },
      std::max(cfg.abs_tol, 1e-12));

  std::vector<double> values;
  values.reserve(eps_schedule.size());
  QuadratureConfig inner = cfg;
  inner.abs_tol = std::max(cfg.abs_tol * 1e-2, 1e-13);
  for (double eps : eps_schedule) {
    Complex total = 0.0;
    for (int L = 0; L < 2; ++L) {
      auto integrand = [&](double t) -> Complex {
        const Complex sfreq(1.0, t);
        return Mf(sfreq, L) * std::exp(Complex(0.0, -t) * std::log(ax)) * zeta_regularizer(eps * t, 1);
      };
      Complex integral = integrate_or_throw_c(integrand, Domain::interval, inner, -S, S);
      const double sign_factor = (L == 1 && sgn < 0) ? -1.0 : 1.0;
      total += sign_factor * integral;
    }
    values.push_back(total.real() / (4.0 * M_PI * ax));
  }
  return extrapolate_eps(eps_schedule, values, cfg.abs_tol);
}

double mellin_convolve(const std::function<double(double)>& p, const UnivariateFunction& q, double a,
                       const QuadratureConfig& cfg) {
  // a' = e^t turns the scale convolution into an additive one.
  auto integrand = [&](double t) -> double {
    const double ap = std::exp(t);
    const double pv = p(ap);
    if (pv == 0.0) return 0.0;
    return pv * q.f(a / ap);
  };
  return integrate_or_throw(integrand, Domain::full_line, cfg);
}

}  // namespace polyaprod
