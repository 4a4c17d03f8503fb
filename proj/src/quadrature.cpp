#include "polyaprod/quadrature.hpp"

#include <cmath>
#include <queue>

namespace polyaprod {

namespace {

// 15-point Kronrod nodes/weights on [-1,1] plus the embedded 7-point Gauss
// weights (QUADPACK constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T fc = f(c);
  T res_k = kWgk[7] * fc;
  T res_g = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    T f1 = f(c - x);
    T f2 = f(c + x);
    res_k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) res_g += kWg[j / 2] * (f1 + f2);
  }
  res_k *= h;
  res_g *= h;
  const double err = std::abs(res_k - res_g);
  return {a, b, res_k, err};
}

template <class T, class F>
IntegralResult<T> adaptive(const F& f, double a, double b, const QuadratureConfig& cfg) {
  cfg.validate();
  std::priority_queue<Panel<T>> panels;
  T total{};
  double total_err = 0.0;

  // Seed with a handful of panels so narrow features are not missed.
  const int seed_panels = 8;
  for (int i = 0; i < seed_panels; ++i) {
    const double pa = a + (b - a) * i / seed_panels;
    const double pb = a + (b - a) * (i + 1) / seed_panels;
    Panel<T> p = gk15<T>(f, pa, pb);
    total += p.value;
    total_err += p.error;
    panels.push(p);
  }

  int count = seed_panels;
  while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
    if (count >= cfg.max_subdivisions || panels.empty()) {
      return {total, total_err, false, count};
    }
    Panel<T> worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) continue;  // panel at rounding limit
    Panel<T> left = gk15<T>(f, worst.a, mid);
    Panel<T> right = gk15<T>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  return {total, total_err, true, count};
}

constexpr double kHalfPi = 1.5707963267948966;

template <class T>
T guarded(T v) {
  if constexpr (std::is_same_v<T, double>) {
    return std::isfinite(v) ? v : 0.0;
  } else {
    return (std::isfinite(v.real()) && std::isfinite(v.imag())) ? v : T{};
  }
}

template <class T, class F>
IntegralResult<T> full_line_impl(const F& f, const QuadratureConfig& cfg) {
  auto g = [&f](double t) -> T {
    const double x = std::tan(t);
    if (!std::isfinite(x)) return T{};
    const double c = std::cos(t);
    return guarded<T>(f(x) * (1.0 / (c * c)));
  };
  return adaptive<T>(g, -kHalfPi, kHalfPi, cfg);
}

template <class T, class F>
IntegralResult<T> half_line_impl(const F& f, const QuadratureConfig& cfg) {
  // x = exp(tan t): double-exponential style map of (0, inf) to a finite box.
  auto g = [&f](double t) -> T {
    const double u = std::tan(t);
    if (!std::isfinite(u)) return T{};
    const double x = std::exp(u);
    if (x == 0.0 || !std::isfinite(x)) return T{};
    const double c = std::cos(t);
    return guarded<T>(f(x) * (x / (c * c)));
  };
  return adaptive<T>(g, -kHalfPi, kHalfPi, cfg);
}

}  // namespace

IntegralResult<double> integrate_interval(const std::function<double(double)>& f, double a, double b,
                                          const QuadratureConfig& cfg) {
  return adaptive<double>(f, a, b, cfg);
}

IntegralResult<Complex> integrate_interval(const std::function<Complex(double)>& f, double a, double b,
                                           const QuadratureConfig& cfg) {
  return adaptive<Complex>(f, a, b, cfg);
}

IntegralResult<double> integrate_half_line(const std::function<double(double)>& f, const QuadratureConfig& cfg) {
  return half_line_impl<double>(f, cfg);
}

IntegralResult<Complex> integrate_half_line(const std::function<Complex(double)>& f, const QuadratureConfig& cfg) {
  return half_line_impl<Complex>(f, cfg);
}

IntegralResult<double> integrate_full_line(const std::function<double(double)>& f, const QuadratureConfig& cfg) {
  return full_line_impl<double>(f, cfg);
}

IntegralResult<Complex> integrate_full_line(const std::function<Complex(double)>& f, const QuadratureConfig& cfg) {
  return full_line_impl<Complex>(f, cfg);
}

IntegralResult<double> integrate_line(const std::function<double(double)>& f, Domain domain,
                                      const QuadratureConfig& cfg, double a, double b) {
  switch (domain) {
    case Domain::interval:
      return integrate_interval(f, a, b, cfg);
    case Domain::half_line:
      return integrate_half_line(f, cfg);
    case Domain::full_line:
      return integrate_full_line(f, cfg);
  }
  throw std::logic_error("integrate_line: bad domain");
}

Complex contour_origin(const std::function<Complex(Complex)>& f, double radius, const QuadratureConfig& cfg) {
  cfg.validate();
  if (radius <= 0.0) throw std::invalid_argument("contour_origin: radius must be > 0");
  const int n = cfg.contour_points;
  Complex sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * M_PI * k / n;
    const Complex z = radius * Complex(std::cos(theta), std::sin(theta));
    sum += f(z) * z;
  }
  return sum / static_cast<double>(n);
}

double integrate_or_throw(const std::function<double(double)>& f, Domain domain, const QuadratureConfig& cfg,
                          double a, double b) {
  auto r = integrate_line(f, domain, cfg, a, b);
  if (!r.converged) throw std::runtime_error("quadrature did not converge within max_subdivisions");
  return r.value;
}

Complex integrate_or_throw_c(const std::function<Complex(double)>& f, Domain domain, const QuadratureConfig& cfg,
                             double a, double b) {
  IntegralResult<Complex> r;
  switch (domain) {
    case Domain::interval:
      r = integrate_interval(f, a, b, cfg);
      break;
    case Domain::half_line:
      r = integrate_half_line(f, cfg);
      break;
    case Domain::full_line:
      r = integrate_full_line(f, cfg);
      break;
  }
  if (!r.converged) throw std::runtime_error("quadrature did not converge within max_subdivisions");
  return r.value;
}

}  // namespace polyaprod
