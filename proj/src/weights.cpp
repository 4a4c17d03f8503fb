#include "polyaprod/weights.hpp"

#include <cmath>

#include "polyaprod/linalg.hpp"

namespace polyaprod {

namespace {

using Poly = std::vector<double>;  // coefficients, ascending powers

double poly_eval(const Poly& p, double x) {
  double v = 0.0;
  for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

Poly poly_x_deriv(const Poly& p) {  // a * d/da
  Poly q(p.size(), 0.0);
  for (size_t i = 1; i < p.size(); ++i) q[i] = static_cast<double>(i) * p[i];
  return q;
}

Poly poly_shift_mul(const Poly& p) {  // a * p
  Poly q(p.size() + 1, 0.0);
  for (size_t i = 0; i < p.size(); ++i) q[i + 1] = p[i];
  return q;
}

void poly_axpy(Poly& acc, double c, const Poly& p) {
  if (acc.size() < p.size()) acc.resize(p.size(), 0.0);
  for (size_t i = 0; i < p.size(); ++i) acc[i] += c * p[i];
}

// Q_{k+1} for the three rational-weight recurrences.
Poly step_ginibre(const Poly& q, double nu, int) {
  // (-aQ' ) + aQ - nu Q
  Poly out;
  poly_axpy(out, -1.0, poly_x_deriv(q));
  poly_axpy(out, 1.0, poly_shift_mul(q));
  poly_axpy(out, -nu, q);
  return out;
}

Poly step_jacobi(const Poly& q, double nu, double beta_k) {
  // (-aQ' - nu Q)(1 - a) + beta_k a Q
  Poly t;
  poly_axpy(t, -1.0, poly_x_deriv(q));
  poly_axpy(t, -nu, q);
  Poly out = t;
  poly_axpy(out, -1.0, poly_shift_mul(t));
  poly_axpy(out, beta_k, poly_shift_mul(q));
  return out;
}

Poly step_cauchy(const Poly& q, double nu, double gamma_k) {
  // (-aQ' - nu Q)(1 + a) + gamma_k a Q
  Poly t;
  poly_axpy(t, -1.0, poly_x_deriv(q));
  poly_axpy(t, -nu, q);
  Poly out = t;
  poly_axpy(out, 1.0, poly_shift_mul(t));
  poly_axpy(out, gamma_k, poly_shift_mul(q));
  return out;
}

Poly step_lognormal(const Poly& p, double nu) {
  // P_{k+1}(t) = -P'(t) - (nu - 2t) P(t), polynomial in t
  Poly out;
  Poly deriv(p.size(), 0.0);
  for (size_t i = 1; i < p.size(); ++i) deriv[i - 1] = static_cast<double>(i) * p[i];
  poly_axpy(out, -1.0, deriv);
  poly_axpy(out, -nu, p);
  poly_axpy(out, 2.0, poly_shift_mul(p));
  return out;
}

// Generalized monomials c * a^{i + j theta} for the Muttalib-Borodin weight.
using GenPoly = std::map<std::pair<int, int>, double>;

GenPoly step_mb(const GenPoly& g, double nu, double theta) {
  GenPoly out;
  for (const auto& [key, c] : g) {
    const auto [i, j] = key;
    out[{i, j}] += -(nu + i + j * theta) * c;
    out[{i, j + 1}] += theta * c;
  }
  return out;
}

}  // namespace

std::string to_string(WeightKind k) {
  switch (k) {
    case WeightKind::ginibre: return "ginibre";
    case WeightKind::jacobi: return "jacobi";
    case WeightKind::cauchy_lorentz: return "cauchy-lorentz";
    case WeightKind::muttalib_borodin: return "muttalib-borodin";
    case WeightKind::lognormal: return "lognormal";
    case WeightKind::projection: return "projection";
    case WeightKind::dirac_unit: return "dirac-unit";
  }
  return "?";
}

WeightKind weight_kind_from_string(const std::string& name) {
  if (name == "ginibre") return WeightKind::ginibre;
  if (name == "jacobi") return WeightKind::jacobi;
  if (name == "cauchy-lorentz") return WeightKind::cauchy_lorentz;
  if (name == "muttalib-borodin") return WeightKind::muttalib_borodin;
  if (name == "lognormal") return WeightKind::lognormal;
  if (name == "projection") return WeightKind::projection;
  if (name == "dirac-unit") return WeightKind::dirac_unit;
  throw std::invalid_argument("unknown weight kind: " + name);
}

PolyaWeight PolyaWeight::make(WeightKind kind, WeightParams p) {
  PolyaWeight w;
  w.kind_ = kind;
  w.params_ = p;
  switch (kind) {
    case WeightKind::ginibre:
      if (p.nu <= -1.0) throw std::invalid_argument("ginibre: need nu > -1");
      w.operator_power_ = 64;
      w.sampleable_ = p.nu >= 0.0 && p.nu == std::floor(p.nu);
      break;
    case WeightKind::jacobi:
      if (p.nu <= -1.0 || p.mu <= 0.0 || p.n < 1)
        throw std::invalid_argument("jacobi: need nu > -1, mu > 0, n >= 1");
      w.operator_power_ = p.n - 1;
      w.sampleable_ = p.nu >= 0.0 && p.nu == std::floor(p.nu) && p.mu == std::floor(p.mu);
      break;
    case WeightKind::cauchy_lorentz:
      if (p.nu <= -1.0 || p.mu <= 0.0 || p.n < 1)
        throw std::invalid_argument("cauchy-lorentz: need nu > -1, mu > 0, n >= 1");
      w.operator_power_ = p.n - 1;
      break;
    case WeightKind::muttalib_borodin:
      if (p.nu <= -1.0 || p.theta <= 0.0) throw std::invalid_argument("muttalib-borodin: need nu > -1, theta > 0");
      w.operator_power_ = 64;
      break;
    case WeightKind::lognormal:
      if (p.nu <= -1.0) throw std::invalid_argument("lognormal: need nu > -1");
      w.operator_power_ = 64;
      break;
    case WeightKind::projection:
      if (!(p.l <= p.m && p.m <= p.M) || p.l < 0) throw std::invalid_argument("projection: need 0 <= l <= m <= M");
      w.distributional_ = (p.M == p.m);
      w.operator_power_ = std::max(0, p.M - p.m - 1);
      w.sampleable_ = true;
      break;
    case WeightKind::dirac_unit:
      w.distributional_ = true;
      w.operator_power_ = 0;
      w.sampleable_ = true;
      break;
  }
  return w;
}

double PolyaWeight::operator()(double a) const { return derivative_power(0, a); }

Complex PolyaWeight::mellin(Complex s) const {
  const auto& p = params_;
  switch (kind_) {
    case WeightKind::ginibre:
      return gamma_c(s + p.nu);
    case WeightKind::jacobi:
      return std::exp(lgamma_c(s + p.nu) + lgamma_c(Complex(p.mu + p.n)) - lgamma_c(s + p.nu + p.mu + p.n));
    case WeightKind::cauchy_lorentz:
      return std::exp(lgamma_c(s + p.nu) + lgamma_c(p.mu + p.n - s - p.nu) - lgamma_c(Complex(p.mu + p.n)));
    case WeightKind::muttalib_borodin:
      return gamma_c((s + p.nu) / p.theta) / p.theta;
    case WeightKind::lognormal:
      return std::sqrt(M_PI) * std::exp((s + p.nu) * (s + p.nu) * 0.25);
    case WeightKind::projection: {
      if (p.M == p.m) return 1.0;
      return std::exp(lgamma_c(Complex(p.M - p.m + 1)) + lgamma_c(s + (p.m - p.l)) -
                      lgamma_c(s + (p.M - p.l)));
    }
    case WeightKind::dirac_unit:
      return 1.0;
  }
  throw std::logic_error("mellin: bad kind");
}

double PolyaWeight::derivative_power(int k, double a, bool allow_finite_difference) const {
  if (k < 0) throw std::invalid_argument("derivative_power: k must be >= 0");
  if (distributional_)
    throw std::logic_error("derivative_power: weight is distributional (no pointwise values)");
  if (k > operator_power_) {
    if (!allow_finite_difference)
      throw std::invalid_argument("derivative_power: k exceeds available operator power");
    if (a <= 0.0) return 0.0;
    const double h = 1e-4;  // step in t = ln a
    return -(derivative_power(k - 1, a * std::exp(h), true) -
             derivative_power(k - 1, a * std::exp(-h), true)) /
           (2.0 * h);
  }
  if (a <= 0.0) return 0.0;
  const auto& p = params_;
  switch (kind_) {
    case WeightKind::ginibre: {
      Poly q{1.0};
      for (int i = 0; i < k; ++i) q = step_ginibre(q, p.nu, i);
      return poly_eval(q, a) * std::pow(a, p.nu) * std::exp(-a);
    }
    case WeightKind::jacobi: {
      if (a >= 1.0) return 0.0;
      Poly q{1.0};
      for (int i = 0; i < k; ++i) q = step_jacobi(q, p.nu, p.mu + p.n - 1 - i);
      return poly_eval(q, a) * std::pow(a, p.nu) * std::pow(1.0 - a, p.mu + p.n - 1 - k);
    }
    case WeightKind::cauchy_lorentz: {
      Poly q{1.0};
      for (int i = 0; i < k; ++i) q = step_cauchy(q, p.nu, p.mu + p.n + i);
      return poly_eval(q, a) * std::pow(a, p.nu) * std::pow(1.0 + a, -(p.mu + p.n + k));
    }
    case WeightKind::muttalib_borodin: {
      GenPoly g{{{0, 0}, 1.0}};
      for (int i = 0; i < k; ++i) g = step_mb(g, p.nu, p.theta);
      const double at = std::pow(a, p.theta);
      double sum = 0.0;
      for (const auto& [key, c] : g) sum += c * std::pow(a, key.first) * std::pow(at, key.second);
      return sum * std::pow(a, p.nu) * std::exp(-at);
    }
    case WeightKind::lognormal: {
      Poly q{1.0};
      for (int i = 0; i < k; ++i) q = step_lognormal(q, p.nu);
      const double t = std::log(a);
      return poly_eval(q, t) * std::pow(a, p.nu) * std::exp(-t * t);
    }
    case WeightKind::projection: {
      if (a >= 1.0) return 0.0;
      const double nu = p.m - p.l;
      const double beta0 = p.M - p.m - 1;
      Poly q{1.0};
      for (int i = 0; i < k; ++i) q = step_jacobi(q, nu, beta0 - i);
      return (p.M - p.m) * poly_eval(q, a) * std::pow(a, nu) * std::pow(1.0 - a, beta0 - k);
    }
    case WeightKind::dirac_unit:
      break;
  }
  throw std::logic_error("derivative_power: bad kind");
}

PolyaCheckReport polya_frequency_check(const std::function<double(double)>& omega, int order,
                                       int draws_per_order, RngStream& rng) {
  PolyaCheckReport report;
  auto f = [&omega](double t) { return omega(std::exp(t)); };
  for (int j = 1; j <= order; ++j) {
    for (int d = 0; d < draws_per_order; ++d) {
      VectorXd x(j), y(j);
      for (int i = 0; i < j; ++i) {
        x[i] = 4.0 * rng.uniform() - 2.0;
        y[i] = 4.0 * rng.uniform() - 2.0;
      }
      std::sort(x.data(), x.data() + j);
      std::sort(y.data(), y.data() + j);
      MatrixXd m(j, j);
      for (int b = 0; b < j; ++b)
        for (int c = 0; c < j; ++c) m(b, c) = f(x[b] - y[c]);
      // Row-normalize so the sign test has a meaningful scale.
      for (int b = 0; b < j; ++b) {
        const double s = m.row(b).cwiseAbs().maxCoeff();
        if (s > 0.0) m.row(b) /= s;
      }
      const double dv = m.determinant();
      const double sgn = (vandermonde(x) * vandermonde(y)) >= 0.0 ? 1.0 : -1.0;
      const double margin = sgn * dv;
      if (margin < report.worst_margin) {
        report.worst_margin = margin;
        report.worst_order = j;
      }
      if (margin < -1e-12) report.pass = false;
    }
  }
  return report;
}

}  // namespace polyaprod
