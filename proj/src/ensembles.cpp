#include "polyaprod/ensembles.hpp"

#include <cmath>

namespace polyaprod {

double polya_jpdf(const PolyaWeight& omega, int n, const PositiveSpectrum& a) {
  if (a.n() != n) throw std::invalid_argument("polya_jpdf: spectrum size mismatch");
  if (omega.distributional())
    throw std::invalid_argument("polya_jpdf: distributional weight has no pointwise density");
  if (n - 1 > omega.operator_power())
    throw std::invalid_argument("polya_jpdf: weight does not admit n-1 operator powers");

  MatrixXd m(n, n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) m(b, c) = omega.derivative_power(b, a.values[c]);
  ScaledDet det = det_scaled(std::move(m));
  if (std::abs(det.mantissa) == 0.0) return 0.0;

  double log_norm = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double mw = omega.mellin(Complex(j)).real();
    if (!(mw > 0.0)) throw std::invalid_argument("polya_jpdf: M omega(j) must be finite and positive");
    log_norm += log_factorial(j) + std::log(mw);
  }
  const double delta = vandermonde(a.values);
  return delta * det.mantissa.real() * std::exp(det.log_scale - log_norm);
}

PolynomialEnsembleG polya_as_polynomial(const PolyaWeight& omega, int n) {
  PolynomialEnsembleG ens;
  ens.n = n;
  for (int b = 1; b <= n; ++b)
    ens.w.push_back([omega, b](double a) { return omega.derivative_power(b - 1, a); });
  // M[(-a d/da)^{b-1} omega](s) = s^{b-1} M omega(s) (integration by parts).
  ens.mellin = [omega](int b, Complex s) { return std::pow(s, b - 1) * omega.mellin(s); };
  return ens;
}

Complex spherical_transform_polya(const PolyaWeight& omega, int n, const VectorXcd& s) {
  if (s.size() != n) throw std::invalid_argument("spherical_transform_polya: size mismatch");
  Complex out = 1.0;
  for (int j = 1; j <= n; ++j) {
    const Complex num = omega.mellin(s[j - 1] + 1.0);
    const Complex den = omega.mellin(Complex(n - j + 1));
    if (std::abs(den) == 0.0) throw std::invalid_argument("spherical_transform_polya: pole in normalization");
    out *= num / den;
  }
  return out;
}

namespace {

Complex det_ratio_transform(int n, const std::function<Complex(int, int)>& numerator_entry,
                            const std::function<Complex(int, int)>& normalizer_entry,
                            const VectorXcd& s) {
  MatrixXcd num(n, n), den(n, n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      num(b, c) = numerator_entry(b, c);
      den(b, c) = normalizer_entry(b, c);
    }
  const Complex delta = vandermonde(s);
  if (std::abs(delta) == 0.0)
    throw std::invalid_argument("spherical_transform_polynomial: frequencies must be pairwise distinct");
  ScaledDet dn = det_scaled(std::move(num));
  ScaledDet dd = det_scaled(std::move(den));
  if (std::abs(dd.mantissa) == 0.0)
    throw std::invalid_argument("spherical_transform_polynomial: singular normalization determinant");
  return std::exp(log_superfactorial(n) + dn.log_scale - dd.log_scale) * dn.mantissa /
         (dd.mantissa * delta);
}

}  // namespace

Complex spherical_transform_polynomial(const PolynomialEnsembleG& ens, const VectorXcd& s) {
  const int n = ens.n;
  if (s.size() != n) throw std::invalid_argument("spherical_transform_polynomial: size mismatch");
  return det_ratio_transform(
      n, [&](int b, int c) { return ens.mellin(b + 1, s[c] + 1.0); },
      [&](int b, int c) { return ens.mellin(b + 1, Complex(c + 1)); }, s);
}

Complex spherical_transform_polynomial(const PolynomialEnsembleH& ens, const Frequency& freq) {
  const int n = ens.n;
  if (freq.n() != n) throw std::invalid_argument("spherical_transform_polynomial: size mismatch");
  return det_ratio_transform(
      n, [&](int b, int c) { return ens.mellin(b + 1, freq.s[c] + 1.0, freq.L[c]); },
      [&](int b, int c) { return ens.mellin(b + 1, Complex(c + 1), c % 2); }, freq.s);
}

MeasureConstants eigen_measure_constant(MatrixSpace space, int l, int m, int n) {
  if (n < 1) throw std::invalid_argument("eigen_measure_constant: rank must be >= 1");
  MeasureConstants out;
  if (space == MatrixSpace::g_type) {
    out.log_eigen_constant = n * n * std::log(M_PI) - log_factorial(n);
    for (int j = 0; j < n; ++j) out.log_eigen_constant -= 2.0 * log_factorial(j);
    const int lo = std::min(l, m), hi = std::max(l, m);
    for (int j = 0; j < lo; ++j)
      out.log_flat_factor += (hi - lo) * std::log(M_PI) + log_factorial(j) - log_factorial(j + hi - lo);
  } else {
    out.log_eigen_constant = -log_factorial(n);
    for (int j = 0; j < n; ++j) out.log_eigen_constant += j * std::log(M_PI) - log_factorial(j);
  }
  return out;
}

namespace {

// Spectrum of the Polya ensemble with the given weight, drawn exactly via the
// matrix models behind the catalog.
VectorXd sample_polya_spectrum(WeightKind kind, int n, const WeightParams& p, RngStream& rng) {
  switch (kind) {
    case WeightKind::ginibre: {
      const int nu = static_cast<int>(p.nu);
      if (p.nu < 0 || p.nu != std::floor(p.nu))
        throw std::invalid_argument("sample: ginibre requires integer nu >= 0");
      MatrixXcd a = ginibre_matrix(n + nu, n, rng);
      return hermitian_eigenvalues(a.adjoint() * a);
    }
    case WeightKind::projection:
    case WeightKind::jacobi: {
      // Truncated-unitary block: an n x (n+j) block of U(M') has squared
      // singular values with weight a^j (1-a)^{K-1}, j = cols-rows, K = M'-cols.
      int j, K;
      if (kind == WeightKind::projection) {
        j = p.m - p.l;
        K = p.M - p.m;
        if (K == 0) return VectorXd::Ones(n);  // Dirac at 1
      } else {
        if (p.nu < 0 || p.nu != std::floor(p.nu) || p.mu != std::floor(p.mu))
          throw std::invalid_argument("sample: jacobi requires integer nu >= 0 and integer mu");
        j = static_cast<int>(p.nu);
        K = static_cast<int>(p.mu) + p.n;
        if (p.n != n) throw std::invalid_argument("sample: jacobi weight rank differs from requested rank");
      }
      const int cols = n + j;
      const int big = K + cols;
      MatrixXcd u = haar_unitary(big, rng);
      MatrixXcd block = u.topLeftCorner(n, cols);
      return hermitian_eigenvalues(block * block.adjoint());
    }
    case WeightKind::dirac_unit:
      return VectorXd::Ones(n);
    default:
      throw std::invalid_argument("sample: weight kind '" + to_string(kind) + "' is analytic-only");
  }
}

}  // namespace

MatrixXcd sample_ensemble_matrix(WeightKind kind, int l, int m, int n, const WeightParams& params,
                                 RngStream& rng) {
  if (n > std::min(l, m)) throw std::invalid_argument("sample_ensemble_matrix: rank exceeds dimensions");
  if (kind == WeightKind::projection && params.M >= std::max(l, m) && params.m == std::max(l, m) &&
      params.l == std::min(l, m) && n == std::min(l, m)) {
    // Geometry matches a plain sub-block of a Haar unitary; draw it directly.
    MatrixXcd u = haar_unitary(params.M, rng);
    return u.topLeftCorner(l, m);
  }
  VectorXd spec = sample_polya_spectrum(kind, n, params, rng);
  spec = spec.cwiseMax(0.0);
  MatrixXcd core = embed_singular_values(spec, l, m);
  MatrixXcd kl = haar_unitary(l, rng);
  MatrixXcd km = haar_unitary(m, rng);
  return kl * core * km.adjoint();
}

PolynomialEnsembleH make_gue_ensemble(int m) {
  PolynomialEnsembleH ens;
  ens.n = m;
  ens.m = m;
  for (int b = 1; b <= m; ++b)
    ens.w.push_back([b](double a) { return std::pow(a, b - 1) * std::exp(-a * a); });
  ens.mellin = [](int b, Complex s, int L) -> Complex {
    if ((L + b - 1) % 2 != 0) return 0.0;  // parity mismatch kills the channel
    return gamma_c((s + static_cast<double>(b - 1)) / 2.0);
  };
  ens.sampler = [m](RngStream& rng) { return gue_matrix(m, rng); };
  return ens;
}

PolynomialEnsembleH make_wishart_ensemble(int m, int n, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("make_wishart_ensemble: sign must be +-1");
  if (n > m) throw std::invalid_argument("make_wishart_ensemble: rank exceeds dimension");
  PolynomialEnsembleH ens;
  ens.n = n;
  ens.m = m;
  const double nu = m - n;
  const double sgn = sign;
  for (int b = 1; b <= n; ++b)
    ens.w.push_back([b, nu, sgn](double a) {
      if (sgn * a <= 0.0) return 0.0;
      return std::pow(a, b - 1) * std::pow(std::abs(a), nu) * std::exp(-std::abs(a));
    });
  ens.mellin = [nu, sign](int b, Complex s, int L) -> Complex {
    Complex g = gamma_c(s + nu + static_cast<double>(b - 1));
    if (sign < 0 && (L + b - 1) % 2 != 0) g = -g;
    return g;
  };
  ens.sampler = [m, n, sign](RngStream& rng) {
    MatrixXcd h = ginibre_matrix(m, n, rng);
    return MatrixXcd(static_cast<double>(sign) * h * h.adjoint());
  };
  return ens;
}

double polynomial_jpdf_h(const PolynomialEnsembleH& ens, const VectorXd& a) {
  const int n = ens.n;
  if (a.size() != n) throw std::invalid_argument("polynomial_jpdf_h: size mismatch");
  MatrixXd m(n, n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) m(b, c) = ens.w[b](a[c]);
  ScaledDet num = det_scaled(std::move(m));
  if (std::abs(num.mantissa) == 0.0) return 0.0;

  MatrixXcd norm(n, n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) norm(b, c) = ens.mellin(b + 1, Complex(c + 1), c % 2);
  ScaledDet den = det_scaled(std::move(norm));
  if (std::abs(den.mantissa) == 0.0)
    throw std::invalid_argument("polynomial_jpdf_h: singular normalization determinant");

  const double delta = vandermonde(a);
  const Complex v = delta * num.mantissa * std::exp(num.log_scale - den.log_scale - log_factorial(n)) /
                    den.mantissa;
  return v.real();
}

}  // namespace polyaprod
