#include "polyaprod/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polyaprod {

namespace {

struct SCluster {
  Complex center;
  int parity = 0;
  int size = 0;
};

struct ACluster {
  double center = 0.0;
  int size = 0;
};

// Mixed partial (1/p!) (1/q!) d_s^p d_a^q [sign(a)^parity |a|^s] at (s, a).
// Represented through u = |a|:  d_s^p d_u^q u^s = u^{s-q} P_{p,q}(ln u) with
// P_{p,0}(t) = t^p and P_{p,q+1} = (s - q) P + P'.
Complex mixed_partial(Complex s, double a, int parity, int p, int q) {
  const double u = std::abs(a);
  std::vector<Complex> poly(p + 1, Complex(0.0));
  poly[p] = 1.0;  // t^p
  for (int k = 0; k < q; ++k) {
    std::vector<Complex> next(p + 1, Complex(0.0));
    const Complex fac = s - static_cast<double>(k);
    for (int d = 0; d <= p; ++d) {
      next[d] += fac * poly[d];
      if (d + 1 <= p) next[d] += static_cast<double>(d + 1) * poly[d + 1];
    }
    poly.swap(next);
  }
  const double t = std::log(u);
  Complex pval = 0.0;
  for (int d = p; d >= 0; --d) pval = pval * t + poly[d];
  Complex value = std::exp((s - static_cast<double>(q)) * t) * pval;
  if (a < 0.0) {
    if (parity % 2 != 0) value = -value;  // sign(a)^L
    if (q % 2 != 0) value = -value;       // d_a = -d_u on the negative axis
  }
  double fact = 1.0;
  for (int k = 2; k <= p; ++k) fact *= k;
  for (int k = 2; k <= q; ++k) fact *= k;
  return value / fact;
}

struct LogValue {
  Complex phase{1.0, 0.0};  // unit-modulus-ish mantissa
  double log_mag = 0.0;
  bool zero = false;

  void mul(Complex v) {
    if (zero) return;
    const double m = std::abs(v);
    if (m == 0.0) {
      zero = true;
      return;
    }
    phase *= v / m;
    log_mag += std::log(m);
  }
  void mul_scaled(Complex mantissa, double log_scale) {
    if (zero) return;
    const double m = std::abs(mantissa);
    if (m == 0.0) {
      zero = true;
      return;
    }
    phase *= mantissa / m;
    log_mag += std::log(m) + log_scale;
  }
  void div(Complex v) {
    const double m = std::abs(v);
    if (m == 0.0) throw std::runtime_error("determinant ratio: division by vanishing Vandermonde");
    phase /= v / m;
    log_mag -= std::log(m);
  }
  Complex value() const { return zero ? Complex(0.0) : phase * std::exp(log_mag); }
};

// det[f(s_b; a_c)] / (Delta_red(s) Delta_red(a)) with clusters of nearly
// coincident nodes snapped to their mean and replaced by derivative rows /
// columns (the discrete l'Hopital). The ratio is invariant under permutations
// of the (s, L) pairs and of the a_c, so sorting for clustering is safe.
Complex det_ratio(const VectorXcd& s, const VectorXi& L, const VectorXd& a) {
  const int n = static_cast<int>(s.size());
  if (n == 0) return 1.0;

  std::vector<int> sidx(n), aidx(n);
  std::iota(sidx.begin(), sidx.end(), 0);
  std::iota(aidx.begin(), aidx.end(), 0);
  std::sort(sidx.begin(), sidx.end(), [&](int i, int j) {
    if (s[i].real() != s[j].real()) return s[i].real() < s[j].real();
    if (s[i].imag() != s[j].imag()) return s[i].imag() < s[j].imag();
    return L[i] < L[j];
  });
  std::sort(aidx.begin(), aidx.end(), [&](int i, int j) { return a[i] < a[j]; });

  const double a_scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double s_scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  const double s_tol = kFrequencyClusterTol * s_scale;
  const double a_tol = kSpectrumClusterTol * a_scale;

  std::vector<SCluster> sc;
  for (int k = 0; k < n; ++k) {
    const int i = sidx[k];
    if (!sc.empty() && std::abs(s[i] - s[sidx[k - 1]]) <= s_tol) {
      if (sc.back().parity != L[i])
        throw std::invalid_argument("phi: coincident frequencies with mixed parities are singular");
      sc.back().center += s[i];
      sc.back().size += 1;
    } else {
      sc.push_back({s[i], L[i], 1});
    }
  }
  std::vector<ACluster> ac;
  for (int k = 0; k < n; ++k) {
    const int i = aidx[k];
    if (!ac.empty() && std::abs(a[i] - a[aidx[k - 1]]) <= a_tol) {
      ac.back().center += a[i];
      ac.back().size += 1;
    } else {
      ac.push_back({a[i], 1});
    }
  }
  for (auto& c : sc) c.center /= static_cast<double>(c.size);
  for (auto& c : ac) c.center /= static_cast<double>(c.size);

  MatrixXcd mat(n, n);
  int row = 0;
  for (const auto& scl : sc) {
    for (int p = 0; p < scl.size; ++p, ++row) {
      int col = 0;
      for (const auto& acl : ac) {
        for (int q = 0; q < acl.size; ++q, ++col) {
          mat(row, col) = mixed_partial(scl.center, acl.center, scl.parity, p, q);
        }
      }
    }
  }

  LogValue out;
  ScaledDet det = det_scaled(std::move(mat));
  if (std::abs(det.mantissa) == 0.0) return 0.0;
  out.mul_scaled(det.mantissa, det.log_scale);
  // Reduced Vandermondes over pairs from different clusters, sorted order.
  for (size_t j = 1; j < sc.size(); ++j)
    for (size_t i = 0; i < j; ++i)
      for (int rep = 0; rep < sc[i].size * sc[j].size; ++rep) out.div(sc[j].center - sc[i].center);
  for (size_t j = 1; j < ac.size(); ++j)
    for (size_t i = 0; i < j; ++i)
      for (int rep = 0; rep < ac[i].size * ac[j].size; ++rep) out.div(Complex(ac[j].center - ac[i].center));
  return out.value();
}

int sign_pow(double x, long e) {
  if (x > 0.0) return 1;
  if (x == 0.0) return 0;
  return (e % 2 == 0) ? 1 : -1;
}

}  // namespace

Complex phi(const Frequency& freq, const SignedSpectrum& a) {
  const int n = freq.n();
  if (a.n() != n) throw std::invalid_argument("phi: frequency and spectrum size mismatch");
  for (int i = 0; i < n; ++i)
    if (a.values[i] == 0.0) throw std::invalid_argument("phi: zero eigenvalue");
  return std::exp(log_superfactorial(n)) * det_ratio(freq.s, freq.L, a.values);
}

Complex psi(const VectorXcd& s, const PositiveSpectrum& a) {
  // Equals Phi with L = L^(n) on positive spectra; all sign factors are 1.
  return phi(Frequency(s, VectorXi::Zero(s.size())), a.as_signed());
}

Complex normalization_C(int l, int n, const VectorXcd& s) {
  if (n < 0 || l < n) throw std::invalid_argument("normalization_C: need l >= n >= 0");
  if (s.size() != n) throw std::invalid_argument("normalization_C: s must have length n");
  Complex c = 1.0;
  for (int j = 1; j <= n; ++j) {
    c *= std::exp(log_factorial(l - j) - log_factorial(n - j));
    // Gamma(s_j + 1) / Gamma(s_j + l - n + 1) = 1 / prod_{k=1}^{l-n} (s_j + k)
    for (int k = 1; k <= l - n; ++k) {
      const Complex factor = s[j - 1] + static_cast<double>(k);
      if (std::abs(factor) < 1e-12) throw std::invalid_argument("normalization_C: pole in Gamma ratio");
      c /= factor;
    }
  }
  return c;
}

McEstimate phi_definition_mc(const Frequency& freq, const MatrixXcd& x, int samples, RngStream& rng) {
  const int n = freq.n();
  const int l = static_cast<int>(x.rows());
  if (x.cols() != l) throw std::invalid_argument("phi_definition_mc: x must be square");
  if (n > l) throw std::invalid_argument("phi_definition_mc: rank exceeds dimension");
  if (samples < 2) throw std::invalid_argument("phi_definition_mc: need at least 2 samples");

  // Exponents with the convention s_{n+1} = -1, L_{n+1} = -1.
  std::vector<Complex> es(n);
  std::vector<long> eL(n);
  for (int j = 0; j < n; ++j) {
    const Complex s_next = (j + 1 < n) ? freq.s[j + 1] : Complex(-1.0, 0.0);
    const long L_next = (j + 1 < n) ? freq.L[j + 1] : -1;
    es[j] = freq.s[j] - s_next - 1.0;
    eL[j] = freq.L[j] - L_next - 1;
  }

  Complex sum_n = 0.0, sum_d = 0.0;
  double sum_abs_n2 = 0.0, sum_abs_d2 = 0.0;
  Complex sum_cross = 0.0;

  for (int i = 0; i < samples; ++i) {
    MatrixXcd k = haar_unitary(l, rng);
    MatrixXcd w = k * x * k.adjoint();
    MatrixXcd p = k.leftCols(n);
    MatrixXcd wp = p * p.adjoint();

    Complex num = 1.0, den = 1.0;
    for (int j = 1; j <= n; ++j) {
      const double dj = w.topLeftCorner(j, j).determinant().real();
      const double dhat = wp.topLeftCorner(j, j).determinant().real();
      const double adj = std::abs(dj);
      if (adj == 0.0 || dhat <= 0.0) {
        num = 0.0;
        break;
      }
      num *= static_cast<double>(sign_pow(dj, eL[j - 1])) * std::exp(es[j - 1] * std::log(adj));
      den *= std::exp(es[j - 1] * std::log(dhat));
    }
    sum_n += num;
    sum_d += den;
    sum_abs_n2 += std::norm(num);
    sum_abs_d2 += std::norm(den);
    sum_cross += num * std::conj(den);
  }

  const double m = static_cast<double>(samples);
  const Complex mean_n = sum_n / m;
  const Complex mean_d = sum_d / m;
  if (std::abs(mean_d) == 0.0) throw std::runtime_error("phi_definition_mc: vanishing denominator mean");
  const Complex ratio = mean_n / mean_d;

  const double var_n = std::max(0.0, sum_abs_n2 / m - std::norm(mean_n));
  const double var_d = std::max(0.0, sum_abs_d2 / m - std::norm(mean_d));
  const Complex cov = sum_cross / m - mean_n * std::conj(mean_d);
  double var_ratio = (var_n + std::norm(ratio) * var_d - 2.0 * (std::conj(ratio) * cov).real()) /
                     (m * std::norm(mean_d));
  var_ratio = std::max(0.0, var_ratio);
  return {ratio, std::sqrt(var_ratio), samples};
}

namespace {

Complex nested_integral(const std::function<Complex(const VectorXd&)>& f, int dims, Domain domain,
                        const QuadratureConfig& cfg) {
  if (dims > 3) throw std::invalid_argument("nested_integral: more than 3 dimensions not supported");
  VectorXd point(dims);
  std::function<Complex(int)> level = [&](int d) -> Complex {
    if (d == dims) return f(point);
    // Inner integrals feed the outer integrand, so they run tighter.
    QuadratureConfig c = cfg;
    const double tighten = std::pow(100.0, d);
    c.abs_tol = std::max(cfg.abs_tol / tighten, 1e-14);
    c.rel_tol = std::max(cfg.rel_tol / tighten, 1e-12);
    auto integrand = [&, d](double x) -> Complex {
      point[d] = x;
      return level(d + 1);
    };
    return integrate_or_throw_c(integrand, domain, c);
  };
  return level(0);
}

}  // namespace

Complex spherical_transform_phi(const SpectralDensity& density, const Frequency& freq,
                                const QuadratureConfig& cfg) {
  const int n = freq.n();
  if (density.n != n) throw std::invalid_argument("spherical_transform_phi: dimension mismatch");
  auto f = [&](const VectorXd& a) -> Complex {
    const double pv = density.p(a);
    if (pv == 0.0) return {};
    for (int i = 0; i < n; ++i)
      if (a[i] == 0.0) return {};
    return pv * phi(freq, SignedSpectrum(a));
  };
  return nested_integral(f, n, density.support, cfg);
}

Complex spherical_transform_psi(const SpectralDensity& density, const VectorXcd& s,
                                const QuadratureConfig& cfg) {
  const int n = static_cast<int>(s.size());
  if (density.n != n) throw std::invalid_argument("spherical_transform_psi: dimension mismatch");
  auto f = [&](const VectorXd& a) -> Complex {
    const double pv = density.p(a);
    if (pv == 0.0) return {};
    return pv * psi(s, PositiveSpectrum(a));
  };
  return nested_integral(f, n, Domain::half_line, cfg);
}

ExtrapolationResult inverse_spherical_phi(const std::function<Complex(const Frequency&)>& transform,
                                          const SignedSpectrum& a, const std::vector<double>& eps_schedule,
                                          const QuadratureConfig& cfg) {
  const int n = a.n();
  const VectorXcd s_std = standard_s(n);

  auto freq_at = [&](const VectorXd& t, const VectorXi& L) {
    VectorXcd s(n);
    for (int b = 0; b < n; ++b) s[b] = s_std[b] + Complex(0.0, t[b]);
    return Frequency(s, L);
  };

  // Probe the transform magnitude along the diagonal to pick the truncation.
  auto probe = [&](double t) {
    VectorXd tv = VectorXd::Constant(n, t);
    double m = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      VectorXi L(n);
      for (int b = 0; b < n; ++b) L[b] = (mask >> b) & 1;
      m = std::max(m, std::abs(transform(freq_at(tv, L))));
    }
    return m;
  };
  double S = 12.0;
  while (S < 200.0 && probe(S) > std::max(cfg.abs_tol, 1e-12)) S *= 1.6;

  const double log_prefactor = -2.0 * log_factorial(n) - log_superfactorial(n) -
                               n * std::log(4.0 * M_PI);
  const double delta_a = vandermonde(a.values);

  QuadratureConfig box = cfg;
  box.abs_tol = std::max(cfg.abs_tol, 1e-9);
  box.rel_tol = std::max(cfg.rel_tol, 1e-7);

  std::vector<double> vals;
  vals.reserve(eps_schedule.size());
  for (double eps : eps_schedule) {
    Complex total = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      VectorXi L(n);
      for (int b = 0; b < n; ++b) L[b] = (mask >> b) & 1;
      auto f = [&](const VectorXd& t) -> Complex {
        VectorXcd sfreq(n);
        double zeta = 1.0;
        for (int b = 0; b < n; ++b) {
          sfreq[b] = s_std[b] + Complex(0.0, t[b]);
          zeta *= zeta_regularizer(eps * t[b], n);
        }
        MatrixXcd m(n, n);
        for (int b = 0; b < n; ++b) {
          const Complex expo = Complex(static_cast<double>(b - n), -t[b]);
          for (int c = 0; c < n; ++c) {
            Complex e = std::exp(expo * std::log(std::abs(a.values[c])));
            if (a.values[c] < 0 && L[b] == 1) e = -e;
            m(b, c) = e;
          }
        }
        return transform(Frequency(sfreq, L)) * zeta * vandermonde(sfreq) * m.determinant();
      };
      // n-fold integral over the box [-S, S]^n; inner levels run tighter.
      VectorXd point(n);
      std::function<Complex(int)> level = [&](int d) -> Complex {
        if (d == n) return f(point);
        QuadratureConfig c = box;
        const double tighten = std::pow(100.0, d);
        c.abs_tol = std::max(box.abs_tol / tighten, 1e-12);
        c.rel_tol = std::max(box.rel_tol / tighten, 1e-10);
        auto integrand = [&, d](double x) -> Complex {
          point[d] = x;
          return level(d + 1);
        };
        return integrate_or_throw_c(integrand, Domain::interval, c, -S, S);
      };
      total += level(0);
    }
    vals.push_back(delta_a * std::exp(log_prefactor) * total.real());
  }
  return extrapolate_eps(eps_schedule, vals, cfg.abs_tol);
}

Complex factorization_rhs(const VectorXcd& s, const VectorXi& L, int l, int m, int n1, int n2,
                          const PositiveSpectrum& a_g, const SignedSpectrum& a_x) {
  const int r = std::min(n1, n2);
  const int d = std::abs(n1 - n2);
  if (n1 > std::min(l, m) || n2 > m) throw std::invalid_argument("factorization_rhs: inconsistent profiles");
  if (static_cast<int>(s.size()) != r || a_g.n() != n1 || a_x.n() != n2)
    throw std::invalid_argument("factorization_rhs: size mismatch");

  VectorXcd s_ext(r + d);
  VectorXi L_ext(r + d);
  s_ext.head(r) = s.array() + static_cast<double>(d);
  s_ext.tail(d) = standard_s(d);
  for (int j = 0; j < r; ++j) L_ext[j] = (L[j] + d) % 2;
  L_ext.tail(d) = standard_L(d);

  const Complex c = normalization_C(m, r + d, s_ext);
  if (n1 <= n2) {
    return c * psi(s, a_g) * phi(Frequency(s_ext, L_ext), a_x);
  }
  return c * psi(s_ext, a_g) * phi(Frequency(s, L), a_x);
}

std::pair<Complex, Complex> rank_limit_check(int m, const VectorXcd& s_head, const VectorXd& a_head,
                                             double eps_s, double eps_a) {
  const int n = static_cast<int>(s_head.size()) + 1;
  if (a_head.size() + 1 != n) throw std::invalid_argument("rank_limit_check: size mismatch");

  VectorXcd s(n);
  s.head(n - 1) = s_head;
  s[n - 1] = eps_s;
  VectorXd a(n);
  a.head(n - 1) = a_head;
  a[n - 1] = eps_a;
  const Complex lhs = normalization_C(m, n, s) * psi(s, PositiveSpectrum(a));

  const VectorXcd s_shift = s_head.array() - 1.0;
  const Complex rhs = normalization_C(m, n - 1, s_shift) * psi(s_shift, PositiveSpectrum(a_head));
  return {lhs, rhs};
}

}  // namespace polyaprod
