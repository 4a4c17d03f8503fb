#include "polyaprod/products.hpp"

#include <cmath>

#include "polyaprod/quadrature.hpp"

namespace polyaprod {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  const double b = e >= 0 ? x : 1.0 / x;
  for (int i = 0; i < std::abs(e); ++i) r *= b;
  return r;
}

Complex ipow(Complex x, int e) {
  Complex r = 1.0;
  const Complex b = e >= 0 ? x : 1.0 / x;
  for (int i = 0; i < std::abs(e); ++i) r *= b;
  return r;
}

double mellin_at_int(const PolyaWeight& w, int j) {
  const double v = w.mellin(Complex(j)).real();
  if (!std::isfinite(v) || v == 0.0) throw std::invalid_argument("M omega at integer argument is singular");
  return v;
}

// log of prod_{j=1}^{r} (m-j)! / ((m-n1)! (n1-j)! M omega(n1-j+1))
double log_prefactor(const ProductSpec& spec) {
  const int r = spec.rank();
  double lp = 0.0;
  for (int j = 1; j <= r; ++j) {
    lp += log_factorial(spec.m - j) - log_factorial(spec.m - spec.n1) - log_factorial(spec.n1 - j);
    lp -= std::log(mellin_at_int(spec.omega, spec.n1 - j + 1));
  }
  return lp;
}

// Coefficient table T_{b,c} = e_{top-b}(-a_{excl c}) / prod_{h != c}(a_c - a_h),
// rows b = 1..rows, columns c over the fixed spectrum.
MatrixXd resolvent_table(const VectorXd& a, int rows) {
  const int n2 = static_cast<int>(a.size());
  MatrixXd t(rows, n2);
  for (int c = 0; c < n2; ++c) {
    VectorXd excl(n2 - 1);
    double denom = 1.0;
    int k = 0;
    for (int h = 0; h < n2; ++h) {
      if (h == c) continue;
      excl[k++] = a[h];
      denom *= a[c] - a[h];
    }
    for (int b = 1; b <= rows; ++b) t(b - 1, c) = elementary_sym_direct(excl, rows - b) / denom;
  }
  return t;
}

double min_gap(const VectorXd& v) {
  VectorXd s = v;
  std::sort(s.data(), s.data() + s.size());
  double g = std::numeric_limits<double>::infinity();
  for (int i = 1; i < s.size(); ++i) g = std::min(g, s[i] - s[i - 1]);
  return g;
}

}  // namespace

void ProductSpec::validate() const {
  if (n1 < 1 || n2 < 1 || l < 1 || m < 1) throw std::invalid_argument("ProductSpec: ranks/dims must be >= 1");
  if (n1 > std::min(l, m)) throw std::invalid_argument("ProductSpec: need n1 <= min(l, m)");
  if (n2 > m) throw std::invalid_argument("ProductSpec: need n2 <= m");
  if (std::holds_alternative<FixedSpectrum>(x)) {
    if (std::get<FixedSpectrum>(x).a.n() != n2)
      throw std::invalid_argument("ProductSpec: fixed spectrum must have n2 entries");
  } else {
    const auto& ens = std::get<PolynomialEnsembleH>(x);
    if (ens.n != n2 || ens.m != m)
      throw std::invalid_argument("ProductSpec: ensemble rank/ambient must match (n2, m)");
  }
}

const FixedSpectrum& ProductSpec::fixed() const {
  if (!std::holds_alternative<FixedSpectrum>(x))
    throw std::invalid_argument("ProductSpec: x is not a fixed spectrum");
  return std::get<FixedSpectrum>(x);
}

const PolynomialEnsembleH& ProductSpec::ensemble() const {
  if (!std::holds_alternative<PolynomialEnsembleH>(x))
    throw std::invalid_argument("ProductSpec: x is not a polynomial ensemble");
  return std::get<PolynomialEnsembleH>(x);
}

RankBranch check_branch(const ProductSpec& spec, RankBranch branch) {
  if (branch == RankBranch::geq && spec.n1 < spec.n2)
    throw std::invalid_argument("branch geq requires n1 >= n2");
  if (branch == RankBranch::less && spec.n1 > spec.n2)
    throw std::invalid_argument("branch less requires n1 <= n2");
  return branch;
}

TildeWeight::TildeWeight(const ProductSpec& spec, RankBranch branch, QuadratureConfig cfg)
    : branch_(branch), n1_(spec.n1), n2_(spec.n2), p_(spec.m - spec.n1), omega_(spec.omega), cfg_(cfg) {
  spec.validate();
  check_branch(spec, branch);
  power_ = branch == RankBranch::geq ? n1_ - n2_ : n2_ - n1_;

  const WeightKind kind = omega_.kind();
  if (kind == WeightKind::projection || kind == WeightKind::dirac_unit) {
    const auto& wp = omega_.params();
    const int j_w = kind == WeightKind::projection ? wp.m - wp.l : 0;
    const int q = kind == WeightKind::projection ? wp.M - wp.m : 0;
    if (j_w == p_) {
      beta_k_ = p_ + q;
      if (beta_k_ == 0) {
        distributional_ = true;
      } else {
        beta_core_ = true;
        beta_c_ = std::exp(log_factorial(p_) + log_factorial(q) - log_factorial(p_ + q));
      }
      return;
    }
    if (omega_.distributional())
      throw std::invalid_argument(
          "TildeWeight: distributional projection weight with mismatched geometry (m - l != m - n1)");
    // Differentiable projection weight off the telescoping geometry: fall
    // through to the quadrature core.
  }
  if (omega_.distributional())
    throw std::invalid_argument("TildeWeight: distributional weight requires projection geometry");
}

double TildeWeight::core(double u) const {
  if (u <= 0.0) return 0.0;
  if (distributional_) throw std::logic_error("TildeWeight::core: weight is a point mass");
  if (beta_core_) {
    if (u >= 1.0) return 0.0;
    return beta_c_ * beta_k_ * std::pow(1.0 - u, beta_k_ - 1);
  }
  if (p_ == 0) return omega_(u);  // inner integral collapses at a' = 1
  auto integrand = [this, u](double v) {
    const double w = omega_(u * std::exp(v));
    if (w == 0.0) return 0.0;
    return p_ * std::pow(1.0 - std::exp(-v), p_ - 1) * w;
  };
  return integrate_or_throw(integrand, Domain::half_line, cfg_);
}

double TildeWeight::operator()(double a_tilde, double a) const {
  if (a == 0.0 || a_tilde * a <= 0.0) return 0.0;
  const double u = a_tilde / a;
  const double c = core(u);
  if (c == 0.0) return 0.0;
  if (branch_ == RankBranch::geq) return ipow(u, n1_ - n2_) * c / std::abs(a);
  return ipow(a, n2_ - n1_) * c / std::abs(a);
}

double weight_tilde_geq(const ProductSpec& spec, double a_tilde, double a, const QuadratureConfig& cfg) {
  if (spec.n1 < spec.n2) throw std::invalid_argument("weight_tilde_geq: requires n1 >= n2");
  return TildeWeight(spec, RankBranch::geq, cfg)(a_tilde, a);
}

double weight_tilde_less(const ProductSpec& spec, double a_tilde, double a, const QuadratureConfig& cfg) {
  if (spec.n1 > spec.n2) throw std::invalid_argument("weight_tilde_less: requires n1 <= n2");
  return TildeWeight(spec, RankBranch::less, cfg)(a_tilde, a);
}

double elementary_sym_direct(const VectorXd& a_excluded, int order) {
  const int n = static_cast<int>(a_excluded.size());
  if (order < 0 || order > n) throw std::invalid_argument("elementary_sym: order out of range");
  // Expand prod_h (z - a_h); e_o(-a) is the z^{n-o} coefficient.
  std::vector<double> coeff(n + 1, 0.0);
  coeff[0] = 1.0;
  for (int h = 0; h < n; ++h)
    for (int k = h + 1; k-- > 0;) {
      coeff[k + 1] += coeff[k];
      coeff[k] *= -a_excluded[h];
    }
  // After the loop coeff[k] holds the z^k coefficient.
  return coeff[n - order];
}

double elementary_sym(const VectorXd& a_excluded, int order, const QuadratureConfig& cfg) {
  const int n = static_cast<int>(a_excluded.size());
  if (order < 0 || order > n) throw std::invalid_argument("elementary_sym: order out of range");
  const int n2 = n + 1;
  const double radius = std::max(1.0, a_excluded.size() ? a_excluded.cwiseAbs().maxCoeff() : 1.0);
  auto f = [&](Complex z) -> Complex {
    Complex prod = 1.0;
    for (int h = 0; h < n; ++h) prod *= z - a_excluded[h];
    return prod * ipow(z, -(n2 - order));
  };
  return contour_origin(f, radius, cfg).real();
}

namespace {

double jpdf_fixed_distinct(const ProductSpec& spec, const SignedSpectrum& a_tilde, RankBranch branch,
                           const QuadratureConfig& cfg) {
  const int r = spec.rank();
  const VectorXd& a = spec.fixed().a.values;
  const TildeWeight tilde(spec, branch, cfg);
  if (tilde.distributional())
    throw std::invalid_argument("jpdf_fixed: point-mass weight keeps the statistics of x (no density)");

  MatrixXd mat(r, r);
  if (branch == RankBranch::geq) {
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) mat(b, c) = tilde(a_tilde.values[b], a[c]);
  } else {
    const MatrixXd table = resolvent_table(a, spec.n1);
    MatrixXd w(r, spec.n2);
    for (int d = 0; d < r; ++d)
      for (int c = 0; c < spec.n2; ++c) w(d, c) = tilde(a_tilde.values[d], a[c]);
    mat = table * w.transpose();  // mat(b, d) = sum_c table(b, c) w(d, c)
  }
  ScaledDet det = det_scaled(std::move(mat));
  if (std::abs(det.mantissa) == 0.0) return 0.0;

  double log_pref = log_prefactor(spec) - log_factorial(r);
  double sign = 1.0;
  if (branch == RankBranch::geq) {
    const double da = vandermonde(a);
    log_pref -= std::log(std::abs(da));
    if (da < 0) sign = -sign;
  }
  const double dt = vandermonde(a_tilde.values);
  return sign * dt * det.mantissa.real() * std::exp(det.log_scale + log_pref);
}

}  // namespace

double jpdf_fixed(const ProductSpec& spec, const SignedSpectrum& a_tilde, RankBranch branch,
                  const QuadratureConfig& cfg) {
  spec.validate();
  check_branch(spec, branch);
  if (a_tilde.n() != spec.rank()) throw std::invalid_argument("jpdf_fixed: a~ must have rank entries");

  const VectorXd& a = spec.fixed().a.values;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (min_gap(a) > 1e-6 * scale) return jpdf_fixed_distinct(spec, a_tilde, branch, cfg);

  // Epsilon-fan around the degenerate spectrum, Richardson-extrapolated
  // (the density is symmetric in a, so the expansion is even in eps).
  const std::vector<double> fan = {1e-3 * scale, 5e-4 * scale, 2.5e-4 * scale};
  std::vector<double> vals;
  for (double eps : fan) {
    VectorXd pert = a;
    std::vector<int> idx(a.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return a[i] < a[j]; });
    // Spread members of each near-tie cluster symmetrically.
    int start = 0;
    while (start < pert.size()) {
      int end = start;
      while (end + 1 < pert.size() && a[idx[end + 1]] - a[idx[end]] <= 1e-6 * scale) ++end;
      const int k = end - start + 1;
      for (int i = 0; i < k; ++i) pert[idx[start + i]] += eps * (i - 0.5 * (k - 1));
      start = end + 1;
    }
    ProductSpec fanned = spec;
    fanned.x = FixedSpectrum{SignedSpectrum(pert)};
    vals.push_back(jpdf_fixed_distinct(fanned, a_tilde, branch, cfg));
  }
  auto ext = extrapolate_eps(fan, vals, cfg.abs_tol);
  return ext.value;
}

namespace {

struct QFamily {
  std::vector<std::function<double(double)>> q;
};

QFamily make_q_family(const ProductSpec& spec, RankBranch branch, const QuadratureConfig& cfg) {
  const int r = spec.rank();
  const VectorXd a = spec.fixed().a.values;
  if (min_gap(a) <= 1e-6 * std::max(1.0, a.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("biorth_fixed: fixed spectrum degenerate beyond perturbation tolerance");
  auto tilde = std::make_shared<TildeWeight>(spec, branch, cfg);
  auto table = std::make_shared<MatrixXd>(resolvent_table(a, r));  // rows: e_{r-b}, b = 1..r

  QFamily fam;
  for (int j = 0; j < r; ++j) {
    // q_j uses e_{r-j-1}, which is row (j+1) of the table (top = e_{r-1}).
    double log_c;
    if (branch == RankBranch::geq) {
      log_c = log_factorial(spec.m + j - spec.n2) - log_factorial(spec.m - spec.n1) -
              log_factorial(spec.n1 + j - spec.n2) -
              std::log(mellin_at_int(spec.omega, spec.n1 + j - spec.n2 + 1));
    } else {
      log_c = log_factorial(spec.m + j - spec.n1) - log_factorial(spec.m - spec.n1) -
              log_factorial(j) - std::log(mellin_at_int(spec.omega, j + 1));
    }
    const double c = std::exp(log_c);
    fam.q.push_back([tilde, table, a, j, c](double at) {
      double sum = 0.0;
      for (int col = 0; col < a.size(); ++col) sum += (*table)(j, col) * (*tilde)(at, a[col]);
      return c * sum;
    });
  }
  return fam;
}

}  // namespace

double BiorthSystem::p(int j, double x) const {
  const VectorXd& c = p_coeffs.at(j);
  double v = 0.0;
  for (int i = static_cast<int>(c.size()); i-- > 0;) v = v * x + c[i];
  return v;
}

Complex BiorthSystem::p(int j, Complex x) const {
  const VectorXd& c = p_coeffs.at(j);
  Complex v = 0.0;
  for (int i = static_cast<int>(c.size()); i-- > 0;) v = v * x + c[i];
  return v;
}

BiorthSystem biorth_fixed(const ProductSpec& spec, RankBranch branch, const QuadratureConfig& cfg) {
  spec.validate();
  check_branch(spec, branch);
  const int r = spec.rank();
  BiorthSystem sys;
  sys.r = r;
  for (int j = 0; j < r; ++j) {
    VectorXd c = VectorXd::Zero(j + 1);
    c[j] = 1.0;
    sys.p_coeffs.push_back(c);
  }
  sys.q = make_q_family(spec, branch, cfg).q;
  return sys;
}

Kernel kernel_from_biorth(const BiorthSystem& sys) {
  Kernel k;
  k.r = sys.r;
  auto copy = std::make_shared<BiorthSystem>(sys);
  k.eval_c = [copy](Complex a1, double a2) -> Complex {
    Complex sum = 0.0;
    for (int j = 0; j < copy->r; ++j) sum += copy->p(j, a1) * copy->q[j](a2);
    return sum;
  };
  return k;
}

Kernel kernel_fixed(const ProductSpec& spec, RankBranch branch, const QuadratureConfig& cfg) {
  return kernel_from_biorth(biorth_fixed(spec, branch, cfg));
}

BiorthSystem biorth_from_ensemble(const PolynomialEnsembleH& ens) {
  const int n = ens.n;
  MatrixXcd moments(n, n);  // A_{bc} = int x^{b-1} w_c = M w_c(b, b-1)
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) moments(b, c) = ens.mellin(c + 1, Complex(b + 1), b % 2);
  MatrixXcd inv = moments.inverse();

  BiorthSystem sys;
  sys.r = n;
  auto weights = std::make_shared<std::vector<std::function<double(double)>>>(ens.w);
  for (int j = 0; j < n; ++j) {
    VectorXd c = VectorXd::Zero(j + 1);
    c[j] = 1.0;
    sys.p_coeffs.push_back(c);
    VectorXcd col = inv.col(j);
    sys.q.push_back([weights, col](double x) {
      Complex sum = 0.0;
      for (int cidx = 0; cidx < col.size(); ++cidx) sum += col[cidx] * (*weights)[cidx](x);
      return sum.real();
    });
  }
  return sys;
}

namespace {

// int omega~(a~ | a) f(a) da over the sign-matched half axis.
double integrate_against_tilde(const TildeWeight& tilde, double a_tilde,
                               const std::function<double(double)>& f, const QuadratureConfig& cfg) {
  const double sgn = a_tilde > 0 ? 1.0 : -1.0;
  auto integrand = [&](double x) {
    const double a = sgn * x;
    const double w = tilde(a_tilde, a);
    if (w == 0.0) return 0.0;
    return w * f(a);
  };
  return integrate_or_throw(integrand, Domain::half_line, cfg);
}

}  // namespace

double jpdf_random(const ProductSpec& spec, const SignedSpectrum& a_tilde, RankBranch branch,
                   const QuadratureConfig& cfg, const BiorthSystem* source) {
  spec.validate();
  check_branch(spec, branch);
  const int r = spec.rank();
  if (a_tilde.n() != r) throw std::invalid_argument("jpdf_random: a~ must have rank entries");
  const auto& ens = spec.ensemble();
  const TildeWeight tilde(spec, branch, cfg);

  const double log_pref = log_prefactor(spec) - log_factorial(r);
  const double dt = vandermonde(a_tilde.values);

  auto tilde_against = [&](double at, const std::function<double(double)>& f) {
    if (tilde.distributional()) {
      // omega~ is a point mass at a = a~.
      if (branch == RankBranch::geq) return f(at);
      return ipow(at, spec.n2 - spec.n1) * f(at);
    }
    return integrate_against_tilde(tilde, at, f, cfg);
  };

  if (source != nullptr) {
    if (source->r != spec.n2) throw std::invalid_argument("jpdf_random: source system must have n2 functions");
    MatrixXd mat(r, r);
    if (branch == RankBranch::geq) {
      for (int b = 0; b < r; ++b)
        for (int c = 0; c < r; ++c) mat(b, c) = tilde_against(a_tilde.values[b], source->q[c]);
    } else {
      for (int d = 0; d < r; ++d)
        for (int c = 0; c < r; ++c)
          mat(c, d) = tilde_against(a_tilde.values[d], source->q[spec.n2 - spec.n1 + c]);
    }
    ScaledDet det = det_scaled(std::move(mat));
    return dt * det.mantissa.real() * std::exp(det.log_scale + log_pref);
  }

  MatrixXcd norm(spec.n2, spec.n2);
  for (int b = 0; b < spec.n2; ++b)
    for (int c = 0; c < spec.n2; ++c) norm(b, c) = ens.mellin(b + 1, Complex(c + 1), c % 2);
  ScaledDet den = det_scaled(std::move(norm));
  if (std::abs(den.mantissa) == 0.0) throw std::invalid_argument("jpdf_random: singular normalization");

  MatrixXcd num;
  if (branch == RankBranch::geq) {
    num.resize(r, r);
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) num(b, c) = tilde_against(a_tilde.values[b], ens.w[c]);
  } else {
    // Block form: moment rows on top of the omega~-integrated rows.
    num.resize(spec.n2, spec.n2);
    for (int b = 0; b < spec.n2 - spec.n1; ++b)
      for (int c = 0; c < spec.n2; ++c) num(b, c) = ens.mellin(c + 1, Complex(b + 1), b % 2);
    for (int d = 0; d < r; ++d)
      for (int c = 0; c < spec.n2; ++c)
        num(spec.n2 - spec.n1 + d, c) = tilde_against(a_tilde.values[d], ens.w[c]);
  }
  ScaledDet dn = det_scaled(std::move(num));
  const Complex v = dt * dn.mantissa * std::exp(dn.log_scale - den.log_scale + log_pref) / den.mantissa;
  return v.real();
}

double chi_coefficient(const ProductSpec& spec, RankBranch branch, int h) {
  if (branch == RankBranch::geq) {
    const int j = h;
    if (j < 0 || j > spec.n2 - 1 || spec.n1 + j - spec.n2 < 0) return 0.0;
    return std::exp(log_factorial(spec.m + j - spec.n2) - log_factorial(spec.m - spec.n1) -
                    log_factorial(spec.n1 + j - spec.n2)) /
           mellin_at_int(spec.omega, spec.n1 + j - spec.n2 + 1);
  }
  const int j = h - (spec.n2 - spec.n1);
  if (j < 0 || j > spec.n1 - 1) return 0.0;
  return std::exp(log_factorial(spec.m + j - spec.n1) - log_factorial(spec.m - spec.n1) -
                  log_factorial(j)) /
         mellin_at_int(spec.omega, j + 1);
}

std::pair<Complex, Complex> chi_polynomials(const ProductSpec& spec, Complex z) {
  spec.validate();
  Complex geq = 0.0, less = 0.0;
  for (int j = 0; j <= spec.n2 - 1; ++j) geq += chi_coefficient(spec, RankBranch::geq, j) * ipow(z, j);
  for (int h = spec.n2 - spec.n1; h <= spec.n2 - 1; ++h)
    less += chi_coefficient(spec, RankBranch::less, h) * ipow(z, h);
  return {geq, less};
}

namespace {

// Laurent coefficient of chi at z^h via the contour, checked across two radii
// against the closed-form coefficient.
void check_contour_stability(const ProductSpec& spec, RankBranch branch, const QuadratureConfig& cfg) {
  auto chi = [&](Complex z) {
    auto [g, l] = chi_polynomials(spec, z);
    return branch == RankBranch::geq ? g : l;
  };
  for (int h = std::max(0, spec.n2 - spec.n1); h < spec.n2; ++h) {
    const double expect = chi_coefficient(spec, branch, h);
    for (double radius : {1.0, 2.0}) {
      auto f = [&](Complex z) { return chi(z) * ipow(z, -(h + 1)); };
      const double got = contour_origin(f, radius, cfg).real();
      if (std::abs(got - expect) > 1e-8 * std::max(1.0, std::abs(expect)))
        throw std::runtime_error("transform_biorth: contour coefficients unstable across radii");
    }
  }
}

}  // namespace

BiorthSystem transform_biorth(const ProductSpec& spec, const BiorthSystem& source, RankBranch branch,
                              const QuadratureConfig& cfg) {
  spec.validate();
  check_branch(spec, branch);
  if (source.r != spec.n2) throw std::invalid_argument("transform_biorth: source must have n2 functions");
  check_contour_stability(spec, branch, cfg);

  const int r = spec.rank();
  const int shift = spec.n2 - spec.n1;  // 0 in the geq branch
  BiorthSystem out;
  out.r = r;
  for (int j = 0; j < r; ++j) {
    if (branch == RankBranch::geq) {
      const VectorXd& c = source.p_coeffs.at(j);
      VectorXd ct = c;
      for (int h = 0; h < ct.size(); ++h) ct[h] *= chi_coefficient(spec, branch, h);
      out.p_coeffs.push_back(ct);
    } else {
      const VectorXd& c = source.p_coeffs.at(shift + j);
      VectorXd ct = VectorXd::Zero(j + 1);
      for (int h = shift; h < c.size(); ++h) ct[h - shift] = c[h] * chi_coefficient(spec, branch, h);
      out.p_coeffs.push_back(ct);
    }
  }

  auto tilde = std::make_shared<TildeWeight>(spec, branch, cfg);
  for (int j = 0; j < r; ++j) {
    auto qsrc = source.q.at(branch == RankBranch::geq ? j : shift + j);
    if (tilde->distributional()) {
      if (branch == RankBranch::geq) {
        out.q.push_back(qsrc);
      } else {
        const int pw = shift;
        out.q.push_back([qsrc, pw](double at) { return ipow(at, pw) * qsrc(at); });
      }
    } else {
      QuadratureConfig qcfg = cfg;
      out.q.push_back([tilde, qsrc, qcfg](double at) {
        return integrate_against_tilde(*tilde, at, qsrc, qcfg);
      });
    }
  }
  return out;
}

Kernel transform_kernel(const ProductSpec& spec, const Kernel& source, RankBranch branch,
                        const QuadratureConfig& cfg) {
  spec.validate();
  check_branch(spec, branch);
  if (source.r != spec.n2) throw std::invalid_argument("transform_kernel: source must have rank n2");
  check_contour_stability(spec, branch, cfg);

  const int r = spec.rank();
  const int shift = spec.n2 - spec.n1;
  auto tilde = std::make_shared<TildeWeight>(spec, branch, cfg);
  auto src = std::make_shared<Kernel>(source);
  const auto s = spec;

  Kernel out;
  out.r = r;
  out.eval_c = [tilde, src, s, branch, shift, cfg](Complex a1, double a2) -> Complex {
    // Half-line integral over a of omega~(a|1)-weighted kernel values.
    auto a_integral = [&](Complex z) -> Complex {
      const Complex arg1 = a1 / z;
      if (tilde->distributional()) return src->eval_c(arg1, a2);
      auto f = [&](double a) -> Complex {
        const double w = tilde->core(a);
        if (w == 0.0) return {};
        const double jac = branch == RankBranch::geq ? ipow(a, s.n1 - s.n2) / a : 1.0 / ipow(a, shift + 1);
        return w * jac * src->eval_c(arg1, a2 / a);
      };
      return integrate_or_throw_c(f, Domain::half_line, cfg);
    };
    const double radius = std::max(1.0, std::abs(a1));
    auto g = [&](Complex z) -> Complex {
      auto [cg, cl] = chi_polynomials(s, z);
      const Complex chi = branch == RankBranch::geq ? cg : cl;
      return chi * a_integral(z) / z;
    };
    Complex v = contour_origin(g, radius, cfg);
    if (branch == RankBranch::less) v *= ipow(Complex(a2) / a1, shift);
    return v;
  };
  return out;
}

double correlation(const Kernel& k, const VectorXd& points, int kappa) {
  if (kappa < 1 || kappa > points.size()) throw std::invalid_argument("correlation: bad kappa");
  MatrixXd m(kappa, kappa);
  for (int b = 0; b < kappa; ++b)
    for (int c = 0; c < kappa; ++c) m(b, c) = k(points[b], points[c]);
  return m.determinant();
}

}  // namespace polyaprod
