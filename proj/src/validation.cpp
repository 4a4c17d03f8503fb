#include "polyaprod/validation.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "polyaprod/montecarlo.hpp"

namespace polyaprod {

namespace {

struct Worst {
  double value = 0.0;
  std::string where;

  void update(double v, const std::string& w) {
    if (v > value) {
      value = v;
      where = w;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// Flaky-test policy: one re-run on a shifted seed, hard fail on both.
CheckResult with_retry(const std::string& name, const std::function<CheckResult(std::uint64_t)>& fn,
                       std::uint64_t seed) {
  CheckResult first = fn(seed);
  if (first.pass) return first;
  CheckResult second = fn(seed + 1000003);
  second.name = name;
  second.detail += " [retried: first run " + fmt(first.metric) + "]";
  return second;
}

double sigma_distance(Complex got, Complex expected, double stderr_est) {
  const double err = std::abs(got - expected);
  return err / std::max(stderr_est, 1e-300);
}

VectorXcd random_admissible_s(int n, RngStream& rng) {
  // Re(s_j - s_{j+1}) >= 1 with s_{n+1} = -1 (so Re s_n >= 0).
  VectorXcd s(n);
  double base = 0.1 + 0.7 * rng.uniform();
  for (int j = n - 1; j >= 0; --j) {
    s[j] = Complex(base, 0.6 * rng.uniform() - 0.3);
    base += 1.05 + 0.8 * rng.uniform();
  }
  return s;
}

SignedSpectrum random_signed_spectrum(int n, RngStream& rng, bool mixed_signs = true) {
  VectorXd a(n);
  for (int i = 0; i < n; ++i) {
    double v = 0.4 + 1.8 * rng.uniform();
    if (mixed_signs && rng.uniform() < 0.5) v = -v;
    a[i] = v;
  }
  return SignedSpectrum(a);
}

}  // namespace

// ---------------------------------------------------------------------------
// 1. phi_definition_mc vs C_{l,n}(s) Phi closed forms
// ---------------------------------------------------------------------------

CheckResult check_definition_vs_closed_form(std::uint64_t seed) {
  auto run = [](std::uint64_t s) {
    RngStream rng(s);
    Worst worst;
    const int samples = 100000;
    const std::pair<int, int> cases[] = {{1, 1}, {1, 2}, {2, 2}, {2, 3}};
    for (auto [n, l] : cases) {
      for (int rep = 0; rep < 5; ++rep) {
        RngStream draw = rng.split(n * 100 + l * 10 + rep);
        VectorXcd sv = random_admissible_s(n, draw);
        VectorXi L(n);
        for (int j = 0; j < n; ++j) L[j] = draw.uniform() < 0.5 ? 1 : 0;
        Frequency freq(sv, L);
        SignedSpectrum a = random_signed_spectrum(n, draw);
        MatrixXcd x = embed_spectrum(a.values, l);

        RngStream mc_rng = draw.split(7);
        McEstimate mc = phi_definition_mc(freq, x, samples, mc_rng);
        const Complex closed = normalization_C(l, n, sv) * phi(freq, a);
        worst.update(sigma_distance(mc.value, closed, mc.stderr_est),
                     "(n=" + std::to_string(n) + ",l=" + std::to_string(l) + ")");
      }
    }
    CheckResult r;
    r.name = "definition-vs-closed-form";
    r.metric = worst.value;
    r.pass = worst.value <= 3.0;
    r.detail = "worst " + fmt(worst.value) + " sigma at " + worst.where;
    return r;
  };
  return with_retry("definition-vs-closed-form", run, seed);
}

// ---------------------------------------------------------------------------
// 2. Haar factorization, MC left side vs analytic right side
// ---------------------------------------------------------------------------

namespace {

McEstimate factorization_lhs_mc(const VectorXcd& s, const VectorXi& L, const MatrixXcd& g,
                                const MatrixXcd& x, int r, int samples, RngStream& rng) {
  Complex sum = 0.0;
  double sum_abs2 = 0.0;
  const int m = static_cast<int>(x.rows());
  for (int i = 0; i < samples; ++i) {
    MatrixXcd k = haar_unitary(m, rng);
    MatrixXcd w = g * k * x * k.adjoint() * g.adjoint();
    VectorXd ev = hermitian_eigenvalues(0.5 * (w + w.adjoint()));
    std::vector<double> kept(ev.data(), ev.data() + ev.size());
    std::sort(kept.begin(), kept.end(), [](double p, double q) { return std::abs(p) > std::abs(q); });
    kept.resize(r);
    const Complex v = phi(Frequency(s, L), SignedSpectrum(Eigen::Map<VectorXd>(kept.data(), r)));
    sum += v;
    sum_abs2 += std::norm(v);
  }
  const double mcount = samples;
  const Complex mean = sum / mcount;
  const double var = std::max(0.0, sum_abs2 / mcount - std::norm(mean));
  return {mean, std::sqrt(var / mcount), samples};
}

}  // namespace

CheckResult check_factorization(std::uint64_t seed) {
  auto run = [](std::uint64_t sd) {
    RngStream rng(sd);
    Worst worst;
    const int samples = 100000;
    struct Pattern {
      int l, m, n1, n2;
    };
    const Pattern patterns[] = {{2, 2, 2, 2}, {3, 3, 3, 2}, {2, 3, 2, 3}, {3, 2, 2, 2}};
    int idx = 0;
    for (const auto& p : patterns) {
      RngStream draw = rng.split(100 + idx++);
      const int r = std::min(p.n1, p.n2);
      VectorXcd s = random_admissible_s(r, draw);
      VectorXi L(r);
      for (int j = 0; j < r; ++j) L[j] = draw.uniform() < 0.5 ? 1 : 0;

      VectorXd ag(p.n1);
      for (int i = 0; i < p.n1; ++i) ag[i] = 0.4 + 1.6 * draw.uniform();
      PositiveSpectrum a_g{ag};
      SignedSpectrum a_x = random_signed_spectrum(p.n2, draw);

      MatrixXcd g = embed_singular_values(a_g.values, p.l, p.m);
      MatrixXcd x = embed_spectrum(a_x.values, p.m);

      RngStream mc_rng = draw.split(11);
      McEstimate lhs = factorization_lhs_mc(s, L, g, x, r, samples, mc_rng);
      Complex rhs = factorization_rhs(s, L, p.l, p.m, p.n1, p.n2, a_g, a_x);
      worst.update(sigma_distance(lhs.value, rhs, lhs.stderr_est),
                   "(l,m,n1,n2)=(" + std::to_string(p.l) + "," + std::to_string(p.m) + "," +
                       std::to_string(p.n1) + "," + std::to_string(p.n2) + ")");
    }
    CheckResult r;
    r.name = "factorization";
    r.metric = worst.value;
    r.pass = worst.value <= 3.0;
    r.detail = "worst " + fmt(worst.value) + " sigma at " + worst.where;
    return r;
  };
  return with_retry("factorization", run, seed);
}

// ---------------------------------------------------------------------------
// 3. Transform round-trips (Mellin and n = 2 spherical)
// ---------------------------------------------------------------------------

CheckResult check_transform_round_trips(std::uint64_t) {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-11;
  cfg.rel_tol = 1e-10;
  Worst worst_mellin;

  struct Case {
    std::function<Complex(Complex, int)> Mf;
    std::function<double(double)> f;
    std::vector<double> points;
    std::string name;
  };
  std::vector<Case> cases;
  // Half-line weight: both parity channels carry Mf_+(s) = Gamma(s).
  cases.push_back({[](Complex s, int) { return gamma_c(s); },
                   [](double x) { return x > 0 ? std::exp(-x) : 0.0; },
                   {1.0, 2.0},
                   "exp-half-line"});
  // f(x) = |x| e^{-|x|}: even, so only the L = 0 channel contributes.
  cases.push_back({[](Complex s, int L) { return L == 0 ? 2.0 * gamma_c(s + 1.0) : Complex(0.0); },
                   [](double x) { return std::abs(x) * std::exp(-std::abs(x)); },
                   {-2.0, 2.0},
                   "abs-exp"});
  cases.push_back({[](Complex s, int L) { return L == 0 ? gamma_c(0.5 * s) : Complex(0.0); },
                   [](double x) { return std::exp(-x * x); },
                   {0.7, -1.2},
                   "gaussian"});
  // The half-line Mellin pair: Mf(s, L) = Mf_+(s) for both channels.
  for (const auto& c : cases) {
    for (double x : c.points) {
      auto inv = inverse_mellin(c.Mf, x, kDefaultEpsSchedule, cfg);
      worst_mellin.update(std::abs(inv.value - c.f(x)), c.name + "@x=" + fmt(x));
    }
  }

  // n = 2 Ginibre Polya density round-trip through the spherical transform.
  const PolyaWeight omega = PolyaWeight::make(WeightKind::ginibre, {});
  auto transform = [&](const Frequency& f) { return spherical_transform_polya(omega, 2, f.s); };
  Worst worst_sph;
  const double spectra[][2] = {{0.7, 1.9}, {0.5, 1.1}, {1.3, 2.6}, {0.9, 3.2}, {1.8, 2.3}};
  QuadratureConfig scfg;
  scfg.abs_tol = 1e-8;
  scfg.rel_tol = 1e-7;
  for (const auto& sp : spectra) {
    VectorXd av(2);
    av << sp[0], sp[1];
    SignedSpectrum a(av);
    auto inv = inverse_spherical_phi(transform, a, kDefaultEpsSchedule, scfg);
    const double expected = polya_jpdf(omega, 2, PositiveSpectrum(av));
    worst_sph.update(std::abs(inv.value - expected) / std::abs(expected),
                     "a=(" + fmt(sp[0]) + "," + fmt(sp[1]) + ")");
  }

  CheckResult r;
  r.name = "transform-round-trips";
  r.metric = std::max(worst_mellin.value / 1e-4, worst_sph.value / 1e-3);
  r.pass = worst_mellin.value <= 1e-4 && worst_sph.value <= 1e-3;
  r.detail = "mellin worst " + fmt(worst_mellin.value) + " (tol 1e-4), spherical worst rel " +
             fmt(worst_sph.value) + " (tol 1e-3)";
  return r;
}

// ---------------------------------------------------------------------------
// 4. Eq. (44) product form vs Eq. (43) determinant form vs MC expectation
// ---------------------------------------------------------------------------

CheckResult check_ensemble_transforms(std::uint64_t seed) {
  auto run = [](std::uint64_t sd) {
    RngStream rng(sd);
    Worst worst_analytic, worst_mc;
    struct Case {
      WeightKind kind;
      WeightParams params;
      int l, m, n;
      std::string name;
    };
    std::vector<Case> cases = {
        {WeightKind::ginibre, {}, 1, 1, 1, "ginibre-1x1"},
        {WeightKind::ginibre, {}, 2, 2, 2, "ginibre-2x2"},
        {WeightKind::ginibre, {.nu = 1}, 3, 2, 2, "ginibre-3x2"},
        {WeightKind::projection, {.M = 4, .m = 2, .l = 2, .n = 2}, 2, 2, 2, "truncated-2x2-of-4"},
    };
    int idx = 0;
    for (const auto& c : cases) {
      RngStream draw = rng.split(400 + idx++);
      PolyaWeight w = PolyaWeight::make(c.kind, c.params);
      VectorXcd s(c.n);
      for (int j = 0; j < c.n; ++j) s[j] = Complex(2.0 * draw.uniform(), 0.0) + Complex(0, 0.2) * (j + 1.0);
      // keep frequencies separated
      for (int j = 1; j < c.n; ++j) s[j] += Complex(1.2 * j, 0);

      const Complex product_form = spherical_transform_polya(w, c.n, s);
      const Complex det_form = spherical_transform_polynomial(polya_as_polynomial(w, c.n), s);
      worst_analytic.update(std::abs(product_form - det_form) / std::abs(product_form), c.name);

      RngStream mc_rng = draw.split(3);
      McEstimate mc = mc_expectation_spherical(c.kind, c.l, c.m, c.n, c.params, s, 100000, mc_rng);
      worst_mc.update(sigma_distance(mc.value, product_form, mc.stderr_est), c.name);
    }
    CheckResult r;
    r.name = "ensemble-transforms";
    r.metric = worst_mc.value;
    r.pass = worst_analytic.value <= 1e-10 && worst_mc.value <= 3.0;
    r.detail = "analytic worst rel " + fmt(worst_analytic.value) + " (tol 1e-10), MC worst " +
               fmt(worst_mc.value) + " sigma";
    return r;
  };
  return with_retry("ensemble-transforms", run, seed);
}

// ---------------------------------------------------------------------------
// 5. Theorem 4.5 / Corollary 4.6 at fixed x
// ---------------------------------------------------------------------------

namespace {

struct FixedCase {
  ProductSpec spec;
  RankBranch branch;
  std::string name;
};

double biorth_pair_integral(const BiorthSystem& sys, int b, int bp, const QuadratureConfig& cfg) {
  auto f = [&](double x) { return sys.p(b, x) * sys.q[bp](x); };
  auto pos = integrate_half_line([&](double x) { return f(x); }, cfg);
  auto neg = integrate_half_line([&](double x) { return f(-x); }, cfg);
  if (!pos.converged || !neg.converged) throw std::runtime_error("biorth pair integral did not converge");
  return pos.value + neg.value;
}

// Orthant-sector integral of the symmetric jpdf, summed over sign sectors.
double jpdf_total_mass(const ProductSpec& spec, RankBranch branch, const QuadratureConfig& cfg) {
  const int r = spec.rank();
  const VectorXd& a = spec.fixed().a.values;
  int nneg = 0;
  for (int i = 0; i < a.size(); ++i)
    if (a[i] < 0) nneg++;
  const int keep_neg = std::min(nneg, r);  // signature conservation at rank r
  // Sector: first keep_neg coordinates negative, rest positive; multiply by
  // the number of coordinate permutations (symmetric density).
  auto f = [&](const VectorXd& x) -> Complex {
    VectorXd at(r);
    for (int i = 0; i < r; ++i) at[i] = (i < keep_neg ? -x[i] : x[i]);
    VectorXd sorted = at;
    std::sort(sorted.data(), sorted.data() + r);
    return jpdf_fixed(spec, SignedSpectrum(sorted), branch, cfg);
  };
  // Psi at the anchor frequency is 1, so the transform returns the sector mass.
  const Complex mass = spherical_transform_psi(
      {r, [&](const VectorXd& x) { return f(x).real(); }, Domain::half_line}, standard_s(r), cfg);
  double multiplicity = std::exp(log_factorial(r) - log_factorial(keep_neg) - log_factorial(r - keep_neg));
  return mass.real() * multiplicity;
}

}  // namespace

CheckResult check_fixed_product_statistics(std::uint64_t seed) {
  auto run = [](std::uint64_t sd) {
    RngStream rng(sd);
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-9;
    cfg.rel_tol = 1e-8;

    std::vector<FixedCase> cases;
    auto ginibre = PolyaWeight::make(WeightKind::ginibre, {});
    {
      ProductSpec s{2, 2, 2, 2, ginibre, FixedSpectrum{SignedSpectrum(Eigen::Vector2d(1.0, 2.2))}};
      cases.push_back({s, RankBranch::geq, "geq-square"});
    }
    {
      ProductSpec s{2, 2, 2, 2, ginibre, FixedSpectrum{SignedSpectrum(Eigen::Vector2d(-1.0, 2.0))}};
      cases.push_back({s, RankBranch::geq, "geq-mixed-sign"});
    }
    {
      VectorXd a(2);
      a << 0.8, 1.7;
      ProductSpec s{2, 3, 2, 2, ginibre, FixedSpectrum{SignedSpectrum(a)}};
      cases.push_back({s, RankBranch::geq, "geq-rectangular"});
    }
    {
      VectorXd a(3);
      a << 0.6, 1.3, 2.1;
      ProductSpec s{2, 3, 2, 3, ginibre, FixedSpectrum{SignedSpectrum(a)}};
      cases.push_back({s, RankBranch::less, "less-projection"});
    }

    Worst worst_mass, worst_biorth, worst_det, worst_ks;
    bool signature_ok = true;
    int case_idx = 0;
    for (const auto& c : cases) {
      const int r = c.spec.rank();
      // Normalization.
      const double mass = jpdf_total_mass(c.spec, c.branch, cfg);
      worst_mass.update(std::abs(mass - 1.0), c.name);

      // Bi-orthonormality.
      BiorthSystem sys = biorth_fixed(c.spec, c.branch, cfg);
      for (int b = 0; b < r; ++b)
        for (int bp = 0; bp < r; ++bp) {
          const double v = biorth_pair_integral(sys, b, bp, cfg);
          worst_biorth.update(std::abs(v - (b == bp ? 1.0 : 0.0)),
                              c.name + " (b=" + std::to_string(b) + ",b'=" + std::to_string(bp) + ")");
        }

      // det[K] reproduces the jpdf.
      Kernel k = kernel_from_biorth(sys);
      RngStream draw = rng.split(500 + case_idx);
      const VectorXd& a = c.spec.fixed().a.values;
      for (int rep = 0; rep < 20; ++rep) {
        VectorXd at(r);
        for (int i = 0; i < r; ++i) {
          const double sign = (i < r && a.minCoeff() < 0 && i == 0) ? -1.0 : 1.0;
          at[i] = sign * (0.2 + 2.5 * draw.uniform());
        }
        std::sort(at.data(), at.data() + r);
        MatrixXd km(r, r);
        for (int b = 0; b < r; ++b)
          for (int cc = 0; cc < r; ++cc) km(b, cc) = k(at[b], at[cc]);
        const double det_form = km.determinant() * std::exp(-log_factorial(r));
        const double direct = jpdf_fixed(c.spec, SignedSpectrum(at), c.branch, cfg);
        worst_det.update(std::abs(det_form - direct) / std::max(1e-12, std::abs(direct)), c.name);
      }

      // MC eigenvalues vs the level density K(a, a) / r.
      RngStream mc_rng = rng.split(900 + case_idx);
      SampleBatch batch = sample_product_eigs(c.spec, 100000, mc_rng);
      if (c.name == "geq-mixed-sign") {
        for (const auto& e : batch.eigs)
          if (!(e[0] < 0.0 && e[1] > 0.0)) signature_ok = false;
      }
      auto pooled = batch.pooled();
      const double lo = *std::min_element(pooled.begin(), pooled.end()) - 0.5;
      const double hi = *std::max_element(pooled.begin(), pooled.end()) + 0.5;
      auto reports = compare_density(
          batch, [&](double x) { return x == 0.0 ? 0.0 : std::max(0.0, k(x, x) / r); }, lo, hi);
      worst_ks.update(reports[0].sigma, c.name + " ks");
      ++case_idx;
    }

    CheckResult r;
    r.name = "fixed-product-statistics";
    r.metric = worst_ks.value;
    r.pass = worst_mass.value <= 1e-5 && worst_biorth.value <= 1e-6 && worst_det.value <= 1e-8 &&
             worst_ks.value <= 3.0 && signature_ok;
    r.detail = "mass err " + fmt(worst_mass.value) + ", biorth err " + fmt(worst_biorth.value) +
               ", det-vs-jpdf rel " + fmt(worst_det.value) + ", ks " + fmt(worst_ks.value) +
               " sigma, signature " + (signature_ok ? "conserved" : "VIOLATED");
    return r;
  };
  return with_retry("fixed-product-statistics", run, seed);
}

// ---------------------------------------------------------------------------
// 6. Theorem 4.7 / Proposition 4.8 with random x
// ---------------------------------------------------------------------------

CheckResult check_random_product_statistics(std::uint64_t seed) {
  auto run = [](std::uint64_t sd) {
    RngStream rng(sd);
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-10;
    cfg.rel_tol = 1e-9;

    auto ginibre = PolyaWeight::make(WeightKind::ginibre, {});
    PolynomialEnsembleH gue = make_gue_ensemble(2);
    ProductSpec spec{2, 2, 2, 2, ginibre, gue};
    BiorthSystem source = biorth_from_ensemble(gue);

    // Eq. (58) Mellin-determinant form vs the Eq. (60) bi-orthonormal form.
    Worst worst_forms;
    RngStream draw = rng.split(600);
    for (int rep = 0; rep < 20; ++rep) {
      VectorXd at(2);
      at[0] = -(0.2 + 2.0 * draw.uniform());
      at[1] = 0.2 + 2.0 * draw.uniform();
      if (rep % 2 == 0) at[0] = 0.1 + at[1] * draw.uniform();  // same-sign points too
      std::sort(at.data(), at.data() + 2);
      SignedSpectrum a(at);
      const double v58 = jpdf_random(spec, a, RankBranch::geq, cfg);
      const double v60 = jpdf_random(spec, a, RankBranch::geq, cfg, &source);
      worst_forms.update(std::abs(v58 - v60) / std::max(1e-12, std::abs(v58)), "at rep " + std::to_string(rep));
    }

    // Transformed system: bi-orthonormality and kernel consistency.
    BiorthSystem transformed = transform_biorth(spec, source, RankBranch::geq, cfg);
    Worst worst_biorth;
    QuadratureConfig bcfg = cfg;
    bcfg.abs_tol = 1e-9;
    bcfg.rel_tol = 1e-8;
    for (int b = 0; b < 2; ++b)
      for (int bp = 0; bp < 2; ++bp) {
        const double v = biorth_pair_integral(transformed, b, bp, bcfg);
        worst_biorth.update(std::abs(v - (b == bp ? 1.0 : 0.0)),
                            "(b=" + std::to_string(b) + ",b'=" + std::to_string(bp) + ")");
      }

    Kernel k_direct = transform_kernel(spec, kernel_from_biorth(source), RankBranch::geq, cfg);
    Kernel k_biorth = kernel_from_biorth(transformed);
    Worst worst_kernel;
    for (int rep = 0; rep < 20; ++rep) {
      const double x1 = (draw.uniform() < 0.5 ? -1 : 1) * (0.3 + 2.0 * draw.uniform());
      const double x2 = (draw.uniform() < 0.5 ? -1 : 1) * (0.3 + 2.0 * draw.uniform());
      const double kd = k_direct(x1, x2);
      const double kb = k_biorth(x1, x2);
      worst_kernel.update(std::abs(kd - kb) / std::max(1.0, std::abs(kb)), "pair " + std::to_string(rep));
    }

    // End-to-end MC against the transformed level density.
    RngStream mc_rng = rng.split(77);
    SampleBatch batch = sample_product_eigs(spec, 100000, mc_rng);
    auto pooled = batch.pooled();
    const double lo = *std::min_element(pooled.begin(), pooled.end()) - 0.5;
    const double hi = *std::max_element(pooled.begin(), pooled.end()) + 0.5;
    auto reports = compare_density(
        batch, [&](double x) { return x == 0.0 ? 0.0 : std::max(0.0, k_biorth(x, x) / 2.0); }, lo, hi);
    const double ks_sigma = reports[0].sigma;

    // Example 4.9: inclusion with M = l leaves the statistics invariant.
    Worst worst_incl;
    {
      PolyaWeight unit = PolyaWeight::make(WeightKind::projection, {.M = 2, .m = 2, .l = 2, .n = 2});
      ProductSpec incl{3, 2, 2, 2, unit, gue};
      BiorthSystem tr = transform_biorth(incl, source, RankBranch::geq, cfg);
      Kernel ktr = transform_kernel(incl, kernel_from_biorth(source), RankBranch::geq, cfg);
      Kernel korig = kernel_from_biorth(source);
      for (int rep = 0; rep < 20; ++rep) {
        const double x1 = (draw.uniform() < 0.5 ? -1 : 1) * (0.3 + 1.5 * draw.uniform());
        const double x2 = (draw.uniform() < 0.5 ? -1 : 1) * (0.3 + 1.5 * draw.uniform());
        worst_incl.update(std::abs(ktr(x1, x2) - korig(x1, x2)) / std::max(1.0, std::abs(korig(x1, x2))),
                          "kernel");
        for (int j = 0; j < 2; ++j) {
          worst_incl.update(std::abs(tr.q[j](x2) - source.q[j](x2)), "q" + std::to_string(j));
          worst_incl.update(std::abs(tr.p(j, x1) - source.p(j, x1)), "p" + std::to_string(j));
        }
      }
    }

    CheckResult r;
    r.name = "random-product-statistics";
    r.metric = ks_sigma;
    r.pass = worst_forms.value <= 1e-8 && worst_biorth.value <= 1e-6 && worst_kernel.value <= 1e-6 &&
             ks_sigma <= 3.0 && worst_incl.value <= 1e-8;
    r.detail = "58-vs-60 rel " + fmt(worst_forms.value) + ", biorth err " + fmt(worst_biorth.value) +
               ", kernel-consistency " + fmt(worst_kernel.value) + ", ks " + fmt(ks_sigma) +
               " sigma, inclusion-invariance " + fmt(worst_incl.value);
    return r;
  };
  return with_retry("random-product-statistics", run, seed);
}

// ---------------------------------------------------------------------------
// 7. Appendix artifacts: co-rank-1 projection and Eq. (A.14) orthogonality
// ---------------------------------------------------------------------------

CheckResult check_appendix_artifacts(std::uint64_t seed) {
  auto run = [](std::uint64_t sd) {
    RngStream rng(sd);
    QuadratureConfig cfg;

    // Interlacing holds exactly for every sample.
    bool interlacing_ok = true;
    {
      VectorXd a(3);
      a << -1.2, 0.4, 1.7;
      SignedSpectrum spec(a);
      RngStream draw = rng.split(70);
      for (int i = 0; i < 2000; ++i) {
        auto s = corank1_project(spec, draw);
        for (int j = 0; j < 2; ++j)
          if (!(a[j] <= s.projected[j] && s.projected[j] <= a[j + 1])) interlacing_ok = false;
      }
    }

    // l = 2: projected eigenvalue is uniform on (a_1, a_2).
    double ks_sigma;
    {
      VectorXd a(2);
      a << -0.7, 1.5;
      SignedSpectrum spec(a);
      RngStream draw = rng.split(71);
      std::vector<double> samples;
      for (int i = 0; i < 20000; ++i) samples.push_back(corank1_project(spec, draw).projected[0]);
      auto ks = ks_test(samples, [&](double x) { return std::clamp((x - a[0]) / (a[1] - a[0]), 0.0, 1.0); });
      ks_sigma = ks.sigma;
    }

    // l = 3: the analytic density integrates to 1 over the interlacing polytope.
    double mass_err;
    {
      VectorXd a(3);
      a << -1.0, 0.5, 2.0;
      SignedSpectrum spec(a);
      RngStream draw = rng.split(72);
      auto sample = corank1_project(spec, draw);
      QuadratureConfig icfg;
      icfg.abs_tol = 1e-9;
      icfg.rel_tol = 1e-8;
      auto inner = [&](double x0) {
        auto res = integrate_interval(
            [&](double x1) {
              VectorXd ap(2);
              ap << x0, x1;
              return sample.density(ap);
            },
            a[1], a[2], icfg);
        return res.value;
      };
      auto outer = integrate_interval([&](double x0) { return inner(x0); }, a[0], a[1], icfg);
      // Ordered chamber times the 2 coordinate orderings of the tuple density.
      mass_err = std::abs(2.0 * outer.value - 1.0);
    }

    // Eq. (A.14) bi-orthogonality for n2 = 3, contour route.
    Worst worst_orth;
    {
      RngStream draw = rng.split(73);
      VectorXd a(3);
      a << -1.4 + 0.2 * draw.uniform(), 0.6 + 0.3 * draw.uniform(), 1.9 + 0.4 * draw.uniform();
      for (int b = 1; b <= 3; ++b)
        for (int bp = 1; bp <= 3; ++bp) {
          double sum = 0.0;
          for (int c = 0; c < 3; ++c) {
            VectorXd excl(2);
            double denom = 1.0;
            int k = 0;
            for (int h = 0; h < 3; ++h) {
              if (h == c) continue;
              excl[k++] = a[h];
              denom *= a[c] - a[h];
            }
            sum += std::pow(a[c], b - 1) * elementary_sym(excl, 3 - bp, cfg) / denom;
          }
          worst_orth.update(std::abs(sum - (b == bp ? 1.0 : 0.0)),
                            "(b=" + std::to_string(b) + ",b'=" + std::to_string(bp) + ")");
        }
    }

    CheckResult r;
    r.name = "appendix-artifacts";
    r.metric = std::max(worst_orth.value / 1e-10, mass_err / 1e-6);
    r.pass = interlacing_ok && ks_sigma <= 3.0 && mass_err <= 1e-6 && worst_orth.value <= 1e-10;
    r.detail = std::string("interlacing ") + (interlacing_ok ? "exact" : "VIOLATED") + ", l=2 ks " +
               fmt(ks_sigma) + " sigma, l=3 mass err " + fmt(mass_err) + ", A.14 err " +
               fmt(worst_orth.value);
    return r;
  };
  return with_retry("appendix-artifacts", run, seed);
}

// ---------------------------------------------------------------------------
// 8. Shift identities, symmetries, Polya-frequency checks
// ---------------------------------------------------------------------------

CheckResult check_identities_and_polya(std::uint64_t seed) {
  RngStream rng(seed);
  Worst worst_shift, worst_sym;
  for (int rep = 0; rep < 40; ++rep) {
    RngStream draw = rng.split(800 + rep);
    const int n = 1 + static_cast<int>(draw.uniform() * 3.0);
    VectorXcd s(n);
    for (int j = 0; j < n; ++j) s[j] = Complex(2.5 * draw.uniform() + 1.3 * j, draw.uniform() - 0.5);
    VectorXi L(n);
    for (int j = 0; j < n; ++j) L[j] = draw.uniform() < 0.5 ? 1 : 0;
    SignedSpectrum a = random_signed_spectrum(n, draw);
    const Complex mu(1.5 * draw.uniform() - 0.5, draw.uniform() - 0.5);
    const int jshift = static_cast<int>(draw.uniform() * 3.0);

    // Psi(s + mu 1; a) = (prod a)^mu Psi(s; a) on positive spectra.
    {
      VectorXd pos = a.values.cwiseAbs();
      std::sort(pos.data(), pos.data() + n);
      PositiveSpectrum ap(pos);
      const Complex lhs = psi(VectorXcd(s.array() + mu), ap);
      double logprod = 0.0;
      for (int i = 0; i < n; ++i) logprod += std::log(pos[i]);
      const Complex rhs = std::exp(mu * logprod) * psi(s, ap);
      worst_shift.update(std::abs(lhs - rhs) / std::abs(rhs), "psi-shift");
    }
    // Phi(s + mu 1, L + j 1; a) = sign(prod a)^j |prod a|^mu Phi(s, L; a).
    {
      VectorXi Lj(n);
      for (int i = 0; i < n; ++i) Lj[i] = (L[i] + jshift) % 2;
      const Complex lhs = phi(Frequency(VectorXcd(s.array() + mu), Lj), a);
      double logabs = 0.0;
      double sgn = 1.0;
      for (int i = 0; i < n; ++i) {
        logabs += std::log(std::abs(a.values[i]));
        if (a.values[i] < 0) sgn = -sgn;
      }
      const Complex rhs = (jshift % 2 == 1 && sgn < 0 ? -1.0 : 1.0) * std::exp(mu * logabs) *
                          phi(Frequency(s, L), a);
      worst_shift.update(std::abs(lhs - rhs) / std::abs(rhs), "phi-shift");
    }
    // Permutation symmetry in the (s, L) pairs and in a.
    {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), draw.engine());
      VectorXcd sp(n);
      VectorXi Lp(n);
      for (int i = 0; i < n; ++i) {
        sp[i] = s[perm[i]];
        Lp[i] = L[perm[i]];
      }
      const Complex v1 = phi(Frequency(s, L), a);
      const Complex v2 = phi(Frequency(sp, Lp), a);
      worst_sym.update(std::abs(v1 - v2) / std::abs(v1), "pair-permutation");
    }
  }

  // Polya frequency inequality across the catalog; the deliberate
  // counterexample must fail (report-only).
  bool catalog_ok = true;
  std::string failing;
  struct Entry {
    PolyaWeight w;
    int order;
  };
  std::vector<Entry> catalog = {
      {PolyaWeight::make(WeightKind::ginibre, {}), 3},
      {PolyaWeight::make(WeightKind::ginibre, {.nu = 1}), 3},
      {PolyaWeight::make(WeightKind::jacobi, {.nu = 0, .mu = 1, .n = 2}), 2},
      {PolyaWeight::make(WeightKind::cauchy_lorentz, {.nu = 0.5, .mu = 1.5, .n = 2}), 2},
      {PolyaWeight::make(WeightKind::muttalib_borodin, {.nu = 0, .theta = 1.5}), 2},
      {PolyaWeight::make(WeightKind::lognormal, {}), 3},
      {PolyaWeight::make(WeightKind::projection, {.M = 6, .m = 3, .l = 2, .n = 2}), 2},
  };
  int widx = 0;
  for (const auto& e : catalog) {
    RngStream draw = rng.split(950 + widx++);
    auto rep = polya_frequency_check([&](double x) { return e.w(x); }, e.order, 200, draw);
    if (!rep.pass) {
      catalog_ok = false;
      failing = to_string(e.w.kind());
    }
  }
  RngStream cdraw = rng.split(990);
  auto counter = polya_frequency_check(
      [](double x) { return std::abs(std::sin(3.0 * std::log(x))) + 0.01; }, 2, 200, cdraw);

  CheckResult r;
  r.name = "identities-and-polya";
  r.metric = std::max(worst_shift.value, worst_sym.value);
  r.pass = worst_shift.value <= 1e-10 && worst_sym.value <= 1e-12 && catalog_ok && !counter.pass;
  r.detail = "shift err " + fmt(worst_shift.value) + ", symmetry err " + fmt(worst_sym.value) +
             ", catalog " + (catalog_ok ? "pass" : "FAIL at " + failing) + ", counterexample " +
             (counter.pass ? "NOT rejected" : "rejected (margin " + fmt(counter.worst_margin) + ")");
  return r;
}

std::vector<CheckResult> run_acceptance_suite(std::uint64_t seed, std::ostream* progress) {
  using Fn = CheckResult (*)(std::uint64_t);
  const std::pair<const char*, Fn> checks[] = {
      {"1 definition-vs-closed-form", &check_definition_vs_closed_form},
      {"2 factorization", &check_factorization},
      {"3 transform-round-trips", &check_transform_round_trips},
      {"4 ensemble-transforms", &check_ensemble_transforms},
      {"5 fixed-product-statistics", &check_fixed_product_statistics},
      {"6 random-product-statistics", &check_random_product_statistics},
      {"7 appendix-artifacts", &check_appendix_artifacts},
      {"8 identities-and-polya", &check_identities_and_polya},
  };
  std::vector<CheckResult> results;
  for (const auto& [label, fn] : checks) {
    CheckResult r = fn(seed);
    r.name = label;
    if (progress) {
      (*progress) << (r.pass ? "PASS" : "FAIL") << "  " << label << "  (" << r.detail << ")\n";
      progress->flush();
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace polyaprod
