#include "polyaprod/montecarlo.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

namespace polyaprod {

int default_thread_count() {
  if (const char* env = std::getenv("POLYAPROD_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

std::vector<double> SampleBatch::pooled() const {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(count) * r);
  for (const auto& e : eigs)
    for (int i = 0; i < e.size(); ++i) out.push_back(e[i]);
  return out;
}

namespace {

// Keep the r largest-by-modulus eigenvalues, ascending.
VectorXd keep_rank(const VectorXd& ev, int r) {
  std::vector<double> v(ev.data(), ev.data() + ev.size());
  std::sort(v.begin(), v.end(), [](double x, double y) { return std::abs(x) > std::abs(y); });
  v.resize(r);
  std::sort(v.begin(), v.end());
  return Eigen::Map<VectorXd>(v.data(), r);
}

}  // namespace

SampleBatch sample_product_eigs(const ProductSpec& spec, int count, RngStream& rng) {
  spec.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const int r = spec.rank();
  const bool fixed = std::holds_alternative<FixedSpectrum>(spec.x);
  MatrixXcd x_fixed;
  if (fixed) x_fixed = embed_spectrum(spec.fixed().a.values, spec.m);
  else if (!spec.ensemble().sampler)
    throw std::invalid_argument("sample_product_eigs: ensemble has no sampler");

  SampleBatch batch;
  batch.seed = rng.seed();
  batch.count = count;
  batch.r = r;
  batch.eigs.resize(count);

  // Fixed-size chunks with per-chunk split streams: batches are bit-identical
  // for a given (spec, seed, count) regardless of the thread count.
  constexpr int kChunk = 2048;
  const int n_chunks = (count + kChunk - 1) / kChunk;
  const int threads = std::max(1, std::min(default_thread_count(), n_chunks));
  std::vector<int> dropped(n_chunks, 0);

  auto run_chunk = [&](int c) {
    RngStream stream = rng.split(0x6d630000ULL + static_cast<std::uint64_t>(c));
    const int lo = c * kChunk, hi = std::min(count, (c + 1) * kChunk);
    for (int i = lo; i < hi; ++i) {
      MatrixXcd g = sample_ensemble_matrix(spec.omega.kind(), spec.l, spec.m, spec.n1,
                                           spec.omega.params(), stream);
      MatrixXcd x = fixed ? x_fixed : spec.ensemble().sampler(stream);
      MatrixXcd w = g * x * g.adjoint();
      VectorXd ev = hermitian_eigenvalues(0.5 * (w + w.adjoint()));
      if (strip_numerical_zeros(ev).size() != r) dropped[c]++;
      batch.eigs[i] = keep_rank(ev, r);
    }
  };
  if (threads == 1) {
    for (int c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }
  for (int d : dropped) batch.degenerate_dropped += d;
  batch.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return batch;
}

Corank1Sample corank1_project(const SignedSpectrum& a, RngStream& rng) {
  const int l = a.n();
  if (l < 2) throw std::invalid_argument("corank1_project: need at least 2 eigenvalues");
  const VectorXd sorted = a.values;  // SignedSpectrum is sorted
  for (int i = 1; i < l; ++i)
    if (sorted[i] - sorted[i - 1] <= 0.0)
      throw std::invalid_argument("corank1_project: degenerate spectrum");

  MatrixXcd k = haar_unitary(l, rng);
  MatrixXcd w = k * embed_spectrum(sorted, l) * k.adjoint();
  Corank1Sample out;
  out.projected = hermitian_eigenvalues(w.topLeftCorner(l - 1, l - 1));

  const double delta_a = vandermonde(sorted);
  out.density = [sorted, delta_a, l](const VectorXd& ap) -> double {
    if (ap.size() != l - 1) throw std::invalid_argument("corank1 density: wrong dimension");
    VectorXd s = ap;
    std::sort(s.data(), s.data() + s.size());
    for (int i = 0; i < l - 1; ++i)
      if (!(sorted[i] <= s[i] && s[i] <= sorted[i + 1])) return 0.0;  // interlacing support
    return std::abs(vandermonde(s)) / delta_a;
  };
  return out;
}

std::vector<GofReport> compare_density(const SampleBatch& batch, const std::function<double(double)>& density,
                                       double lo, double hi) {
  if (batch.count == 0) throw std::invalid_argument("compare_density: empty batch");
  auto cdf = cdf_from_density(density, lo, hi);
  auto pooled = batch.pooled();
  std::vector<GofReport> reports;
  const KsResult ks = ks_test(pooled, cdf);
  reports.push_back({"ks", ks.statistic, ks.sigma, ks.sigma <= 3.0});
  const Chi2Result c2 = chi2_test(pooled, cdf);
  reports.push_back({"chi2", c2.statistic, c2.sigma, c2.sigma <= 3.0});
  return reports;
}

McEstimate mc_expectation_spherical(WeightKind kind, int l, int m, int n, const WeightParams& params,
                                    const VectorXcd& s, int samples, RngStream& rng) {
  if (samples < 2) throw std::invalid_argument("mc_expectation_spherical: need samples >= 2");
  Complex sum = 0.0;
  double sum_abs2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    MatrixXcd g = sample_ensemble_matrix(kind, l, m, n, params, rng);
    const Complex v = psi(s, squared_singular_values(g));
    sum += v;
    sum_abs2 += std::norm(v);
  }
  const double mcount = static_cast<double>(samples);
  const Complex mean = sum / mcount;
  const double var = std::max(0.0, sum_abs2 / mcount - std::norm(mean));
  if (var > 1e12 * std::max(1.0, std::norm(mean)))
    throw std::runtime_error("mc_expectation_spherical: variance overflow (Re s too large)");
  return {mean, std::sqrt(var / mcount), samples};
}

}  // namespace polyaprod
