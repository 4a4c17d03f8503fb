#pragma once

#include <string>

#include "polyaprod/products.hpp"
#include "polyaprod/stats.hpp"

namespace polyaprod {

struct SampleBatch {
  std::uint64_t seed = 0;
  int count = 0;
  int r = 0;  // eigenvalues per sample after zero stripping
  std::vector<VectorXd> eigs;  // sorted ascending per sample
  int degenerate_dropped = 0;
  double wall_seconds = 0.0;

  std::vector<double> pooled() const;
};

/// Eigenvalues of g x g* per sample; g drawn from the spec's (sampleable)
/// Polya weight, x fixed or drawn from the ensemble sampler. Honors
/// POLYAPROD_THREADS via deterministic per-chunk split streams.
SampleBatch sample_product_eigs(const ProductSpec& spec, int count, RngStream& rng);

struct Corank1Sample {
  VectorXd projected;                            // l-1 eigenvalues, ascending
  std::function<double(const VectorXd&)> density;  // analytic p(a' | a)
};

/// One draw of the co-rank-1 compression Pi k a k* Pi* plus the analytic
/// density evaluator on the interlacing polytope.
Corank1Sample corank1_project(const SignedSpectrum& a, RngStream& rng);

struct GofReport {
  std::string test;
  double statistic = 0.0;
  double sigma = 0.0;
  bool pass = true;  // at 3 sigma
};

/// KS + chi^2 of the pooled eigenvalues against a normalized 1-point density.
std::vector<GofReport> compare_density(const SampleBatch& batch, const std::function<double(double)>& density,
                                       double lo, double hi);

/// Sample mean of Psi(s; squared singular values of g) with standard error.
McEstimate mc_expectation_spherical(WeightKind kind, int l, int m, int n, const WeightParams& params,
                                    const VectorXcd& s, int samples, RngStream& rng);

int default_thread_count();

}  // namespace polyaprod
