#include "polyaprod/types.hpp"

#include <algorithm>
#include <cmath>

namespace polyaprod {

namespace {

void require_sorted_finite(const VectorXd& v, const char* what) {
  for (int i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw std::invalid_argument(std::string(what) + ": non-finite entry");
    if (i > 0 && v[i] < v[i - 1]) throw std::invalid_argument(std::string(what) + ": not sorted ascending");
  }
}

}  // namespace

SignedSpectrum::SignedSpectrum(VectorXd v) : values(std::move(v)) {
  std::sort(values.data(), values.data() + values.size());
  require_sorted_finite(values, "SignedSpectrum");
  for (int i = 0; i < values.size(); ++i)
    if (values[i] == 0.0) throw std::invalid_argument("SignedSpectrum: zero eigenvalue");
}

PositiveSpectrum::PositiveSpectrum(VectorXd v) : values(std::move(v)) {
  std::sort(values.data(), values.data() + values.size());
  require_sorted_finite(values, "PositiveSpectrum");
  for (int i = 0; i < values.size(); ++i)
    if (values[i] <= 0.0) throw std::invalid_argument("PositiveSpectrum: non-positive entry");
}

Frequency::Frequency(VectorXcd s_, VectorXi L_) : s(std::move(s_)), L(std::move(L_)) {
  if (s.size() != L.size()) throw std::invalid_argument("Frequency: s and L length mismatch");
  for (int i = 0; i < L.size(); ++i)
    if (L[i] != 0 && L[i] != 1) throw std::invalid_argument("Frequency: L entries must be 0 or 1");
}

VectorXcd standard_s(int n) {
  VectorXcd s(n);
  for (int j = 0; j < n; ++j) s[j] = Complex(n - 1 - j, 0.0);
  return s;
}

VectorXi standard_L(int n) {
  VectorXi L(n);
  for (int j = 0; j < n; ++j) L[j] = (n - 1 - j) % 2;
  return L;
}

Frequency standard_frequency(int n) { return Frequency(standard_s(n), standard_L(n)); }

void QuadratureConfig::validate() const {
  if (abs_tol <= 0 || rel_tol <= 0) throw std::invalid_argument("QuadratureConfig: tolerances must be > 0");
  if (contour_points < 8 || contour_points % 2 != 0)
    throw std::invalid_argument("QuadratureConfig: contour_points must be even and >= 8");
}

double vandermonde(const VectorXd& x) {
  double p = 1.0;
  for (int c = 1; c < x.size(); ++c)
    for (int d = 0; d < c; ++d) p *= x[c] - x[d];
  return p;
}

Complex vandermonde(const VectorXcd& x) {
  Complex p = 1.0;
  for (int c = 1; c < x.size(); ++c)
    for (int d = 0; d < c; ++d) p *= x[c] - x[d];
  return p;
}

double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_superfactorial(int n) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += log_factorial(j);
  return s;
}

}  // namespace polyaprod
