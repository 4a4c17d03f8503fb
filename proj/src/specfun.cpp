#include "polyaprod/specfun.hpp"

#include <cmath>

namespace polyaprod {

namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczosCoef[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

Complex lanczos_lgamma(Complex z) {
  // Valid for Re z >= 0.5.
  z -= 1.0;
  Complex x = kLanczosCoef[0];
  for (int i = 1; i < 9; ++i) x += kLanczosCoef[i] / (z + static_cast<double>(i));
  const Complex t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

Complex lgamma_c(Complex z) {
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
    return std::log(M_PI) - std::log(std::sin(M_PI * z)) - lanczos_lgamma(1.0 - z);
  }
  return lanczos_lgamma(z);
}

Complex gamma_c(Complex z) {
  if (z.imag() == 0.0 && z.real() > 0.0) return {std::tgamma(z.real()), 0.0};
  return std::exp(lgamma_c(z));
}

Complex gamma_ratio_int(Complex z, int k) {
  Complex r = 1.0;
  if (k >= 0) {
    for (int j = 0; j < k; ++j) r *= z + static_cast<double>(j);
  } else {
    for (int j = 1; j <= -k; ++j) r /= z - static_cast<double>(j);
  }
  return r;
}

}  // namespace polyaprod
