#pragma once

#include "polyaprod/types.hpp"

namespace polyaprod {

/// Gamma(z) for complex z (Lanczos, g=7; reflection for Re z < 0.5).
Complex gamma_c(Complex z);

/// log Gamma(z), principal computation (imaginary part not phase-tracked
/// across branch cuts; intended for magnitudes and exponent arithmetic).
Complex lgamma_c(Complex z);

/// Gamma(z + k) / Gamma(z) for integer k (finite product/quotient, no poles
/// introduced when k >= 0 and z avoids -0,..,-(k-1)).
Complex gamma_ratio_int(Complex z, int k);

}  // namespace polyaprod
