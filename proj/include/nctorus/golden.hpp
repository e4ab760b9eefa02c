#pragma once

// Empirically pinned constants.  The canonical copies live in data/golden/;
// a unit test asserts these values agree with the files byte-for-byte.

namespace nct {

// Ratio c4 / order4_obstruction(f) of the fitted fourth Taylor coefficient of
// Omega_f(t) to the closed-form obstruction.  Measured at 0.0208333333 +/-
// 2e-9 (rel.) across the noncommuting corpus with a degree-8 fit; pinned to
// the exact rational it converges to.
inline constexpr double order4_fit_constant = 1.0 / 48.0;

}  // namespace nct
