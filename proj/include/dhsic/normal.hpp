#pragma once

namespace dhsic {

/// Standard normal CDF, via std::erfc (accurate in both tails).
double normal_cdf(double x) noexcept;

/// Upper tail 1 - Phi(x) without cancellation.
double normal_sf(double x) noexcept;

/// Phi^{-1}(p) for p in (0, 1); NaN outside.
double normal_quantile(double p) noexcept;

}  // namespace dhsic
