#pragma once

namespace slstail {

/// Standard normal density.
double std_normal_pdf(double z) noexcept;
/// Phi(z) = erfc(-z / sqrt 2) / 2. std::erfc is accurate to a few ulp, so the
/// absolute error is far below 1e-12.
double std_normal_cdf(double z) noexcept;
/// 1 - Phi(z) without cancellation.
double std_normal_sf(double z) noexcept;
/// Inverse of Phi: Acklam's rational approximation (relative error < 1.2e-9)
/// followed by one Newton step against std_normal_cdf. Throws UsageError
/// unless 0 < q < 1.
double std_normal_quantile(double q);

}  // namespace slstail
