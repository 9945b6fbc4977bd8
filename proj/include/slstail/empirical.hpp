#pragma once

#include <span>
#include <vector>

namespace slstail {

/// A sample viewed as a distribution.
///
/// cdf is the right-continuous ecdf (#{x_i <= t} / n). quantile interpolates
/// linearly between order statistics placed at plotting positions
/// (k - 0.5) / n and is flat outside [x_(1), x_(n)].
class EmpiricalDistribution {
public:
    /// Throws UsageError on an empty sample or non-finite values.
    explicit EmpiricalDistribution(std::span<const double> values);

    std::size_t size() const noexcept { return sorted_.size(); }
    std::span<const double> sorted() const noexcept { return sorted_; }
    double min() const noexcept { return sorted_.front(); }
    double max() const noexcept { return sorted_.back(); }
    double mean() const noexcept { return mean_; }

    double cdf(double t) const noexcept;
    /// Left limit #{x_i < t} / n.
    double cdf_left(double t) const noexcept;
    double sf(double t) const noexcept { return 1.0 - cdf(t); }
    /// Throws UsageError unless 0 < q < 1.
    double quantile(double q) const;
    /// Exact integral of the interpolated quantile over (0, p], 0 <= p <= 1.
    double quantile_integral(double p) const;

private:
    double position(std::size_t k) const noexcept;

    std::vector<double> sorted_;
    double mean_ = 0.0;
};

}  // namespace slstail
