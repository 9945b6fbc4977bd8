#include "slstail/empirical.hpp"

#include "slstail/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slstail {

EmpiricalDistribution::EmpiricalDistribution(std::span<const double> values) : sorted_(values.begin(), values.end())
{
    if (sorted_.empty()) {
        throw UsageError("empirical distribution needs a nonempty sample");
    }
    for (double v : sorted_) {
        if (!std::isfinite(v)) {
            throw UsageError("empirical distribution: non-finite value");
        }
    }
    std::sort(sorted_.begin(), sorted_.end());
    mean_ = std::accumulate(sorted_.begin(), sorted_.end(), 0.0) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::cdf(double t) const noexcept
{
    const auto count = std::upper_bound(sorted_.begin(), sorted_.end(), t) - sorted_.begin();
    return static_cast<double>(count) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::cdf_left(double t) const noexcept
{
    const auto count = std::lower_bound(sorted_.begin(), sorted_.end(), t) - sorted_.begin();
    return static_cast<double>(count) / static_cast<double>(sorted_.size());
}

// Plotting position of the k-th order statistic (0-based k).
double EmpiricalDistribution::position(std::size_t k) const noexcept
{
    return (static_cast<double>(k) + 0.5) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::quantile(double q) const
{
    if (!(q > 0.0 && q < 1.0)) {
        throw UsageError("empirical quantile requires 0 < q < 1");
    }
    const std::size_t n = sorted_.size();
    if (q <= position(0)) {
        return sorted_.front();
    }
    if (q >= position(n - 1)) {
        return sorted_.back();
    }
    const double scaled = q * static_cast<double>(n) - 0.5;
    auto k = static_cast<std::size_t>(std::floor(scaled));
    k = std::min(k, n - 2);
    const double frac = scaled - static_cast<double>(k);
    return sorted_[k] + frac * (sorted_[k + 1] - sorted_[k]);
}

double EmpiricalDistribution::quantile_integral(double p) const
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw UsageError("quantile_integral requires 0 <= p <= 1");
    }
    const std::size_t n = sorted_.size();
    const double first = position(0);
    if (p <= first) {
        return p * sorted_.front();
    }
    double total = first * sorted_.front();
    const double step = 1.0 / static_cast<double>(n);
    const double last = position(n - 1);
    const double upto = std::min(p, last);
    // Full trapezoids between consecutive plotting positions.
    const double scaled = upto * static_cast<double>(n) - 0.5;
    auto full = static_cast<std::size_t>(std::floor(scaled));
    full = std::min(full, n - 1);
    for (std::size_t k = 0; k < full; ++k) {
        total += 0.5 * (sorted_[k] + sorted_[k + 1]) * step;
    }
    if (full < n - 1) {
        const double frac = scaled - static_cast<double>(full);
        const double q_end = sorted_[full] + frac * (sorted_[full + 1] - sorted_[full]);
        total += 0.5 * (sorted_[full] + q_end) * frac * step;
    }
    if (p > last) {
        total += (p - last) * sorted_.back();
    }
    return total;
}

}  // namespace slstail
