#pragma once

#include "slstail/distributions.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace slstail {

/// A runtime law seen through its quantile function and mean.
class RuntimeModel {
public:
    static RuntimeModel parametric(Distribution d);
    /// Uses the piecewise-linear plotting-position quantile of the sample.
    static RuntimeModel empirical(std::span<const double> x);

    bool is_empirical() const noexcept { return dist_.is_empirical(); }
    const Distribution& distribution() const noexcept { return dist_; }
    /// E[X]; +infinity for infinite-mean parametric models.
    double mean() const noexcept { return mean_; }
    double quantile(double p) const { return dist_.quantile(p); }
    /// Integral of Q over (0, p].
    double quantile_integral(double p) const;
    /// quantile_integral at each p, accumulated panel by panel.
    std::vector<double> quantile_integrals(std::span<const double> ps) const;

private:
    /// Integral of Q over [p0, p1], integrated in z = Phi^{-1}(u).
    double quantile_panel(double p0, double p1) const;

    explicit RuntimeModel(Distribution d);

    Distribution dist_;
    double mean_ = 0.0;
};

/// R(p) = ((1 - p) Q(p) + int_0^p Q(u) du) / E[X]; zero when E[X] is infinite.
/// Throws UsageError unless 0 < p < 1.
double r_functional(const RuntimeModel& model, double p);

/// Points p with 1 - p log-spaced from 0.999 down to 1e-4, increasing in p.
std::vector<double> default_restart_grid(std::size_t points = 512);

/// p - R(p) must exceed this to count as a witness; it sits above the
/// quadrature error of R.
inline constexpr double kRestartMarginFloor = 1e-9;

struct RestartVerdict {
    bool useful = false;
    std::optional<double> witness_p;
    std::optional<double> witness_threshold;  ///< Q(witness_p)
    double margin = 0.0;                      ///< p - R(p) at the witness (best on the grid)
    std::size_t grid_size = 0;
    bool infinite_mean = false;
    bool heuristic = false;  ///< empirical model: tail regularity cannot be checked
};

/// Scans p - R(p) over the grid and keeps the largest margin.
RestartVerdict restarts_useful(const RuntimeModel& model, std::span<const double> grid);
RestartVerdict restarts_useful(const RuntimeModel& model);

struct RestartedMeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t reps = 0;
    std::size_t capped_reps = 0;  ///< reps that hit the epoch cap
};

inline constexpr std::size_t kRestartEpochCap = 100000;

/// Simulates restarting after time t: draw X, finish if X <= t, else pay t and
/// redraw. Rep r uses the stream derive_seed(seed, "restart-mc", r).
/// Throws NumericError when P[X <= t] is numerically zero.
RestartedMeanEstimate restarted_mean_mc(const Distribution& d, double t, std::size_t reps, std::uint64_t seed);

/// E[X_t] = (int_0^{F(t)} Q + t S(t)) / F(t) evaluated by quadrature.
double restarted_mean_exact(const Distribution& d, double t);

struct HazardTrendReport {
    std::vector<double> grid;
    std::vector<double> hazards;
    HazardTrend trend = HazardTrend::indeterminate;
};

/// Hazard rate on an increasing grid; SaturationError propagates.
HazardTrendReport hazard_trend(const Distribution& d, std::span<const double> grid);

}  // namespace slstail
