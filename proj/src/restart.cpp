#include "slstail/restart.hpp"

#include "slstail/normal.hpp"
#include "slstail/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slstail {

RuntimeModel::RuntimeModel(Distribution d) : dist_(std::move(d)) {}

RuntimeModel RuntimeModel::parametric(Distribution d)
{
    if (d.is_empirical()) {
        throw UsageError("RuntimeModel::parametric got an empirical distribution");
    }
    RuntimeModel m(std::move(d));
    m.mean_ = m.dist_.mean();
    if (!(m.mean_ > 0.0)) {
        throw UsageError("runtime model needs a positive mean");
    }
    return m;
}

RuntimeModel RuntimeModel::empirical(std::span<const double> x)
{
    RuntimeModel m(Distribution::empirical(x));
    m.mean_ = m.dist_.mean();
    if (!(m.mean_ > 0.0)) {
        throw DataError("runtime sample needs a positive mean");
    }
    return m;
}

namespace {

// Below z = -37 the normal mass is under 1e-299 and is dropped.
constexpr double kLowestZ = -37.0;
// Q(Phi(z)) is only resolved to about 1e-12 relative near p = 1 - 1e-4
// (the double spacing of u), so a tighter request never converges.
constexpr double kPanelTolerance = 1e-10;
constexpr double kZBreaks[] = {-30.0, -20.0, -12.0, -8.0, -5.0, -3.0, -1.5, 0.0, 1.5, 3.0};

}  // namespace

double RuntimeModel::quantile_panel(double p0, double p1) const
{
    if (!(p1 > p0)) {
        return 0.0;
    }
    const double z0 = p0 > 0.0 ? std_normal_quantile(p0) : kLowestZ;
    const double z1 = std_normal_quantile(p1);
    auto g = [this](double z) {
        const double u = std_normal_cdf(z);
        return u > 0.0 ? dist_.quantile(u) * std_normal_pdf(z) : 0.0;
    };
    double total = 0.0;
    double left = z0;
    for (double b : kZBreaks) {
        if (b > left && b < z1) {
            total += integrate(g, left, b, kPanelTolerance);
            left = b;
        }
    }
    return total + integrate(g, left, z1, kPanelTolerance);
}

double RuntimeModel::quantile_integral(double p) const
{
    if (const auto* e = std::get_if<Distribution::Empirical>(&dist_.params())) {
        return (*e)->quantile_integral(p);
    }
    if (!(p > 0.0)) {
        return 0.0;
    }
    return quantile_panel(0.0, p);
}

std::vector<double> RuntimeModel::quantile_integrals(std::span<const double> ps) const
{
    std::vector<double> out(ps.size());
    if (is_empirical()) {
        for (std::size_t i = 0; i < ps.size(); ++i) {
            out[i] = quantile_integral(ps[i]);
        }
        return out;
    }
    std::vector<std::size_t> order(ps.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ps[a] < ps[b]; });
    double prev = 0.0;
    double acc = 0.0;
    for (std::size_t i : order) {
        const double p = ps[i];
        if (p > prev) {
            acc += quantile_panel(prev, p);
            prev = p;
        }
        out[i] = p > 0.0 ? acc : 0.0;
    }
    return out;
}

double r_functional(const RuntimeModel& model, double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw UsageError("R(p) requires 0 < p < 1");
    }
    if (std::isinf(model.mean())) {
        return 0.0;
    }
    return ((1.0 - p) * model.quantile(p) + model.quantile_integral(p)) / model.mean();
}

std::vector<double> default_restart_grid(std::size_t points)
{
    if (points < 2) {
        throw UsageError("restart grid needs at least 2 points");
    }
    const double hi = std::log(0.999);
    const double lo = std::log(1e-4);
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double tail = std::exp(hi + (lo - hi) * static_cast<double>(i) / static_cast<double>(points - 1));
        grid[i] = 1.0 - tail;
    }
    return grid;
}

RestartVerdict restarts_useful(const RuntimeModel& model, std::span<const double> grid)
{
    if (grid.empty()) {
        throw UsageError("restarts_useful: empty grid");
    }
    RestartVerdict v;
    v.grid_size = grid.size();
    v.heuristic = model.is_empirical();
    if (std::isinf(model.mean())) {
        v.infinite_mean = true;
        const double p = *std::max_element(grid.begin(), grid.end());
        v.useful = true;
        v.witness_p = p;
        v.witness_threshold = model.quantile(p);
        v.margin = p;
        return v;
    }
    for (double p : grid) {
        if (!(p > 0.0 && p < 1.0)) {
            throw UsageError("restart grid points must lie in (0, 1)");
        }
    }
    const std::vector<double> integrals = model.quantile_integrals(grid);
    double best_margin = -std::numeric_limits<double>::infinity();
    double best_p = grid.front();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = grid[i];
        const double r = ((1.0 - p) * model.quantile(p) + integrals[i]) / model.mean();
        const double margin = p - r;
        if (margin > best_margin) {
            best_margin = margin;
            best_p = p;
        }
    }
    v.margin = best_margin;
    if (best_margin > kRestartMarginFloor) {
        v.useful = true;
        v.witness_p = best_p;
        v.witness_threshold = model.quantile(best_p);
    }
    return v;
}

RestartVerdict restarts_useful(const RuntimeModel& model)
{
    const auto grid = default_restart_grid();
    return restarts_useful(model, grid);
}

RestartedMeanEstimate restarted_mean_mc(const Distribution& d, double t, std::size_t reps, std::uint64_t seed)
{
    if (!(t > 0.0)) {
        throw UsageError("restart threshold must be positive");
    }
    if (reps < 2) {
        throw UsageError("restarted_mean_mc needs at least 2 reps");
    }
    if (!(d.cdf(t) > 0.0)) {
        throw NumericError("P[X <= t] is numerically zero");
    }
    RestartedMeanEstimate est;
    est.reps = reps;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        Rng rng(derive_seed(seed, "restart-mc", r));
        double elapsed = 0.0;
        bool done = false;
        for (std::size_t epoch = 0; epoch < kRestartEpochCap; ++epoch) {
            const double x = d.sample(rng);
            if (x <= t) {
                elapsed += x;
                done = true;
                break;
            }
            elapsed += t;
        }
        if (!done) {
            ++est.capped_reps;
        }
        sum += elapsed;
        sum_sq += elapsed * elapsed;
    }
    const double n = static_cast<double>(reps);
    est.mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
    return est;
}

double restarted_mean_exact(const Distribution& d, double t)
{
    const double f = d.cdf(t);
    if (!(f > 0.0)) {
        throw NumericError("P[X <= t] is numerically zero");
    }
    if (f >= 1.0) {
        return d.mean();
    }
    const RuntimeModel m = RuntimeModel::parametric(d);
    return (m.quantile_integral(f) + t * d.sf(t)) / f;
}

HazardTrendReport hazard_trend(const Distribution& d, std::span<const double> grid)
{
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw UsageError("hazard_trend: grid must be increasing");
    }
    HazardTrendReport rep;
    rep.grid.assign(grid.begin(), grid.end());
    for (double t : grid) {
        rep.hazards.push_back(hazard_rate(d, t));
    }
    rep.trend = classify_hazard(rep.hazards);
    return rep;
}

}  // namespace slstail
