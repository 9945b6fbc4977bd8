#include "slstail/distributions.hpp"

#include "slstail/normal.hpp"
#include "slstail/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace slstail {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_probability(double q)
{
    if (!(q > 0.0 && q < 1.0)) {
        throw UsageError("quantile requires 0 < q < 1");
    }
}

double logistic(double u)
{
    if (u >= 0.0) {
        return 1.0 / (1.0 + std::exp(-u));
    }
    const double e = std::exp(u);
    return e / (1.0 + e);
}

}  // namespace

void validate(const NormalParams& p)
{
    if (!(p.sigma > 0.0) || !std::isfinite(p.mu) || !std::isfinite(p.sigma)) {
        throw UsageError("normal: sigma must be positive and parameters finite");
    }
}

void validate(const LogNormalParams& p)
{
    if (!(p.sigma > 0.0) || !std::isfinite(p.mu) || !std::isfinite(p.sigma) || !std::isfinite(p.xi)) {
        throw UsageError("lognormal: sigma must be positive and parameters finite");
    }
}

void validate(const SbParams& p)
{
    if (!(p.delta > 0.0) || !(p.lambda > 0.0) || !std::isfinite(p.gamma) || !std::isfinite(p.delta) ||
        !std::isfinite(p.lambda) || !std::isfinite(p.xi)) {
        throw UsageError("johnson sb: delta and lambda must be positive and parameters finite");
    }
}

void validate(const ExponentialParams& p)
{
    if (!(p.rate > 0.0) || !std::isfinite(p.rate)) {
        throw UsageError("exponential: rate must be positive");
    }
}

void validate(const UniformParams& p)
{
    if (!(p.a < p.b) || !std::isfinite(p.a) || !std::isfinite(p.b)) {
        throw UsageError("uniform: need finite a < b");
    }
}

void validate(const ParetoParams& p)
{
    if (!(p.scale > 0.0) || !(p.shape > 0.0) || !std::isfinite(p.scale) || !std::isfinite(p.shape)) {
        throw UsageError("pareto: scale and shape must be positive");
    }
}

// ---- normal ----

double normal_pdf(double x, const NormalParams& p)
{
    return std_normal_pdf((x - p.mu) / p.sigma) / p.sigma;
}

double normal_cdf(double x, const NormalParams& p)
{
    return std_normal_cdf((x - p.mu) / p.sigma);
}

double normal_sf(double x, const NormalParams& p)
{
    return std_normal_sf((x - p.mu) / p.sigma);
}

double normal_quantile(double q, const NormalParams& p)
{
    check_probability(q);
    return p.mu + p.sigma * std_normal_quantile(q);
}

double normal_sample(const NormalParams& p, Rng& rng)
{
    return p.mu + p.sigma * rng.normal();
}

// ---- Johnson SB ----

double sb_z(double x, const SbParams& p)
{
    return p.gamma + p.delta * (std::log(x - p.xi) - std::log(p.b() - x));
}

double sb_pdf(double x, const SbParams& p)
{
    if (!(x > p.a() && x < p.b())) {
        return 0.0;
    }
    const double z = sb_z(x, p);
    return p.delta * p.lambda / ((x - p.xi) * (p.b() - x)) * std_normal_pdf(z);
}

double sb_cdf(double x, const SbParams& p)
{
    if (x <= p.a()) {
        return 0.0;
    }
    if (x >= p.b()) {
        return 1.0;
    }
    return std_normal_cdf(sb_z(x, p));
}

double sb_sf(double x, const SbParams& p)
{
    if (x <= p.a()) {
        return 1.0;
    }
    if (x >= p.b()) {
        return 0.0;
    }
    return std_normal_sf(sb_z(x, p));
}

double sb_quantile(double q, const SbParams& p)
{
    check_probability(q);
    const double u = (std_normal_quantile(q) - p.gamma) / p.delta;
    return p.xi + p.lambda * logistic(u);
}

double sb_sample(const SbParams& p, Rng& rng)
{
    return p.xi + p.lambda * logistic((rng.normal() - p.gamma) / p.delta);
}

SbParams sb_scale(const SbParams& p, double g)
{
    if (!(g > 0.0) || !std::isfinite(g)) {
        throw UsageError("sb_scale: factor must be positive");
    }
    return SbParams{p.gamma, p.delta, g * p.lambda, g * p.xi};
}

// ---- lognormal ----

double lognormal_pdf(double x, const LogNormalParams& p)
{
    if (!(x > p.xi)) {
        return 0.0;
    }
    const double y = x - p.xi;
    return std_normal_pdf((std::log(y) - p.mu) / p.sigma) / (y * p.sigma);
}

double lognormal_cdf(double x, const LogNormalParams& p)
{
    if (!(x > p.xi)) {
        return 0.0;
    }
    return std_normal_cdf((std::log(x - p.xi) - p.mu) / p.sigma);
}

double lognormal_sf(double x, const LogNormalParams& p)
{
    if (!(x > p.xi)) {
        return 1.0;
    }
    return std_normal_sf((std::log(x - p.xi) - p.mu) / p.sigma);
}

double lognormal_quantile(double q, const LogNormalParams& p)
{
    check_probability(q);
    return p.xi + std::exp(p.mu + p.sigma * std_normal_quantile(q));
}

double lognormal_sample(const LogNormalParams& p, Rng& rng)
{
    return p.xi + std::exp(p.mu + p.sigma * rng.normal());
}

LogNormalParams lognormal_reciprocal(const LogNormalParams& p)
{
    if (p.xi != 0.0) {
        throw UsageError("lognormal_reciprocal: only defined for the two-parameter family");
    }
    return LogNormalParams{-p.mu, p.sigma, 0.0};
}

SbParams reciprocal_shift_sb(const LogNormalParams& x, double c)
{
    validate(x);
    if (x.xi != 0.0) {
        throw UsageError("reciprocal_shift_sb: lognormal must have xi = 0");
    }
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw UsageError("reciprocal_shift_sb: c must be positive");
    }
    return SbParams{(x.mu - std::log(c)) / x.sigma, 1.0 / x.sigma, 1.0 / c, 0.0};
}

SbParams sb_lognormal_embedding(double mu, double delta, double a, double b)
{
    if (!(b > a)) {
        throw UsageError("sb_lognormal_embedding: need b > a");
    }
    if (!(delta > 0.0)) {
        throw UsageError("sb_lognormal_embedding: delta must be positive");
    }
    return SbParams{delta * (std::log(b - a) - mu), delta, b - a, a};
}

// ---- Distribution ----

Distribution::Distribution(NormalParams p) : params_(p) { validate(p); }
Distribution::Distribution(LogNormalParams p) : params_(p) { validate(p); }
Distribution::Distribution(SbParams p) : params_(p) { validate(p); }
Distribution::Distribution(ExponentialParams p) : params_(p) { validate(p); }
Distribution::Distribution(UniformParams p) : params_(p) { validate(p); }
Distribution::Distribution(ParetoParams p) : params_(p) { validate(p); }

Distribution Distribution::empirical(std::span<const double> values)
{
    Distribution d(NormalParams{});
    d.params_ = std::make_shared<const EmpiricalDistribution>(values);
    return d;
}

std::string Distribution::family() const
{
    return std::visit(Overloaded{
                          [](const NormalParams&) { return std::string("normal"); },
                          [](const LogNormalParams&) { return std::string("lognormal"); },
                          [](const SbParams&) { return std::string("johnson_sb"); },
                          [](const ExponentialParams&) { return std::string("exponential"); },
                          [](const UniformParams&) { return std::string("uniform"); },
                          [](const ParetoParams&) { return std::string("pareto"); },
                          [](const Empirical&) { return std::string("empirical"); },
                      },
                      params_);
}

double Distribution::pdf(double x) const
{
    return std::visit(Overloaded{
                          [x](const NormalParams& p) { return normal_pdf(x, p); },
                          [x](const LogNormalParams& p) { return lognormal_pdf(x, p); },
                          [x](const SbParams& p) { return sb_pdf(x, p); },
                          [x](const ExponentialParams& p) { return x < 0.0 ? 0.0 : p.rate * std::exp(-p.rate * x); },
                          [x](const UniformParams& p) { return (x < p.a || x > p.b) ? 0.0 : 1.0 / (p.b - p.a); },
                          [x](const ParetoParams& p) {
                              return x < p.scale ? 0.0 : p.shape / x * std::pow(p.scale / x, p.shape);
                          },
                          [](const Empirical&) -> double {
                              throw UsageError("empirical distribution has no density");
                          },
                      },
                      params_);
}

double Distribution::cdf(double x) const
{
    return std::visit(Overloaded{
                          [x](const NormalParams& p) { return normal_cdf(x, p); },
                          [x](const LogNormalParams& p) { return lognormal_cdf(x, p); },
                          [x](const SbParams& p) { return sb_cdf(x, p); },
                          [x](const ExponentialParams& p) { return x <= 0.0 ? 0.0 : -std::expm1(-p.rate * x); },
                          [x](const UniformParams& p) {
                              return x <= p.a ? 0.0 : (x >= p.b ? 1.0 : (x - p.a) / (p.b - p.a));
                          },
                          [x](const ParetoParams& p) {
                              return x <= p.scale ? 0.0 : -std::expm1(p.shape * std::log(p.scale / x));
                          },
                          [x](const Empirical& e) { return e->cdf(x); },
                      },
                      params_);
}

double Distribution::cdf_left(double x) const
{
    if (const auto* e = std::get_if<Empirical>(&params_)) {
        return (*e)->cdf_left(x);
    }
    return cdf(x);
}

double Distribution::sf(double x) const
{
    return std::visit(Overloaded{
                          [x](const NormalParams& p) { return normal_sf(x, p); },
                          [x](const LogNormalParams& p) { return lognormal_sf(x, p); },
                          [x](const SbParams& p) { return sb_sf(x, p); },
                          [x](const ExponentialParams& p) { return x <= 0.0 ? 1.0 : std::exp(-p.rate * x); },
                          [x](const UniformParams& p) {
                              return x <= p.a ? 1.0 : (x >= p.b ? 0.0 : (p.b - x) / (p.b - p.a));
                          },
                          [x](const ParetoParams& p) { return x <= p.scale ? 1.0 : std::pow(p.scale / x, p.shape); },
                          [x](const Empirical& e) { return e->sf(x); },
                      },
                      params_);
}

double Distribution::quantile(double q) const
{
    check_probability(q);
    return std::visit(Overloaded{
                          [q](const NormalParams& p) { return normal_quantile(q, p); },
                          [q](const LogNormalParams& p) { return lognormal_quantile(q, p); },
                          [q](const SbParams& p) { return sb_quantile(q, p); },
                          [q](const ExponentialParams& p) { return -std::log1p(-q) / p.rate; },
                          [q](const UniformParams& p) { return p.a + q * (p.b - p.a); },
                          [q](const ParetoParams& p) { return p.scale * std::exp(-std::log1p(-q) / p.shape); },
                          [q](const Empirical& e) { return e->quantile(q); },
                      },
                      params_);
}

double Distribution::sample(Rng& rng) const
{
    return std::visit(Overloaded{
                          [&rng](const NormalParams& p) { return normal_sample(p, rng); },
                          [&rng](const LogNormalParams& p) { return lognormal_sample(p, rng); },
                          [&rng](const SbParams& p) { return sb_sample(p, rng); },
                          [&rng](const ExponentialParams& p) { return rng.exponential(p.rate); },
                          [&rng](const UniformParams& p) { return p.a + rng.uniform() * (p.b - p.a); },
                          [&rng](const ParetoParams& p) {
                              return p.scale * std::exp(-std::log(rng.uniform_open()) / p.shape);
                          },
                          [&rng](const Empirical& e) { return e->sorted()[rng.below(e->size())]; },
                      },
                      params_);
}

double Distribution::support_lower() const
{
    return std::visit(Overloaded{
                          [](const NormalParams&) { return -kInf; },
                          [](const LogNormalParams& p) { return p.xi; },
                          [](const SbParams& p) { return p.a(); },
                          [](const ExponentialParams&) { return 0.0; },
                          [](const UniformParams& p) { return p.a; },
                          [](const ParetoParams& p) { return p.scale; },
                          [](const Empirical& e) { return e->min(); },
                      },
                      params_);
}

double Distribution::support_upper() const
{
    return std::visit(Overloaded{
                          [](const NormalParams&) { return kInf; },
                          [](const LogNormalParams&) { return kInf; },
                          [](const SbParams& p) { return p.b(); },
                          [](const ExponentialParams&) { return kInf; },
                          [](const UniformParams& p) { return p.b; },
                          [](const ParetoParams&) { return kInf; },
                          [](const Empirical& e) { return e->max(); },
                      },
                      params_);
}

bool Distribution::bounded_above() const
{
    return std::isfinite(support_upper());
}

double Distribution::mean() const
{
    return std::visit(Overloaded{
                          [](const NormalParams& p) { return p.mu; },
                          [](const LogNormalParams& p) { return p.xi + std::exp(p.mu + 0.5 * p.sigma * p.sigma); },
                          [this](const SbParams&) { return numeric_mean(*this); },
                          [](const ExponentialParams& p) { return 1.0 / p.rate; },
                          [](const UniformParams& p) { return 0.5 * (p.a + p.b); },
                          [](const ParetoParams& p) {
                              return p.shape > 1.0 ? p.shape * p.scale / (p.shape - 1.0) : kInf;
                          },
                          [](const Empirical& e) { return e->mean(); },
                      },
                      params_);
}

double numeric_mean(const Distribution& d)
{
    const double lower = d.support_lower();
    if (!std::isfinite(lower)) {
        throw UsageError("numeric_mean: needs a finite lower support bound");
    }
    auto survival = [&d](double x) { return d.sf(x); };
    if (d.bounded_above()) {
        // Split at interior quantiles so the adaptive rule sees the bulk.
        double total = 0.0;
        double left = lower;
        for (double q : {0.01, 0.25, 0.5, 0.75, 0.99}) {
            const double right = d.quantile(q);
            total += integrate(survival, left, right);
            left = right;
        }
        total += integrate(survival, left, d.support_upper());
        return lower + total;
    }

    const double scale = std::max(d.quantile(0.5) - lower, 1e-300);
    double total = 0.0;
    double left = lower;
    for (int k = 0;; ++k) {
        const double right = lower + scale * (std::ldexp(1.0, k + 1) - 1.0);
        if (!(right < 1e300)) {
            return kInf;
        }
        const double piece = integrate(survival, left, right);
        total += piece;
        if (k >= 4 && piece <= 1e-15 * total) {
            return lower + total;
        }
        if (total > 1e12 * scale) {
            return kInf;
        }
        left = right;
    }
}

double hazard_rate(const Distribution& d, double t)
{
    if (d.is_empirical()) {
        throw UsageError("hazard_rate: needs a parametric distribution");
    }
    const double s = d.sf(t);
    if (!(s >= std::numeric_limits<double>::min())) {
        throw SaturationError("hazard_rate: survival function underflowed at t = " + std::to_string(t));
    }
    const double h = d.pdf(t) / s;
    if (!std::isfinite(h)) {
        throw SaturationError("hazard_rate: non-finite ratio at t = " + std::to_string(t));
    }
    return h;
}

std::string to_string(HazardTrend t)
{
    switch (t) {
    case HazardTrend::decreasing_to_zero:
        return "decreasing_to_zero";
    case HazardTrend::constant:
        return "constant";
    case HazardTrend::increasing:
        return "increasing";
    case HazardTrend::indeterminate:
        break;
    }
    return "indeterminate";
}

HazardTrend classify_hazard(std::span<const double> h)
{
    const std::size_t n = h.size();
    if (n < 3 || !std::all_of(h.begin(), h.end(), [](double v) { return std::isfinite(v) && v >= 0.0; })) {
        return HazardTrend::indeterminate;
    }
    const double first = h.front();
    const double peak = *std::max_element(h.begin(), h.end());
    const bool flat = std::all_of(h.begin(), h.end(),
                                  [&](double v) { return std::abs(v - first) <= 1e-6 * std::max(first, 1e-300); });
    if (flat) {
        return HazardTrend::constant;
    }
    bool nondecreasing = true;
    for (std::size_t i = 1; i < n; ++i) {
        nondecreasing = nondecreasing && h[i] >= h[i - 1] * (1.0 - 1e-12);
    }
    if (nondecreasing && h.back() > first) {
        return HazardTrend::increasing;
    }
    bool tail_decreasing = true;
    for (std::size_t i = n / 2 + 1; i < n; ++i) {
        tail_decreasing = tail_decreasing && h[i] < h[i - 1];
    }
    if (tail_decreasing && h.back() <= 0.1 * peak) {
        return HazardTrend::decreasing_to_zero;
    }
    return HazardTrend::indeterminate;
}

std::string to_string(TailVerdict v)
{
    switch (v) {
    case TailVerdict::long_tailed:
        return "long_tailed";
    case TailVerdict::not_long_tailed:
        return "not_long_tailed";
    case TailVerdict::inconclusive:
        break;
    }
    return "inconclusive";
}

LongTailReport long_tail_diagnostic(const Distribution& d)
{
    LongTailReport report;
    if (d.bounded_above()) {
        report.verdict = TailVerdict::not_long_tailed;
        return report;
    }
    constexpr std::size_t kPoints = 32;
    const double lo = d.quantile(0.5);
    const double hi = d.quantile(1.0 - 1e-12);
    // Geometric in the offset from the median so that nonpositive medians work.
    const double span = std::log1p(hi - lo);
    for (std::size_t i = 0; i < kPoints; ++i) {
        report.grid.push_back(lo + std::expm1(span * static_cast<double>(i) / (kPoints - 1)));
    }
    const double x = report.grid.back();
    const double s = d.sf(x);
    if (s > 0.0) {
        report.ratio_y1 = d.sf(x + 1.0) / s;
        report.ratio_y10 = d.sf(x + 10.0) / s;
    }
    report.ratio_ok = std::abs(report.ratio_y1 - 1.0) <= kLongTailRatioTolerance &&
                      std::abs(report.ratio_y10 - 1.0) <= kLongTailRatioTolerance;

    std::vector<double> hazards;
    try {
        for (double t : report.grid) {
            hazards.push_back(hazard_rate(d, t));
        }
        report.hazard = classify_hazard(hazards);
    } catch (const SaturationError&) {
        report.hazard = HazardTrend::indeterminate;
    }
    report.hazard_ok = report.hazard == HazardTrend::decreasing_to_zero;

    if (report.ratio_ok && report.hazard_ok) {
        report.verdict = TailVerdict::long_tailed;
    } else if (!report.ratio_ok && !report.hazard_ok) {
        report.verdict = TailVerdict::not_long_tailed;
    } else {
        report.verdict = TailVerdict::inconclusive;
    }
    return report;
}

}  // namespace slstail
