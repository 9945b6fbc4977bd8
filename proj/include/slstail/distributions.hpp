#pragma once

#include "slstail/empirical.hpp"
#include "slstail/error.hpp"
#include "slstail/rng.hpp"

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace slstail {

struct NormalParams {
    double mu = 0.0;
    double sigma = 1.0;
};

/// log(X - xi) ~ N(mu, sigma^2). xi = 0 is the two-parameter family.
struct LogNormalParams {
    double mu = 0.0;
    double sigma = 1.0;
    double xi = 0.0;
};

/// Johnson SB: gamma + delta * log((X - xi) / (xi + lambda - X)) ~ N(0, 1).
/// Support is the open interval (a, b) = (xi, xi + lambda).
struct SbParams {
    double gamma = 0.0;
    double delta = 1.0;
    double lambda = 1.0;
    double xi = 0.0;

    double a() const noexcept { return xi; }
    double b() const noexcept { return xi + lambda; }
};

struct ExponentialParams {
    double rate = 1.0;
};

struct UniformParams {
    double a = 0.0;
    double b = 1.0;
};

/// P[X > x] = (scale / x)^shape for x >= scale. Infinite mean when shape <= 1.
struct ParetoParams {
    double scale = 1.0;
    double shape = 1.0;
};

/// Thrown by hazard_rate when the survival function has underflowed.
class SaturationError : public NumericError {
public:
    using NumericError::NumericError;
};

void validate(const NormalParams& p);
void validate(const LogNormalParams& p);
void validate(const SbParams& p);
void validate(const ExponentialParams& p);
void validate(const UniformParams& p);
void validate(const ParetoParams& p);

double normal_pdf(double x, const NormalParams& p);
double normal_cdf(double x, const NormalParams& p);
double normal_sf(double x, const NormalParams& p);
double normal_quantile(double q, const NormalParams& p);
double normal_sample(const NormalParams& p, Rng& rng);

double sb_z(double x, const SbParams& p);
double sb_pdf(double x, const SbParams& p);
double sb_cdf(double x, const SbParams& p);
double sb_sf(double x, const SbParams& p);
double sb_quantile(double q, const SbParams& p);
double sb_sample(const SbParams& p, Rng& rng);
/// Distribution of g * X for X ~ SB(p): support (g a, g b), same gamma and delta.
SbParams sb_scale(const SbParams& p, double g);

double lognormal_pdf(double x, const LogNormalParams& p);
double lognormal_cdf(double x, const LogNormalParams& p);
double lognormal_sf(double x, const LogNormalParams& p);
double lognormal_quantile(double q, const LogNormalParams& p);
double lognormal_sample(const LogNormalParams& p, Rng& rng);
/// 1/X for a two-parameter lognormal X: LogN(-mu, sigma^2).
LogNormalParams lognormal_reciprocal(const LogNormalParams& p);

/// SB parameters of 1/(c + X) for X ~ LogN(mu, sigma^2) (xi must be 0):
/// gamma = (mu - ln c)/sigma, delta = 1/sigma, lambda = 1/c, xi = 0.
SbParams reciprocal_shift_sb(const LogNormalParams& x, double c);

/// SB on (a, b) whose density tends to the LogN(mu, 1/delta^2) density shifted
/// by a as b grows: gamma = delta (ln(b - a) - mu), xi = a, lambda = b - a.
SbParams sb_lognormal_embedding(double mu, double delta, double a, double b);

/// Value-type handle over the supported families.
class Distribution {
public:
    using Empirical = std::shared_ptr<const EmpiricalDistribution>;
    using Params =
        std::variant<NormalParams, LogNormalParams, SbParams, ExponentialParams, UniformParams, ParetoParams, Empirical>;

    Distribution(NormalParams p);
    Distribution(LogNormalParams p);
    Distribution(SbParams p);
    Distribution(ExponentialParams p);
    Distribution(UniformParams p);
    Distribution(ParetoParams p);
    static Distribution empirical(std::span<const double> values);

    const Params& params() const noexcept { return params_; }
    std::string family() const;
    bool is_empirical() const noexcept { return std::holds_alternative<Empirical>(params_); }

    /// Throws UsageError for empirical distributions.
    double pdf(double x) const;
    double cdf(double x) const;
    /// P[X < x]; differs from cdf only for the empirical distribution.
    double cdf_left(double x) const;
    double sf(double x) const;
    double quantile(double q) const;
    double sample(Rng& rng) const;

    double support_lower() const;
    double support_upper() const;
    bool bounded_above() const;

    /// Closed form where one exists, otherwise survival-function quadrature.
    /// +infinity for infinite-mean models.
    double mean() const;

private:
    Params params_;
};

/// lower + integral of S over [lower, inf), summed over doubling segments.
/// Returns +infinity when the partial sums keep growing past the point where
/// x exceeds 1e300 or the total exceeds 1e12 times the median scale.
/// Requires a finite lower support bound.
double numeric_mean(const Distribution& d);

/// f(t) / (1 - F(t)). Throws SaturationError when 1 - F(t) has underflowed.
double hazard_rate(const Distribution& d, double t);

enum class HazardTrend { decreasing_to_zero, constant, increasing, indeterminate };
std::string to_string(HazardTrend t);

/// Classifies hazard values sampled on an increasing grid.
HazardTrend classify_hazard(std::span<const double> hazards);

enum class TailVerdict { long_tailed, not_long_tailed, inconclusive };
std::string to_string(TailVerdict v);

struct LongTailReport {
    TailVerdict verdict = TailVerdict::inconclusive;
    std::vector<double> grid;
    double ratio_y1 = 0.0;   ///< S(x + 1) / S(x) at the last grid point
    double ratio_y10 = 0.0;  ///< S(x + 10) / S(x) at the last grid point
    HazardTrend hazard = HazardTrend::indeterminate;
    bool ratio_ok = false;
    bool hazard_ok = false;
};

inline constexpr double kLongTailRatioTolerance = 0.02;

/// Bounded support gives not_long_tailed. Otherwise both the shift ratio at the
/// top of a geometric grid over [Q(0.5), Q(1 - 1e-12)] and the hazard trend on
/// that grid must agree; disagreement is inconclusive.
LongTailReport long_tail_diagnostic(const Distribution& d);

}  // namespace slstail
