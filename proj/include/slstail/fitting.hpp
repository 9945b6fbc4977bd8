#pragma once

#include "slstail/distributions.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace slstail {

/// Hardness means with the number of runs behind each value.
struct Sample {
    std::vector<double> values;
    std::size_t runs = 1;
    bool tainted = false;  ///< some underlying runs were censored
};

/// Throws DataError unless values are nonempty, finite and positive.
void validate_sample(const Sample& s);

double ecdf(std::span<const double> x, double t);
/// Plotting-position interpolation, see EmpiricalDistribution::quantile.
double empirical_quantile(std::span<const double> x, double q);

enum class Family { sb, lognormal3, lognormal2 };
std::string to_string(Family f);
Family parse_family(const std::string& name);
std::size_t num_free_params(Family f);

inline constexpr std::size_t kMinFitSize = 20;

struct SbFit {
    SbParams params;
    double loglik = 0.0;
    std::size_t evaluations = 0;
    /// Best log-likelihood reached from each multistart, before polishing.
    std::vector<double> start_logliks;
};

/// Maximum likelihood Johnson SB fit.
///
/// For fixed support (a, b) the likelihood is maximized in closed form by
/// delta = 1/sd(y), gamma = -mean(y)/sd(y) with y = log((x-a)/(b-x)), so the
/// search runs over the two support margins only: a = min - e^s and
/// b = max + e^t on data rescaled to [0, 1]. Five multistarts plus a polish.
/// `start`, if given, replaces the multistarts with a single start there.
SbFit mle_fit_sb(std::span<const double> x, const SbParams* start = nullptr);
double sb_loglik(std::span<const double> x, const SbParams& p);

struct LogNormalFit {
    LogNormalParams params;
    double loglik = 0.0;
};

/// Two-parameter: closed form on log x. Three-parameter: profile likelihood
/// over the location xi in [0, min x) with the closed form inside.
LogNormalFit mle_fit_lognormal(std::span<const double> x, bool three_param);
double lognormal_loglik(std::span<const double> x, const LogNormalParams& p);

struct FitResult {
    Family family = Family::sb;
    Distribution dist{SbParams{}};
    double loglik = 0.0;
};

FitResult fit_family(std::span<const double> x, Family family);

/// k = clamp(floor(n / 25), 8, 50).
std::size_t chi2_bin_count(std::size_t n);

struct Chi2Result {
    double chi2 = 0.0;
    std::size_t bins = 0;
    long dof = 0;
    std::vector<std::size_t> observed;
    /// Upper tail of the chi-square(dof) law; NaN when dof <= 0.
    double asymptotic_pvalue = 0.0;
};

inline constexpr std::size_t kMinChi2Size = 25;

/// Equiprobable binning under the fitted cdf: x goes to bin floor(F(x) k).
Chi2Result chi2_statistic(std::span<const double> x, const Distribution& fitted, std::size_t fitted_params,
                          std::optional<std::size_t> bins = std::nullopt);

/// Exact sup |F_n - F| over the corners of the ecdf.
double ks_distance(std::span<const double> x, const Distribution& fitted);

/// Per-point noise variances aligned with the sample values. Empty means no
/// noise is added to replicates.
struct NoiseModel {
    std::vector<double> variances;
};

struct BootstrapOptions {
    std::size_t replicates = 200;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    double max_failure_fraction = 0.05;
    std::size_t threads = 1;
};

enum class Verdict { accept, reject, not_tested };
std::string to_string(Verdict v);

struct FitReport {
    Family family = Family::sb;
    std::variant<SbParams, LogNormalParams> params;
    double loglik = 0.0;
    double chi2 = 0.0;
    long dof = 0;
    std::size_t bins = 0;
    std::optional<double> bootstrap_pvalue;
    Verdict verdict = Verdict::not_tested;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t replicates = 0;
    std::size_t failed_replicates = 0;
    double alpha = 0.0;
    /// The order statistic the observed chi2 is compared against.
    std::optional<double> critical_value;
    std::vector<double> replicate_chi2;  ///< sorted, successful replicates only

    Distribution distribution() const;
};

/// Fit and chi2 only; verdict not_tested.
FitReport fit_report(std::span<const double> y, Family family);

/// Parametric bootstrap for noisy data. Each replicate draws n points from the
/// fitted law, adds independent N(0, v) noise, refits and recomputes chi2.
/// Noise variances are paired with replicate points by rank. With m the
/// floor((1 - alpha) N)-th smallest replicate chi2, the test rejects iff the
/// observed chi2 exceeds it; the p-value is #(replicate >= observed) / N.
/// Throws NumericError when more than max_failure_fraction of refits fail.
FitReport bootstrap_test(std::span<const double> y, Family family, const NoiseModel& noise,
                         const BootstrapOptions& options);

}  // namespace slstail
