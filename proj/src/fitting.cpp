#include "slstail/fitting.hpp"

#include "slstail/optimize.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

namespace slstail {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

struct Range {
    double lo;
    double hi;
};

Range checked_range(std::span<const double> x, std::size_t min_size)
{
    if (x.size() < min_size) {
        throw DataError("fit needs at least " + std::to_string(min_size) + " points, got " + std::to_string(x.size()));
    }
    Range r{x[0], x[0]};
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw DataError("fit: non-finite value in sample");
        }
        r.lo = std::min(r.lo, v);
        r.hi = std::max(r.hi, v);
    }
    if (!(r.hi > r.lo)) {
        throw DataError("fit: constant sample");
    }
    return r;
}

// Profile log-likelihood of SB with support (a, b) on data u; fills the
// maximizing gamma and delta.
double sb_profile(std::span<const double> u, double a, double b, double& gamma, double& delta)
{
    const std::size_t n = u.size();
    double sum_y = 0.0;
    double sum_log_jac = 0.0;
    thread_local std::vector<double> y;
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = u[i] - a;
        const double right = b - u[i];
        if (!(left > 0.0) || !(right > 0.0)) {
            return kNegInf;
        }
        const double ll = std::log(left);
        const double lr = std::log(right);
        y[i] = ll - lr;
        sum_y += y[i];
        sum_log_jac += ll + lr;
    }
    const double mean = sum_y / static_cast<double>(n);
    double ss = 0.0;
    for (double v : y) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (!(sd > 0.0) || !std::isfinite(sd)) {
        return kNegInf;
    }
    delta = 1.0 / sd;
    gamma = -mean / sd;
    const double dn = static_cast<double>(n);
    return -dn * std::log(sd) + dn * std::log(b - a) - sum_log_jac - 0.5 * dn * (kLog2Pi + 1.0);
}

constexpr double kMarginLo = -30.0;
constexpr double kMarginHi = 20.0;
constexpr std::size_t kSbSubsampleAbove = 20000;

}  // namespace

void validate_sample(const Sample& s)
{
    if (s.values.empty()) {
        throw DataError("sample is empty");
    }
    for (double v : s.values) {
        if (!std::isfinite(v) || !(v > 0.0)) {
            throw DataError("sample values must be finite and positive");
        }
    }
    if (s.runs == 0) {
        throw DataError("sample runs must be positive");
    }
}

double ecdf(std::span<const double> x, double t)
{
    if (x.empty()) {
        throw UsageError("ecdf of an empty sample");
    }
    const auto count = std::count_if(x.begin(), x.end(), [t](double v) { return v <= t; });
    return static_cast<double>(count) / static_cast<double>(x.size());
}

double empirical_quantile(std::span<const double> x, double q)
{
    return EmpiricalDistribution(x).quantile(q);
}

std::string to_string(Family f)
{
    switch (f) {
    case Family::sb:
        return "SB";
    case Family::lognormal3:
        return "LogNormal3";
    case Family::lognormal2:
        return "LogNormal2";
    }
    return "?";
}

Family parse_family(const std::string& name)
{
    std::string s;
    for (char c : name) {
        s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (s == "sb" || s == "johnson_sb" || s == "johnson-sb") {
        return Family::sb;
    }
    if (s == "lognormal3" || s == "lognormal") {
        return Family::lognormal3;
    }
    if (s == "lognormal2") {
        return Family::lognormal2;
    }
    throw UsageError("unknown family '" + name + "' (expected sb, lognormal3, lognormal2)");
}

std::size_t num_free_params(Family f)
{
    switch (f) {
    case Family::sb:
        return 4;
    case Family::lognormal3:
        return 3;
    case Family::lognormal2:
        return 2;
    }
    return 0;
}

double sb_loglik(std::span<const double> x, const SbParams& p)
{
    double total = 0.0;
    for (double v : x) {
        const double f = sb_pdf(v, p);
        if (!(f > 0.0)) {
            return kNegInf;
        }
        total += std::log(f);
    }
    return total;
}

SbFit mle_fit_sb(std::span<const double> x, const SbParams* start)
{
    const Range r = checked_range(x, kMinFitSize);
    const double range = r.hi - r.lo;
    std::vector<double> u(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        u[i] = (x[i] - r.lo) / range;
    }

    SbFit fit;
    auto objective_on = [](const std::vector<double>& v) {
        return [&v](std::span<const double> st) {
            if (st[0] < kMarginLo || st[0] > kMarginHi || st[1] < kMarginLo || st[1] > kMarginHi) {
                return std::numeric_limits<double>::infinity();
            }
            double g = 0.0;
            double d = 0.0;
            return -sb_profile(v, -std::exp(st[0]), 1.0 + std::exp(st[1]), g, d);
        };
    };
    const auto objective = objective_on(u);
    // Large samples: pick the start on a strided subsample, refine on all of u.
    std::vector<double> sub;
    if (u.size() > kSbSubsampleAbove) {
        const std::size_t stride = (u.size() + kSbSubsampleAbove - 1) / kSbSubsampleAbove;
        for (std::size_t i = 0; i < u.size(); i += stride) {
            sub.push_back(u[i]);
        }
    }
    const auto search = objective_on(sub.empty() ? u : sub);

    std::vector<std::vector<double>> starts;
    if (start != nullptr) {
        validate(*start);
        const double a = (start->a() - r.lo) / range;
        const double b = (start->b() - r.lo) / range;
        if (!(a < 0.0) || !(b > 1.0)) {
            throw UsageError("mle_fit_sb: start support must bracket the sample");
        }
        starts.push_back({std::log(-a), std::log(b - 1.0)});
    } else {
        for (auto [sa, sb] : {std::pair{0.05, 0.05}, {0.01, 0.5}, {0.5, 0.01}, {0.2, 0.2}, {2.0, 2.0}}) {
            starts.push_back({std::log(sa), std::log(sb)});
        }
    }

    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    const double log_range = std::log(range);
    const double dn = static_cast<double>(x.size());
    for (const auto& s0 : starts) {
        auto res = nelder_mead(search, s0, {1.0, 1.0});
        fit.evaluations += res.evaluations;
        if (!sub.empty()) {
            res.value = objective(res.x);
        }
        fit.start_logliks.push_back(-res.value - dn * log_range);
        if (res.value < best.value) {
            best = std::move(res);
        }
    }
    if (!sub.empty() && std::isfinite(best.value)) {
        auto refined = nelder_mead(objective, best.x, {0.3, 0.3});
        fit.evaluations += refined.evaluations;
        if (refined.value <= best.value) {
            best = std::move(refined);
        }
    }
    auto polished = nelder_mead(objective, best.x, {0.1, 0.1});
    fit.evaluations += polished.evaluations;
    if (polished.value <= best.value) {
        best = std::move(polished);
    }
    if (!std::isfinite(best.value)) {
        throw NumericError("mle_fit_sb: no finite likelihood found");
    }

    const double a = -std::exp(best.x[0]);
    const double b = 1.0 + std::exp(best.x[1]);
    double gamma = 0.0;
    double delta = 0.0;
    const double ll = sb_profile(u, a, b, gamma, delta);
    fit.params = SbParams{gamma, delta, range * (b - a), r.lo + range * a};
    fit.loglik = ll - dn * log_range;
    return fit;
}

double lognormal_loglik(std::span<const double> x, const LogNormalParams& p)
{
    double total = 0.0;
    for (double v : x) {
        const double f = lognormal_pdf(v, p);
        if (!(f > 0.0)) {
            return kNegInf;
        }
        total += std::log(f);
    }
    return total;
}

namespace {

// Closed-form two-parameter fit of log(x - xi); returns the log-likelihood.
double lognormal_profile(std::span<const double> x, double xi, double& mu, double& sigma)
{
    const std::size_t n = x.size();
    thread_local std::vector<double> ly;
    ly.resize(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - xi;
        if (!(d > 0.0)) {
            return kNegInf;
        }
        ly[i] = std::log(d);
        sum += ly[i];
    }
    const double dn = static_cast<double>(n);
    mu = sum / dn;
    double ss = 0.0;
    for (double v : ly) {
        ss += (v - mu) * (v - mu);
    }
    sigma = std::sqrt(ss / dn);
    if (!(sigma > 0.0)) {
        return kNegInf;
    }
    return -sum - dn * std::log(sigma) - 0.5 * dn * (kLog2Pi + 1.0);
}

}  // namespace

LogNormalFit mle_fit_lognormal(std::span<const double> x, bool three_param)
{
    const Range r = checked_range(x, kMinFitSize);
    if (!(r.lo > 0.0)) {
        throw DataError("lognormal fit needs positive values");
    }
    LogNormalFit fit;
    double mu = 0.0;
    double sigma = 0.0;
    if (!three_param) {
        fit.loglik = lognormal_profile(x, 0.0, mu, sigma);
        if (!std::isfinite(fit.loglik)) {
            throw NumericError("lognormal fit: degenerate log sample");
        }
        fit.params = LogNormalParams{mu, sigma, 0.0};
        return fit;
    }

    // Search s = log(min - xi) over [log(min) - 23, log(min)]; s = log(min) is xi = 0.
    const double s_hi = std::log(r.lo);
    const double s_lo = s_hi - 23.0;
    auto negll = [&](double s) {
        double m = 0.0;
        double sg = 0.0;
        return -lognormal_profile(x, r.lo - std::exp(s), m, sg);
    };
    constexpr int kGrid = 93;
    std::vector<double> values(kGrid);
    int best = 0;
    for (int i = 0; i < kGrid; ++i) {
        const double s = s_lo + (s_hi - s_lo) * i / (kGrid - 1);
        values[i] = negll(s);
        if (values[i] < values[best]) {
            best = i;
        }
    }
    auto at = [&](int i) { return s_lo + (s_hi - s_lo) * std::clamp(i, 0, kGrid - 1) / (kGrid - 1); };
    const auto refined = golden_section_minimize(negll, at(best - 1), at(best + 1), 1e-12);
    const double s_best = refined.value < values[best] ? refined.x : at(best);
    // xi = 0 exactly at the upper end, avoiding min - exp(log(min)) rounding.
    const double xi = s_best >= s_hi ? 0.0 : std::max(0.0, r.lo - std::exp(s_best));
    fit.loglik = lognormal_profile(x, xi, mu, sigma);
    if (!std::isfinite(fit.loglik)) {
        throw NumericError("lognormal fit: no finite likelihood found");
    }
    fit.params = LogNormalParams{mu, sigma, xi};
    return fit;
}

FitResult fit_family(std::span<const double> x, Family family)
{
    switch (family) {
    case Family::sb: {
        const auto f = mle_fit_sb(x);
        return FitResult{family, Distribution(f.params), f.loglik};
    }
    case Family::lognormal3:
    case Family::lognormal2: {
        const auto f = mle_fit_lognormal(x, family == Family::lognormal3);
        return FitResult{family, Distribution(f.params), f.loglik};
    }
    }
    throw UsageError("fit_family: unknown family");
}

std::size_t chi2_bin_count(std::size_t n)
{
    return std::clamp<std::size_t>(n / 25, 8, 50);
}

Chi2Result chi2_statistic(std::span<const double> x, const Distribution& fitted, std::size_t fitted_params,
                          std::optional<std::size_t> bins)
{
    const std::size_t n = x.size();
    if (n < kMinChi2Size) {
        throw DataError("chi2 needs at least " + std::to_string(kMinChi2Size) + " points");
    }
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    if (*hi_it > *lo_it && !(fitted.cdf(*hi_it) > fitted.cdf(*lo_it))) {
        throw NumericError("chi2: fitted cdf is flat over the sample range");
    }
    Chi2Result res;
    res.bins = bins.value_or(chi2_bin_count(n));
    if (res.bins < 2) {
        throw UsageError("chi2 needs at least 2 bins");
    }
    res.observed.assign(res.bins, 0);
    const double k = static_cast<double>(res.bins);
    for (double v : x) {
        const double u = fitted.cdf(v);
        auto j = static_cast<std::size_t>(std::clamp(std::floor(u * k), 0.0, k - 1.0));
        ++res.observed[j];
    }
    const double expected = static_cast<double>(n) / k;
    for (std::size_t o : res.observed) {
        const double d = static_cast<double>(o) - expected;
        res.chi2 += d * d / expected;
    }
    res.dof = static_cast<long>(res.bins) - 1 - static_cast<long>(fitted_params);
    res.asymptotic_pvalue = res.dof > 0
                                ? boost::math::gamma_q(0.5 * static_cast<double>(res.dof), 0.5 * res.chi2)
                                : std::numeric_limits<double>::quiet_NaN();
    return res;
}

double ks_distance(std::span<const double> x, const Distribution& fitted)
{
    if (x.empty()) {
        throw UsageError("ks_distance of an empty sample");
    }
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t j = i;
        while (j < s.size() && s[j] == s[i]) {
            ++j;
        }
        const double below = static_cast<double>(i) / n;  // ecdf just left of s[i]
        const double at = static_cast<double>(j) / n;     // ecdf at s[i]
        d = std::max({d, std::abs(at - fitted.cdf(s[i])), std::abs(below - fitted.cdf_left(s[i]))});
        i = j;
    }
    return d;
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::accept:
        return "accept";
    case Verdict::reject:
        return "reject";
    case Verdict::not_tested:
        break;
    }
    return "not_tested";
}

Distribution FitReport::distribution() const
{
    return std::visit([](const auto& p) { return Distribution(p); }, params);
}

FitReport fit_report(std::span<const double> y, Family family)
{
    const FitResult fit = fit_family(y, family);
    const Chi2Result chi = chi2_statistic(y, fit.dist, num_free_params(family));
    FitReport rep;
    rep.family = family;
    if (const auto* sb = std::get_if<SbParams>(&fit.dist.params())) {
        rep.params = *sb;
    } else {
        rep.params = std::get<LogNormalParams>(fit.dist.params());
    }
    rep.loglik = fit.loglik;
    rep.chi2 = chi.chi2;
    rep.dof = chi.dof;
    rep.bins = chi.bins;
    rep.n = y.size();
    return rep;
}

FitReport bootstrap_test(std::span<const double> y, Family family, const NoiseModel& noise,
                         const BootstrapOptions& options)
{
    if (options.replicates < 1) {
        throw UsageError("bootstrap needs N >= 1");
    }
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
        throw UsageError("bootstrap alpha must lie in (0, 1)");
    }
    if (!noise.variances.empty() && noise.variances.size() != y.size()) {
        throw UsageError("noise model size does not match the sample");
    }
    for (double v : noise.variances) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw UsageError("noise variances must be finite and nonnegative");
        }
    }

    FitReport rep = fit_report(y, family);
    rep.seed = options.seed;
    rep.alpha = options.alpha;
    rep.replicates = options.replicates;
    const Distribution fitted = rep.distribution();
    const std::size_t n = y.size();
    const std::size_t params = num_free_params(family);

    // Noise standard deviations in the rank order of y.
    std::vector<double> sd_by_rank;
    if (!noise.variances.empty()) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
        for (std::size_t k : idx) {
            sd_by_rank.push_back(std::sqrt(noise.variances[k]));
        }
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> stats(options.replicates, nan);
    auto run_replicate = [&](std::size_t j) {
        Rng rng(derive_seed(options.seed, "bootstrap", j));
        std::vector<double> z(n);
        for (double& v : z) {
            v = fitted.sample(rng);
        }
        if (!sd_by_rank.empty()) {
            std::sort(z.begin(), z.end());
            for (std::size_t i = 0; i < n; ++i) {
                z[i] += sd_by_rank[i] * rng.normal();
            }
        }
        try {
            const FitResult refit = fit_family(z, family);
            stats[j] = chi2_statistic(z, refit.dist, params).chi2;
        } catch (const std::exception&) {
            stats[j] = nan;
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads, options.replicates));
    if (workers == 1) {
        for (std::size_t j = 0; j < options.replicates; ++j) {
            run_replicate(j);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t j = next++; j < options.replicates; j = next++) {
                    run_replicate(j);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    for (double s : stats) {
        if (std::isnan(s)) {
            ++rep.failed_replicates;
        } else {
            rep.replicate_chi2.push_back(s);
        }
    }
    const double fail_fraction = static_cast<double>(rep.failed_replicates) / static_cast<double>(options.replicates);
    if (fail_fraction > options.max_failure_fraction || rep.replicate_chi2.empty()) {
        throw NumericError("bootstrap: " + std::to_string(rep.failed_replicates) + " of " +
                           std::to_string(options.replicates) + " replicate refits failed");
    }
    std::sort(rep.replicate_chi2.begin(), rep.replicate_chi2.end());
    const std::size_t ne = rep.replicate_chi2.size();
    const auto m = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::floor((1.0 - options.alpha) * static_cast<double>(ne) + 1e-9)), 1, ne);
    rep.critical_value = rep.replicate_chi2[m - 1];
    const auto at_least = std::count_if(rep.replicate_chi2.begin(), rep.replicate_chi2.end(),
                                        [&](double s) { return s >= rep.chi2; });
    rep.bootstrap_pvalue = static_cast<double>(at_least) / static_cast<double>(ne);
    rep.verdict = rep.chi2 > *rep.critical_value ? Verdict::reject : Verdict::accept;
    return rep;
}

}  // namespace slstail
