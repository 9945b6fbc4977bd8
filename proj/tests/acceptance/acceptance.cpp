// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any selected criterion fails.
//
//   acceptance            run all criteria
//   acceptance 4 7 9      run a subset
//   ACCEPTANCE_WORKDIR    directory for the datasets of criteria 12 and 13

#include "slstail/distributions.hpp"
#include "slstail/experiment.hpp"
#include "slstail/fitting.hpp"
#include "slstail/instance_gen.hpp"
#include "slstail/resolution.hpp"
#include "slstail/restart.hpp"
#include "slstail/solvers.hpp"
#include "slstail/theory_sim.hpp"

#include "../support/oracles.hpp"

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

using namespace slstail;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and sizes.
constexpr std::uint64_t kMaster = 20240601;
constexpr double kResolutionBudgetSec = 10.0;
constexpr double kExtensionBudgetSec = 30.0;
constexpr double kFuzzBudgetSec = 120.0;
constexpr double kFuzzSolveRate = 0.99;
constexpr double kReciprocalKs = 0.01;
constexpr double kScaleIdentityTol = 1e-12;
constexpr double kEmbeddingFinal = 1e-2;
constexpr double kRTol = 1e-9;
constexpr double kRestartSeparationSe = 3.0;
constexpr std::size_t kRestartReps = 100000;
constexpr double kPqrAlpha = 0.01;
constexpr std::size_t kPqrReps = 100000;
constexpr double kPqrBudgetSec = 60.0;
constexpr std::size_t kLogMeanReps = 2000;
constexpr double kLogMeanSe = 3.0;
constexpr double kLogMeanVarRel = 0.10;
constexpr std::size_t kCalibTrials = 200;
constexpr std::size_t kCalibN = 200;
constexpr std::size_t kCalibPoints = 200;
constexpr double kCalibRuns = 20.0;
constexpr double kCalibLo = 0.02;
constexpr double kCalibHi = 0.08;
constexpr std::size_t kTableBases = 5;
constexpr std::size_t kTableMods = 200;
constexpr std::size_t kTableRuns = 20;
constexpr std::size_t kTableBootstrap = 200;
constexpr std::size_t kTableMaxRejections = 1;

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Timer {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, ...)
{
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// 1 -------------------------------------------------------------------------
Outcome resolution_oracle()
{
    Timer t;
    Rng rng(derive_seed(kMaster, "c1", 0));
    std::size_t mismatches = 0, compared = 0;
    double library_sec = 0.0;  // oracle time is not counted
    for (int i = 0; i < 50; ++i) {
        const unsigned n = 3 + static_cast<unsigned>(rng.below(8));
        const std::size_t m = 1 + rng.below(30);
        const CnfFormula f = oracle::random_formula(rng, n, m, 3);
        const auto raw = oracle::to_raw(f);
        for (std::size_t w : {std::size_t{2}, std::size_t{3}, std::size_t{n}}) {
            const Timer lib;
            const Closure c = res_w_star(ClauseSet(f), w);
            library_sec += lib.seconds();
            ++compared;
            if (c.stats.limit_hit || oracle::to_raw(c.clauses.clauses()) != oracle::naive_closure(raw, w)) {
                ++mismatches;
            }
        }
    }
    return {mismatches == 0 && library_sec < kResolutionBudgetSec,
            fmt("%zu/%zu closures match the all-pairs oracle, closure time %.2fs (%.2fs with oracle)",
                compared - mismatches, compared, library_sec, t.seconds())};
}

// 2 -------------------------------------------------------------------------
Outcome extension_equivalence()
{
    Timer t;
    Rng rng(derive_seed(kMaster, "c2", 0));
    std::size_t equal = 0, nonempty = 0;
    for (int i = 0; i < 100; ++i) {
        const unsigned n = 4 + static_cast<unsigned>(rng.below(9));
        const CnfFormula f = oracle::random_formula(rng, n, n + rng.below(3 * n), 3);
        const double p = 0.05 + 0.9 * rng.uniform();
        const ExtensionSet ext = sample_extension(f, 4, p, rng());
        nonempty += ext.resolvents.empty() ? 0 : 1;
        const CnfFormula g = extend_formula(f, ext);
        equal += enumerate_models(f) == enumerate_models(g) ? 1 : 0;
    }
    const double sec = t.seconds();
    return {equal == 100 && sec < kExtensionBudgetSec,
            fmt("%zu/100 model sets identical (%zu nonempty L), %.2fs", equal, nonempty, sec)};
}

// 3 -------------------------------------------------------------------------
Outcome solver_fuzz()
{
    Timer t;
    std::map<SolverAlgorithm, std::size_t> solved, bad;
    const SolverAlgorithm algs[] = {SolverAlgorithm::srwa, SolverAlgorithm::probsat_exp, SolverAlgorithm::probsat_poly};
    for (std::size_t i = 0; i < 1000; ++i) {
        GenSpec g;
        g.kind = GenKind::planted;
        g.n = 5 + static_cast<std::uint32_t>(i % 26);
        g.ratio = 4.267;
        g.seed = derive_seed(kMaster, "c3-instance", i);
        const auto inst = gen_planted(g);
        for (auto alg : algs) {
            SolverConfig c;
            c.algorithm = alg;
            c.max_flips = 1'000'000;
            c.seed = derive_seed(kMaster, "c3-run", i);
            const SolveOutcome o = solve(inst.formula, c);
            if (o.status == SolveStatus::solved) {
                ++solved[alg];
                if (!o.witness || !evaluate(inst.formula, *o.witness)) {
                    ++bad[alg];
                }
            }
        }
    }
    const double sec = t.seconds();
    bool ok = sec < kFuzzBudgetSec;
    std::string detail;
    for (auto alg : algs) {
        ok = ok && bad[alg] == 0 && solved[alg] >= kFuzzSolveRate * 1000;
        detail += fmt("%s %zu/1000 solved %zu bad; ", to_string(alg).c_str(), solved[alg], bad[alg]);
    }
    return {ok, detail + fmt("%.1fs", sec)};
}

// 4 -------------------------------------------------------------------------
Outcome reciprocal_shift()
{
    Timer t;
    const double cases[3][3] = {{0, 1, 1}, {1, 0.5, 2}, {-1, 2, 0.5}};
    bool ok = true;
    std::string detail;
    for (int k = 0; k < 3; ++k) {
        const LogNormalParams x{cases[k][0], cases[k][1], 0.0};
        const double c = cases[k][2];
        const SbParams sb = reciprocal_shift_sb(x, c);
        Rng rng(derive_seed(kMaster, "c4", k));
        std::vector<double> draws(100000);
        for (double& v : draws) {
            v = 1.0 / (c + lognormal_sample(x, rng));
        }
        const double ks = ks_distance(draws, Distribution(sb));
        ok = ok && ks < kReciprocalKs;
        detail += fmt("KS=%.4f ", ks);
    }
    const double sec = t.seconds();
    return {ok && sec < 10.0, detail + fmt("%.2fs", sec)};
}

// 5 -------------------------------------------------------------------------
Outcome scale_identity()
{
    const SbParams p{0.6, 1.3, 8.0, 2.0};
    double worst = 0.0;
    for (double g : {0.1, 3.0, 100.0}) {
        const SbParams s = sb_scale(p, g);
        for (int i = 0; i < 1000; ++i) {
            const double x = p.a() - 0.5 + (p.lambda + 1.0) * (i + 0.5) / 1000.0;
            worst = std::max(worst, std::abs(sb_cdf(g * x, s) - sb_cdf(x, p)));
        }
    }
    return {worst <= kScaleIdentityTol, fmt("max |F_g(gx) - F(x)| = %.2e", worst)};
}

// 6 -------------------------------------------------------------------------
Outcome embedding()
{
    const double mu = 1.0, sigma = 1.25, delta = 1.0 / sigma, a = 0.0;
    const LogNormalParams limit{mu, sigma, a};
    std::vector<double> sups;
    for (double b : {10.0, 100.0, 1000.0, 10000.0}) {
        const SbParams sb = sb_lognormal_embedding(mu, delta, a, b);
        double sup = 0.0;
        for (int i = 1; i <= 4000; ++i) {
            const double x = a + 40.0 * i / 4000.0;
            sup = std::max(sup, std::abs(sb_pdf(x, sb) - lognormal_pdf(x, limit)));
        }
        sups.push_back(sup);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < sups.size(); ++i) {
        decreasing = decreasing && sups[i] < sups[i - 1];
    }
    return {decreasing && sups.back() < kEmbeddingFinal,
            fmt("sup pdf distance %.3e %.3e %.3e %.3e", sups[0], sups[1], sups[2], sups[3])};
}

// 7 -------------------------------------------------------------------------
Outcome r_oracles()
{
    const auto ex = RuntimeModel::parametric(Distribution(ExponentialParams{1.0}));
    const auto un = RuntimeModel::parametric(Distribution(UniformParams{0.0, 1.0}));
    double worst_e = 0.0, worst_u = 0.0;
    for (int k = 1; k <= 19; ++k) {
        const double p = 0.05 * k;
        worst_e = std::max(worst_e, std::abs(r_functional(ex, p) - p));
        worst_u = std::max(worst_u, std::abs(r_functional(un, p) - p - p * (1 - p)));
    }
    return {worst_e < kRTol && worst_u < kRTol, fmt("exponential %.2e, uniform %.2e", worst_e, worst_u)};
}

// 8 -------------------------------------------------------------------------
Outcome restart_realization()
{
    Timer t;
    const Distribution d(LogNormalParams{1.0, 1.25, 0.0});
    const RestartVerdict v = restarts_useful(RuntimeModel::parametric(d));
    if (!v.useful || !v.witness_threshold) {
        return {false, "restarts_useful returned not useful"};
    }
    const auto est = restarted_mean_mc(d, *v.witness_threshold, kRestartReps, derive_seed(kMaster, "c8", 0));
    const double gap = (d.mean() - est.mean) / est.std_error;
    const double sec = t.seconds();
    return {gap > kRestartSeparationSe && sec < 30.0,
            fmt("p*=%.4f t*=%.3f E[X]=%.4f E[X_t]=%.4f (SE %.4f, %.1f SE), %.2fs", *v.witness_p, *v.witness_threshold,
                d.mean(), est.mean, est.std_error, gap, sec)};
}

// 9 -------------------------------------------------------------------------
Outcome pqr_asymptotics()
{
    Timer t;
    auto sims = [](std::uint64_t pool, std::uint64_t seed) {
        PqrModel m;
        m.n_in = pool;
        m.n_out = pool;
        m.n_unsat_L = 2 * pool;
        m.p = 0.3;
        SimOptions o;
        o.reps = kPqrReps;
        o.seed = seed;
        o.jitter = true;
        std::vector<std::vector<double>> out;
        out.push_back(simulate_P(m, o).values);
        const QrPair qr = simulate_QR_paired(m, o);
        out.push_back(qr.q.values);
        out.push_back(qr.r.values);
        return out;
    };
    const char* names[] = {"P", "Q", "R"};
    bool ok = true;
    std::string detail;
    // GOF at the reference pool sizes.
    std::map<std::uint64_t, std::vector<std::vector<double>>> cache;
    auto at = [&](std::uint64_t pool) -> const std::vector<std::vector<double>>& {
        auto it = cache.find(pool);
        if (it == cache.end()) {
            it = cache.emplace(pool, sims(pool, derive_seed(kMaster, "c9", pool))).first;
        }
        return it->second;
    };
    for (std::uint64_t pool : {1000, 2000}) {
        for (int k = 0; k < 3; ++k) {
            const auto& x = at(pool)[k];
            const SbFit f = mle_fit_sb(x);
            const Chi2Result c = chi2_statistic(x, Distribution(f.params), 4);
            ok = ok && c.asymptotic_pvalue > kPqrAlpha;
            detail += fmt("%s@%llu chi2=%.1f/%ld p=%.3f; ", names[k], static_cast<unsigned long long>(pool), c.chi2,
                          c.dof, c.asymptotic_pvalue);
        }
    }
    // KS to the SB fit over growing pools: no step may rise by more than the
    // Monte Carlo resolution of KS at this sample size.
    const std::uint64_t pools[] = {200, 1000, 5000};
    const double noise = 1.0 / std::sqrt(static_cast<double>(kPqrReps));
    for (int k = 0; k < 3; ++k) {
        double ks[3];
        for (int i = 0; i < 3; ++i) {
            const auto& x = at(pools[i])[k];
            ks[i] = ks_distance(x, Distribution(mle_fit_sb(x).params));
        }
        const bool trend = ks[1] < ks[0] + noise && ks[2] < ks[1] + noise;
        ok = ok && trend;
        detail += fmt("%s KS %.4f, %.4f, %.4f; ", names[k], ks[0], ks[1], ks[2]);
    }
    detail += fmt("KS noise %.4f; ", noise);
    const double sec = t.seconds();
    return {ok && sec < kPqrBudgetSec, detail + fmt("%.1fs", sec)};
}

// 10 ------------------------------------------------------------------------
Outcome log_mean_moments()
{
    bool ok = true;
    std::string detail;
    for (double p : {0.1, 0.5}) {
        const LogMeanReport r = check_log_mean(10000, p, kLogMeanReps, derive_seed(kMaster, "c10", 0));
        ok = ok && std::abs(r.mean_deviation_se) <= kLogMeanSe && std::abs(r.var_relative_error) <= kLogMeanVarRel;
        detail += fmt("p=%.1f: mean dev %.2f SE, var rel err %+.3f; ", p, r.mean_deviation_se, r.var_relative_error);
    }
    return {ok, detail};
}

// 11 ------------------------------------------------------------------------
Outcome bootstrap_calibration()
{
    Timer t;
    const SbParams truth{1.5, 0.9, 60000.0, 400.0};
    std::size_t rejections = 0, failures = 0;
    for (std::size_t trial = 0; trial < kCalibTrials; ++trial) {
        Rng rng(derive_seed(kMaster, "c11", trial));
        std::vector<double> y(kCalibPoints);
        NoiseModel noise;
        noise.variances.resize(kCalibPoints);
        for (std::size_t i = 0; i < kCalibPoints; ++i) {
            // A per-instance mean of kCalibRuns runs whose spread equals its mean.
            const double h = sb_sample(truth, rng);
            const double v = h * h / kCalibRuns;
            double obs = h + std::sqrt(v) * rng.normal();
            obs = std::max(obs, 1.0);
            y[i] = obs;
            noise.variances[i] = obs * obs / kCalibRuns;
        }
        BootstrapOptions o;
        o.replicates = kCalibN;
        o.alpha = 0.05;
        o.seed = derive_seed(kMaster, "c11-boot", trial);
        try {
            const FitReport r = bootstrap_test(y, Family::sb, noise, o);
            rejections += r.verdict == Verdict::reject ? 1 : 0;
        } catch (const NumericError&) {
            ++failures;
        }
    }
    const double rate = static_cast<double>(rejections) / static_cast<double>(kCalibTrials - failures);
    const double sec = t.seconds();
    return {rate >= kCalibLo && rate <= kCalibHi && failures == 0 && sec < 600.0,
            fmt("type-1 rate %.3f (%zu/%zu, %zu failed), %.0fs", rate, rejections, kCalibTrials - failures, failures,
                sec)};
}

// 12 and 13 -----------------------------------------------------------------
struct TableBase {
    GenSpec spec;
    CnfFormula formula;
};

std::vector<TableBase> table_bases()
{
    std::vector<TableBase> bases;
    for (std::uint64_t i = 0; bases.size() < kTableBases; ++i) {
        GenSpec g;
        g.n = 50;
        g.ratio = 4.267;
        g.seed = derive_seed(kMaster, "c12-base", i);
        const std::vector<CnfFormula> one{gen_uniform(g)};
        ScreenOptions so;
        so.seed = derive_seed(kMaster, "c12-screen", i);
        if (!screen_satisfiable(one, so).empty()) {
            bases.push_back({g, one.front()});
        }
    }
    return bases;
}

ExperimentPlan table_plan(const TableBase& b, std::size_t index)
{
    ExperimentPlan plan;
    plan.base_spec = b.spec;
    plan.modifications = kTableMods;
    plan.runs_per_mod = kTableRuns;
    plan.w = 4;
    plan.target_ratio = 0.1;
    plan.master_seed = derive_seed(kMaster, "c12-plan", index);
    return plan;
}

fs::path workdir()
{
    const char* env = std::getenv("ACCEPTANCE_WORKDIR");
    fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "slstail_acceptance";
    fs::create_directories(dir);
    return dir;
}

fs::path dataset_path(std::size_t base, std::size_t workers)
{
    return workdir() / fmt("table_base%zu_workers%zu.csv", base, workers);
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome table_analog()
{
    Timer t;
    const auto bases = table_bases();
    std::size_t sb_rej = 0, ln_rej = 0, tainted = 0;
    std::string detail;
    for (std::size_t i = 0; i < bases.size(); ++i) {
        const ExperimentPlan plan = table_plan(bases[i], i);
        RunOptions o;
        o.workers = 1;
        o.csv_path = dataset_path(i, 1);
        o.resume = false;
        const HardnessDataset ds = run_experiment(bases[i].formula, plan, o);
        tainted += ds.pool_limit_hit ? 1 : 0;
        const NoisySample s = dataset_sample(ds);
        BootstrapOptions bo;
        bo.replicates = kTableBootstrap;
        bo.alpha = 0.05;
        bo.seed = derive_seed(kMaster, "c12-boot", i);
        const FitReport sb = bootstrap_test(s.values, Family::sb, s.noise, bo);
        const FitReport ln = bootstrap_test(s.values, Family::lognormal3, s.noise, bo);
        sb_rej += sb.verdict == Verdict::reject ? 1 : 0;
        ln_rej += ln.verdict == Verdict::reject ? 1 : 0;
        detail += fmt("[base %zu: n=%zu SB p=%.3f LN p=%.3f] ", i, s.values.size(), *sb.bootstrap_pvalue,
                      *ln.bootstrap_pvalue);
    }
    const bool ok = sb_rej <= kTableMaxRejections && ln_rej <= sb_rej + 1;
    return {ok, fmt("SB rejects %zu/%zu, lognormal3 rejects %zu/%zu, %zu pools at closure limit; ", sb_rej,
                    bases.size(), ln_rej, bases.size(), tainted) +
                    detail + fmt("%.0fs", t.seconds())};
}

Outcome determinism()
{
    Timer t;
    const auto bases = table_bases();
    std::size_t identical = 0, compared = 0;
    for (std::size_t i = 0; i < bases.size(); ++i) {
        const ExperimentPlan plan = table_plan(bases[i], i);
        if (!fs::exists(dataset_path(i, 1))) {
            RunOptions o;
            o.workers = 1;
            o.csv_path = dataset_path(i, 1);
            o.resume = false;
            run_experiment(bases[i].formula, plan, o);
        }
        const std::string reference = slurp(dataset_path(i, 1));
        for (std::size_t workers : {4, 8}) {
            RunOptions o;
            o.workers = workers;
            o.csv_path = dataset_path(i, workers);
            o.resume = false;
            run_experiment(bases[i].formula, plan, o);
            ++compared;
            identical += slurp(dataset_path(i, workers)) == reference ? 1 : 0;
        }
    }
    return {identical == compared && compared == 2 * kTableBases,
            fmt("%zu/%zu reruns byte-identical to the 1-worker datasets, %.0fs", identical, compared, t.seconds())};
}

}  // namespace

int main(int argc, char** argv)
{
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"resolution closure matches naive oracle", resolution_oracle},
        {"extensions preserve the model set", extension_equivalence},
        {"solver soundness fuzz", solver_fuzz},
        {"reciprocal shift of a lognormal is SB", reciprocal_shift},
        {"SB scale identity", scale_identity},
        {"SB to lognormal embedding", embedding},
        {"R(p) quadrature oracles", r_oracles},
        {"restarts help a heavy lognormal", restart_realization},
        {"P/Q/R ratios are SB-like", pqr_asymptotics},
        {"log sample-mean moments", log_mean_moments},
        {"bootstrap test calibration", bootstrap_calibration},
        {"desk-scale hardness fits", table_analog},
        {"worker-count determinism", determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        selected.insert(std::atoi(argv[i]));
    }
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!selected.empty() && !selected.count(id)) {
            continue;
        }
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s  C%-2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), o.detail.c_str());
    }
    return failed == 0 ? 0 : 1;
}
