// slstail command line: instance generation, extension, solving, experiments,
// fitting and the restart / P-Q-R analyses.

#include "slstail/dimacs.hpp"
#include "slstail/distributions.hpp"
#include "slstail/error.hpp"
#include "slstail/experiment.hpp"
#include "slstail/fitting.hpp"
#include "slstail/instance_gen.hpp"
#include "slstail/resolution.hpp"
#include "slstail/restart.hpp"
#include "slstail/serialization.hpp"
#include "slstail/solvers.hpp"
#include "slstail/theory_sim.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace slstail;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

void print_config(const std::string& command, Json config)
{
    Json j = Json::object();
    j["command"] = command;
    j["config"] = std::move(config);
    std::cerr << j.dump() << '\n';
}

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::ofstream open_out(const fs::path& path)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    return out;
}

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    auto out = open_out(path);
    out << text;
}

// One value per line; '#' comments and a non-numeric header line are skipped.
// A hardness dataset is recognised by its schema line.
NoisySample read_values(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path);
    }
    std::string first;
    std::getline(in, first);
    if (first.rfind("# schema=slstail.hardness/", 0) == 0) {
        in.seekg(0);
        return dataset_sample(read_hardness_csv(in));
    }
    in.seekg(0);
    NoisySample s;
    std::string line;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const std::string field = line.substr(0, line.find(','));
        double v = 0.0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
            if (header_allowed) {
                header_allowed = false;
                continue;
            }
            throw DataError("not a number: '" + field + "' in " + path);
        }
        header_allowed = false;
        s.values.push_back(v);
    }
    return s;
}

void write_samples_csv(const std::string& path, const std::vector<double>& values)
{
    std::ostringstream os;
    os << "# schema=slstail.samples/1\nvalue\n";
    for (double v : values) {
        os << format_double(v) << '\n';
    }
    write_text(path, os.str());
}

void write_plot_csvs(const fs::path& dir, std::vector<double> x, const Distribution& fitted)
{
    fs::create_directories(dir);
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    auto ecdf_out = open_out(dir / "ecdf_vs_cdf.csv");
    auto left_out = open_out(dir / "left_tail.csv");
    auto surv_out = open_out(dir / "survival.csv");
    ecdf_out << "# schema=slstail.plot/1\nt,ecdf,fitted_cdf\n";
    left_out << "# schema=slstail.plot/1\nt,ecdf,fitted_cdf\n";
    surv_out << "# schema=slstail.plot/1\nt,empirical_sf,fitted_sf\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i + 1 < x.size() && x[i + 1] == x[i]) {
            continue;  // one row per distinct value, at the top of its step
        }
        const double t = x[i];
        const double e = static_cast<double>(i + 1) / n;
        const double f = fitted.cdf(t);
        ecdf_out << format_double(t) << ',' << format_double(e) << ',' << format_double(f) << '\n';
        if (e > 0.0 && f > 0.0) {
            left_out << format_double(t) << ',' << format_double(e) << ',' << format_double(f) << '\n';
        }
        const double es = 1.0 - e;
        const double fs_ = fitted.sf(t);
        if (es > 0.0 && fs_ > 0.0) {
            surv_out << format_double(t) << ',' << format_double(es) << ',' << format_double(fs_) << '\n';
        }
    }
}

struct SolverFlags {
    std::string algorithm = "srwa";
    std::string t_restart = "inf";
    std::uint64_t max_flips = 100'000'000;
    std::optional<double> cb;
    double eps = 1.0;

    void add(CLI::App* app)
    {
        app->add_option("--algorithm", algorithm, "srwa | probsat-poly | probsat-exp");
        app->add_option("--t-restart", t_restart, "flips between restarts, or inf");
        app->add_option("--max-flips", max_flips, "total flip budget per run");
        app->add_option("--cb", cb, "probSAT break exponent");
        app->add_option("--eps", eps, "probSAT polynomial epsilon");
    }

    SolverConfig config(std::uint64_t seed) const
    {
        SolverConfig c;
        c.algorithm = parse_solver_algorithm(algorithm);
        if (t_restart == "inf") {
            c.t_restart = kNoRestart;
        } else {
            try {
                c.t_restart = std::stoull(t_restart);
            } catch (const std::exception&) {
                throw UsageError("--t-restart must be a positive integer or inf");
            }
        }
        c.max_flips = max_flips;
        c.seed = seed;
        c.cb = cb;
        c.eps = eps;
        c.validate();
        return c;
    }
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"slstail: hardness distributions of SLS solvers on resolution-extended formulas"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "expand all subcommand help");

    std::uint64_t seed = 0;
    auto add_seed = [&seed](CLI::App* sub) { sub->add_option("--seed", seed, "64-bit seed"); };

    // generate
    auto* gen = app.add_subcommand("generate", "random uniform or planted k-CNF");
    std::string gen_kind = "uniform";
    GenSpec gen_spec;
    std::string gen_out;
    std::string gen_sidecar;
    gen->add_option("--kind", gen_kind, "uniform | planted")->check(CLI::IsMember({"uniform", "planted"}));
    gen->add_option("--n", gen_spec.n, "variables");
    gen->add_option("--k", gen_spec.k, "clause width");
    gen->add_option("--ratio", gen_spec.ratio, "clauses per variable");
    gen->add_option("--out", gen_out, "DIMACS output (default stdout)");
    gen->add_option("--sidecar", gen_sidecar, "JSON sidecar (default <out>.json when --out is given)");
    add_seed(gen);

    // extend
    auto* ext = app.add_subcommand("extend", "sample a set L of new width-bounded resolvents of F");
    std::string ext_input;
    std::size_t ext_w = 4;
    std::optional<double> ext_p;
    double ext_ratio = 0.1;
    std::string ext_out;
    bool ext_full = false;
    std::size_t ext_max_clauses = ClosureLimits{}.max_clauses;
    ext->add_option("--input", ext_input, "base DIMACS")->required();
    ext->add_option("--w", ext_w, "resolvent width bound");
    auto* ext_p_opt = ext->add_option("--p", ext_p, "inclusion probability");
    ext->add_option("--target-ratio", ext_ratio, "calibrate p so that E|L| = ratio * |F|")->excludes(ext_p_opt);
    ext->add_option("--out", ext_out, "DIMACS output (default stdout)");
    ext->add_flag("--full", ext_full, "emit F followed by L instead of L alone");
    ext->add_option("--max-clauses", ext_max_clauses, "closure size limit");
    add_seed(ext);

    // solve
    auto* sol = app.add_subcommand("solve", "run SRWA or probSAT and report flips");
    std::string sol_input;
    std::size_t sol_runs = 1;
    SolverFlags sol_flags;
    sol->add_option("--input", sol_input, "DIMACS instance")->required();
    sol->add_option("--runs", sol_runs, "independent runs (run j uses derive_seed(seed, \"run\", j))");
    sol_flags.add(sol);
    add_seed(sol);

    // experiment
    auto* exp = app.add_subcommand("experiment", "hardness dataset over random extensions of one base");
    std::string exp_plan_path;
    std::string exp_base;
    std::string exp_kind = "uniform";
    GenSpec exp_spec;
    std::uint64_t exp_base_seed = 0;
    bool exp_generate = false;
    std::size_t exp_mods = 200;
    std::size_t exp_runs = 20;
    std::size_t exp_w = 4;
    std::optional<double> exp_p;
    double exp_ratio = 0.1;
    std::string exp_out;
    std::size_t exp_workers = 0;
    bool exp_no_resume = false;
    bool exp_trusted = false;
    SolverFlags exp_flags;
    exp->add_option("--plan", exp_plan_path, "JSON plan file (other plan flags are then ignored)");
    exp->add_option("--base", exp_base, "base DIMACS");
    exp->add_flag("--generate-base", exp_generate, "generate the base from --base-kind/--base-n/--base-seed");
    exp->add_option("--base-kind", exp_kind, "uniform | planted");
    exp->add_option("--base-n", exp_spec.n, "variables of a generated base");
    exp->add_option("--base-ratio", exp_spec.ratio, "ratio of a generated base");
    exp->add_option("--base-seed", exp_base_seed, "seed of a generated base");
    exp->add_option("--modifications", exp_mods, "number of extensions M");
    exp->add_option("--runs", exp_runs, "runs per modified instance");
    exp->add_option("--w", exp_w, "resolvent width bound");
    exp->add_option("--p", exp_p, "inclusion probability (default: calibrated)");
    exp->add_option("--target-ratio", exp_ratio, "E|L| / |F| when calibrating p");
    exp->add_option("--out", exp_out, "dataset CSV")->required();
    exp->add_option("--workers", exp_workers, "worker threads (0 = hardware concurrency)");
    exp->add_flag("--no-resume", exp_no_resume, "overwrite an existing dataset instead of resuming");
    exp->add_flag("--trusted", exp_trusted, "skip the satisfiability screen of the base");
    exp_flags.add(exp);
    add_seed(exp);

    // fit
    auto* fit = app.add_subcommand("fit", "fit a hardness dataset and run the bootstrap test");
    std::string fit_dataset;
    std::string fit_family = "sb";
    std::size_t fit_n = 200;
    double fit_alpha = 0.05;
    std::string fit_plots;
    std::size_t fit_threads = 1;
    fit->add_option("--dataset", fit_dataset, "hardness CSV")->required();
    fit->add_option("--family", fit_family, "sb | lognormal3 | lognormal2");
    fit->add_option("--bootstrap", fit_n, "bootstrap replicates N (0 = fit only)");
    fit->add_option("--alpha", fit_alpha, "significance level");
    fit->add_option("--plot-dir", fit_plots, "directory for ecdf, left-tail and survival CSVs");
    fit->add_option("--threads", fit_threads, "bootstrap threads");
    add_seed(fit);

    // goftest
    auto* gof = app.add_subcommand("goftest", "bootstrap goodness-of-fit test on a list of values");
    std::string gof_values;
    std::string gof_family = "sb";
    std::size_t gof_n = 200;
    double gof_alpha = 0.05;
    std::optional<double> gof_noise;
    gof->add_option("--values", gof_values, "one value per line, or a hardness CSV")->required();
    gof->add_option("--family", gof_family, "sb | lognormal3 | lognormal2");
    gof->add_option("--N", gof_n, "bootstrap replicates");
    gof->add_option("--alpha", gof_alpha, "significance level");
    gof->add_option("--noise-var", gof_noise, "constant per-point noise variance (default: none, or the dataset's)");
    add_seed(gof);

    // restart-analyze
    auto* rst = app.add_subcommand("restart-analyze", "is R(p) < p for some p?");
    std::string rst_values;
    std::string rst_dist;
    std::size_t rst_grid = 512;
    std::size_t rst_mc = 0;
    rst->add_option("--values", rst_values, "runtime sample or hardness CSV");
    rst->add_option("--dist", rst_dist, "parametric model as JSON, e.g. {\"family\":\"lognormal\",\"mu\":1,\"sigma\":1.25}");
    rst->add_option("--grid-points", rst_grid, "p grid size");
    rst->add_option("--mc-reps", rst_mc, "also simulate the restarted mean at the witness (parametric)");
    add_seed(rst);

    // simulate-pqr
    auto* pqr = app.add_subcommand("simulate-pqr", "Monte Carlo of the P, Q, R clause-count ratios");
    std::string pqr_which = "P";
    PqrModel pqr_model;
    std::size_t pqr_reps = 100000;
    bool pqr_jitter = false;
    std::string pqr_out;
    bool pqr_fit = false;
    pqr->add_option("--which", pqr_which, "P | Q | R | QR (paired)")->check(CLI::IsMember({"P", "Q", "R", "QR"}));
    pqr->add_option("--n-in", pqr_model.n_in);
    pqr->add_option("--n-out", pqr_model.n_out);
    pqr->add_option("--n-unsat-l", pqr_model.n_unsat_L);
    pqr->add_option("--m-f", pqr_model.m_F);
    pqr->add_option("--p", pqr_model.p);
    pqr->add_option("--ell", pqr_model.ell);
    pqr->add_option("--reps", pqr_reps);
    pqr->add_flag("--jitter", pqr_jitter, "uniform continuity correction of the binomial counts");
    pqr->add_option("--out", pqr_out, "sample CSV (for QR: prefix, writes <out>.Q.csv and <out>.R.csv)");
    pqr->add_flag("--fit", pqr_fit, "fit Johnson SB and report chi2 and KS");
    add_seed(pqr);

    // check-lemma
    auto* chk = app.add_subcommand("check-lemma", "numerical checks of the distributional identities");
    std::string chk_which;
    double chk_mu = 0.0, chk_sigma = 1.0, chk_c = 1.0, chk_delta = 0.8, chk_a = 0.0;
    double chk_p = 0.5;
    std::uint64_t chk_n = 10000;
    std::size_t chk_reps = 100000;
    chk->add_option("which", chk_which, "reciprocal-shift | log-mean | embedding")
        ->required()
        ->check(CLI::IsMember({"reciprocal-shift", "log-mean", "embedding"}));
    chk->add_option("--mu", chk_mu);
    chk->add_option("--sigma", chk_sigma);
    chk->add_option("--c", chk_c);
    chk->add_option("--delta", chk_delta);
    chk->add_option("--a", chk_a);
    chk->add_option("--n", chk_n);
    chk->add_option("--p", chk_p);
    chk->add_option("--reps", chk_reps);
    add_seed(chk);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) {
            gen_spec.kind = gen_kind == "planted" ? GenKind::planted : GenKind::uniform;
            gen_spec.seed = seed;
            print_config("generate", gen_spec);
            Json sidecar = gen_spec;
            std::string dimacs;
            if (gen_spec.kind == GenKind::planted) {
                const auto inst = gen_planted(gen_spec);
                dimacs = emit_dimacs(inst.formula, {"planted-simple n=" + std::to_string(gen_spec.n) +
                                                    " seed=" + std::to_string(seed)});
                std::vector<int> hidden;
                for (Var v = 1; v <= gen_spec.n; ++v) {
                    hidden.push_back(inst.hidden.value(v) ? static_cast<int>(v) : -static_cast<int>(v));
                }
                sidecar["hidden"] = hidden;
            } else {
                dimacs = emit_dimacs(gen_uniform(gen_spec), {"uniform n=" + std::to_string(gen_spec.n) +
                                                             " seed=" + std::to_string(seed)});
            }
            write_text(gen_out, dimacs);
            const std::string side = !gen_sidecar.empty() ? gen_sidecar : (gen_out.empty() ? "" : gen_out + ".json");
            if (!side.empty()) {
                write_text(side, sidecar.dump(2) + "\n");
            }
            return kOk;
        }

        if (*ext) {
            const CnfFormula f = read_dimacs_file(ext_input);
            ClosureLimits limits;
            limits.max_clauses = ext_max_clauses;
            const ExtensionPool pool = build_extension_pool(f, ext_w, limits);
            const double p = ext_p ? *ext_p : calibrate_p(pool, ext_ratio);
            Json cfg{{"input", ext_input}, {"w", ext_w},   {"p", p}, {"target_ratio", ext_p ? Json(nullptr) : Json(ext_ratio)},
                     {"seed", seed},       {"full", ext_full}, {"pool_size", pool.candidates.size()},
                     {"closure_rounds", pool.stats.rounds}, {"limit_hit", pool.stats.limit_hit}};
            print_config("extend", cfg);
            const ExtensionSet set = sample_from_pool(pool, p, seed);
            write_text(ext_out, ext_full ? emit_dimacs(extend_formula(f, set)) : emit_extension_dimacs(f, set));
            return kOk;
        }

        if (*sol) {
            const CnfFormula f = read_dimacs_file(sol_input);
            const SolverConfig cfg = sol_flags.config(seed);
            Json j = cfg;
            j["input"] = sol_input;
            j["runs"] = sol_runs;
            print_config("solve", j);
            const BatchResult batch = run_batch(f, cfg, sol_runs);
            write_batch_csv(std::cout, fs::path(sol_input).filename().string(), batch);
            return kOk;
        }

        if (*exp) {
            ExperimentPlan plan;
            if (!exp_plan_path.empty()) {
                std::ifstream in(exp_plan_path);
                if (!in) {
                    throw DataError("cannot open " + exp_plan_path);
                }
                plan = plan_from_json(Json::parse(in));
            } else {
                if (exp_generate) {
                    exp_spec.kind = exp_kind == "planted" ? GenKind::planted : GenKind::uniform;
                    exp_spec.seed = exp_base_seed;
                    plan.base_spec = exp_spec;
                } else if (!exp_base.empty()) {
                    plan.base_path = exp_base;
                }
                plan.modifications = exp_mods;
                plan.runs_per_mod = exp_runs;
                plan.w = exp_w;
                plan.p = exp_p;
                plan.target_ratio = exp_ratio;
                plan.solver = exp_flags.config(0);
                plan.master_seed = seed;
                plan.trusted = exp_trusted;
            }
            plan.validate();
            Json j = plan_to_json(plan);
            j["out"] = exp_out;
            j["workers"] = exp_workers;
            print_config("experiment", j);
            const CnfFormula base = load_base_instance(plan);
            RunOptions opts;
            opts.workers = exp_workers;
            opts.csv_path = exp_out;
            opts.resume = !exp_no_resume;
            const HardnessDataset ds = run_experiment(base, plan, opts);
            std::size_t censored = 0;
            for (const auto& r : ds.rows) {
                censored += r.censored ? 1 : 0;
            }
            Json summary{{"rows", ds.rows.size()},
                         {"censored_rows", censored},
                         {"p", ds.p},
                         {"pool_size", ds.pool_size},
                         {"pool_limit_hit", ds.pool_limit_hit}};
            std::cout << summary.dump() << '\n';
            return kOk;
        }

        if (*fit) {
            const Family family = parse_family(fit_family);
            Json cfg{{"dataset", fit_dataset}, {"family", to_string(family)}, {"bootstrap", fit_n},
                     {"alpha", fit_alpha},     {"seed", seed},                {"plot_dir", fit_plots}};
            print_config("fit", cfg);
            const NoisySample s = dataset_sample(read_hardness_csv(fs::path(fit_dataset)));
            if (s.values.size() < kMinChi2Size) {
                throw DataError("fit needs at least " + std::to_string(kMinChi2Size) + " non-censored rows, got " +
                                std::to_string(s.values.size()));
            }
            FitReport rep;
            if (fit_n == 0) {
                rep = fit_report(s.values, family);
            } else {
                BootstrapOptions bo;
                bo.replicates = fit_n;
                bo.alpha = fit_alpha;
                bo.seed = seed;
                bo.threads = fit_threads;
                rep = bootstrap_test(s.values, family, s.noise, bo);
            }
            rep.seed = seed;
            if (!fit_plots.empty()) {
                write_plot_csvs(fit_plots, s.values, rep.distribution());
            }
            Json out = rep;
            out["dropped_censored"] = s.dropped_censored;
            std::cout << out.dump(2) << '\n';
            return kOk;
        }

        if (*gof) {
            const Family family = parse_family(gof_family);
            NoisySample s = read_values(gof_values);
            if (gof_noise) {
                s.noise.variances.assign(s.values.size(), *gof_noise);
            }
            Json cfg{{"values", gof_values}, {"family", to_string(family)}, {"N", gof_n},
                     {"alpha", gof_alpha},   {"seed", seed},
                     {"noise", gof_noise ? Json(*gof_noise) : Json(s.noise.variances.empty() ? "none" : "dataset")}};
            print_config("goftest", cfg);
            BootstrapOptions bo;
            bo.replicates = gof_n;
            bo.alpha = gof_alpha;
            bo.seed = seed;
            std::cout << Json(bootstrap_test(s.values, family, s.noise, bo)).dump(2) << '\n';
            return kOk;
        }

        if (*rst) {
            if (rst_values.empty() == rst_dist.empty()) {
                throw UsageError("restart-analyze needs exactly one of --values or --dist");
            }
            Json cfg{{"values", rst_values}, {"dist", rst_dist}, {"grid_points", rst_grid}, {"mc_reps", rst_mc},
                     {"seed", seed}};
            print_config("restart-analyze", cfg);
            const auto grid = default_restart_grid(rst_grid);
            Json out = Json::object();
            auto mc_check = [&](const Distribution& d, const RestartVerdict& v) {
                Json j = Json::object();
                if (rst_mc == 0 || !v.witness_threshold) {
                    return Json(nullptr);
                }
                const auto est = restarted_mean_mc(d, *v.witness_threshold, rst_mc, seed);
                j["restarted_mean"] = est.mean;
                j["std_error"] = est.std_error;
                j["unrestarted_mean"] = d.mean();
                j["capped_reps"] = est.capped_reps;
                return j;
            };
            if (!rst_dist.empty()) {
                const Distribution d = distribution_from_json(Json::parse(rst_dist));
                const RestartVerdict v = restarts_useful(RuntimeModel::parametric(d), grid);
                out["parametric"] = v;
                out["parametric"]["model"] = distribution_to_json(d);
                out["parametric"]["monte_carlo"] = mc_check(d, v);
            } else {
                const NoisySample s = read_values(rst_values);
                out["empirical"] = restarts_useful(RuntimeModel::empirical(s.values), grid);
                const auto ln = mle_fit_lognormal(s.values, true);
                const Distribution d(ln.params);
                const RestartVerdict v = restarts_useful(RuntimeModel::parametric(d), grid);
                out["lognormal"] = v;
                out["lognormal"]["model"] = distribution_to_json(d);
                out["lognormal"]["monte_carlo"] = mc_check(d, v);
            }
            std::cout << out.dump(2) << '\n';
            return kOk;
        }

        if (*pqr) {
            SimOptions o;
            o.reps = pqr_reps;
            o.seed = seed;
            o.jitter = pqr_jitter;
            Json cfg = pqr_model;
            cfg["which"] = pqr_which;
            cfg["reps"] = pqr_reps;
            cfg["jitter"] = pqr_jitter;
            cfg["seed"] = seed;
            print_config("simulate-pqr", cfg);
            auto report = [&](const std::string& name, const SimResult& r) {
                Json j{{"variable", name},
                       {"samples", r.values.size()},
                       {"attempts", r.attempts},
                       {"rejected", r.rejected},
                       {"rejection_rate", r.rejection_rate()}};
                if (!r.values.empty()) {
                    const auto [lo, hi] = std::minmax_element(r.values.begin(), r.values.end());
                    double mean = 0.0;
                    for (double v : r.values) {
                        mean += v;
                    }
                    mean /= static_cast<double>(r.values.size());
                    j["min"] = *lo;
                    j["max"] = *hi;
                    j["mean"] = mean;
                }
                if (pqr_fit) {
                    const auto f = mle_fit_sb(r.values);
                    const Distribution d(f.params);
                    const auto chi = chi2_statistic(r.values, d, 4);
                    j["sb_fit"] = f.params;
                    j["loglik"] = f.loglik;
                    j["chi2"] = chi.chi2;
                    j["dof"] = chi.dof;
                    j["chi2_pvalue"] = chi.asymptotic_pvalue;
                    j["ks"] = ks_distance(r.values, d);
                }
                return j;
            };
            Json out = Json::array();
            if (pqr_which == "QR") {
                const auto pair = simulate_QR_paired(pqr_model, o);
                if (!pqr_out.empty()) {
                    write_samples_csv(pqr_out + ".Q.csv", pair.q.values);
                    write_samples_csv(pqr_out + ".R.csv", pair.r.values);
                }
                out.push_back(report("Q", pair.q));
                out.push_back(report("R", pair.r));
            } else {
                const SimResult r = pqr_which == "P"   ? simulate_P(pqr_model, o)
                                    : pqr_which == "Q" ? simulate_Q(pqr_model, o)
                                                       : simulate_R(pqr_model, o);
                if (!pqr_out.empty()) {
                    write_samples_csv(pqr_out, r.values);
                }
                out.push_back(report(pqr_which, r));
            }
            std::cout << out.dump(2) << '\n';
            return kOk;
        }

        if (*chk) {
            const std::string& which = chk_which;
            Json cfg{{"which", which}, {"mu", chk_mu}, {"sigma", chk_sigma}, {"c", chk_c}, {"delta", chk_delta},
                     {"a", chk_a},     {"n", chk_n},   {"p", chk_p},         {"reps", chk_reps}, {"seed", seed}};
            print_config("check-lemma", cfg);
            Json out = Json::object();
            out["which"] = which;
            if (which == "reciprocal-shift") {
                const LogNormalParams x{chk_mu, chk_sigma, 0.0};
                const SbParams sb = reciprocal_shift_sb(x, chk_c);
                Rng rng(derive_seed(seed, "reciprocal-shift", 0));
                std::vector<double> draws(chk_reps);
                for (double& v : draws) {
                    v = 1.0 / (chk_c + lognormal_sample(x, rng));
                }
                const double ks = ks_distance(draws, Distribution(sb));
                out["sb"] = sb;
                out["ks"] = ks;
                out["pass"] = ks < 0.01;
            } else if (which == "log-mean") {
                const auto rep = check_log_mean(chk_n, chk_p, chk_reps, seed);
                out["report"] = rep;
                out["pass"] = std::abs(rep.mean_deviation_se) <= 3.0 && std::abs(rep.var_relative_error) <= 0.10;
            } else {
                const double sigma = 1.0 / chk_delta;
                const LogNormalParams limit{chk_mu, sigma, chk_a};
                Json rows = Json::array();
                double previous = std::numeric_limits<double>::infinity();
                bool decreasing = true;
                for (double b : {10.0, 100.0, 1000.0, 10000.0}) {
                    const SbParams sb = sb_lognormal_embedding(chk_mu, chk_delta, chk_a, chk_a + b);
                    double sup = 0.0;
                    for (int i = 1; i <= 400; ++i) {
                        const double x = chk_a + 8.0 * i / 400.0;
                        sup = std::max(sup, std::abs(sb_pdf(x, sb) - lognormal_pdf(x, limit)));
                    }
                    decreasing = decreasing && sup < previous;
                    previous = sup;
                    rows.push_back(Json{{"b", chk_a + b}, {"sb", sb}, {"sup_pdf_distance", sup}});
                }
                out["limit"] = limit;
                out["grid"] = rows;
                out["pass"] = decreasing && previous < 1e-2;
            }
            std::cout << out.dump(2) << '\n';
            return kOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const Json::exception& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    }
    return kUsage;
}
