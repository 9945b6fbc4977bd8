#include "slstail/error.hpp"
#include "slstail/experiment.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace slstail;
namespace fs = std::filesystem;

namespace {

ExperimentPlan small_plan(std::uint64_t seed = 5)
{
    ExperimentPlan plan;
    GenSpec g;
    g.kind = GenKind::planted;
    g.n = 14;
    g.ratio = 4.2;
    g.seed = 2;
    plan.base_spec = g;
    plan.modifications = 12;
    plan.runs_per_mod = 4;
    plan.w = 3;
    plan.target_ratio = 0.5;
    plan.master_seed = seed;
    return plan;
}

fs::path temp_file(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "slstail_tests";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    fs::remove(p);
    return p;
}

RunOptions run_opts(std::size_t workers, std::optional<fs::path> path = std::nullopt)
{
    RunOptions o;
    o.workers = workers;
    o.csv_path = std::move(path);
    return o;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Plan, JsonRoundTripAndDigest)
{
    const ExperimentPlan plan = small_plan();
    const ExperimentPlan back = plan_from_json(plan_to_json(plan));
    EXPECT_EQ(plan_to_json(back).dump(), plan_to_json(plan).dump());
    const CnfFormula base = load_base_instance(plan);
    EXPECT_EQ(plan_digest(plan, base), plan_digest(back, base));
    ExperimentPlan other = plan;
    other.master_seed = 6;
    EXPECT_NE(plan_digest(other, base), plan_digest(plan, base));
    ExperimentPlan none = plan;
    none.base_spec.reset();
    EXPECT_THROW(none.validate(), UsageError);
}

TEST(HardnessCsv, RowRoundTripIsExact)
{
    HardnessDataset ds;
    ds.plan_digest = 0xabcdef0123456789ULL;
    ds.p = 0.1 / 3.0;
    ds.pool_size = 1234;
    ds.pool_limit_hit = true;
    ds.rows.push_back(HardnessRow{0, 99, 3, 1.0 / 3.0, 2.0 / 7.0, 20, 20, false});
    ds.rows.push_back(HardnessRow{1, 18446744073709551615ULL, 0, 123456.789, 1e-300, 20, 19, true});
    std::ostringstream os;
    write_hardness_csv(os, ds);
    std::istringstream in(os.str());
    const HardnessDataset back = read_hardness_csv(in);
    EXPECT_EQ(back.rows, ds.rows);
    EXPECT_EQ(back.plan_digest, ds.plan_digest);
    EXPECT_EQ(back.p, ds.p);
    EXPECT_EQ(back.pool_size, ds.pool_size);
    EXPECT_TRUE(back.pool_limit_hit);
}

TEST(HardnessCsv, PartialTailAndErrors)
{
    HardnessDataset ds;
    ds.rows.push_back(HardnessRow{0, 1, 2, 3.5, 1.0, 4, 4, false});
    std::ostringstream os;
    write_hardness_csv(os, ds);
    std::istringstream partial(os.str() + "1,7,2,4.");
    bool tail = false;
    EXPECT_EQ(read_hardness_csv(partial, &tail).rows.size(), 1u);
    EXPECT_TRUE(tail);
    std::istringstream bad_schema("# schema=other/1\n");
    EXPECT_THROW(read_hardness_csv(bad_schema), DataError);
    std::istringstream bad_row(os.str() + "1,x,2,3,4,5,6,0\n");
    EXPECT_THROW(read_hardness_csv(bad_row), DataError);
}

TEST(Experiment, WorkerCountDoesNotChangeOutput)
{
    const ExperimentPlan plan = small_plan();
    const CnfFormula base = load_base_instance(plan);
    const ExtensionPool pool = build_extension_pool(base, plan.w);
    std::string reference;
    for (std::size_t workers : {1, 3, 8}) {
        const fs::path path = temp_file("workers_" + std::to_string(workers) + ".csv");
        RunOptions o;
        o.workers = workers;
        o.csv_path = path;
        const HardnessDataset ds = run_experiment(base, pool, plan, o);
        EXPECT_EQ(ds.rows.size(), plan.modifications);
        const std::string text = slurp(path);
        if (reference.empty()) {
            reference = text;
        }
        EXPECT_EQ(text, reference) << workers << " workers";
    }
    // The in-memory dataset matches what was written.
    std::istringstream in(reference);
    EXPECT_EQ(read_hardness_csv(in).rows, run_experiment(base, plan, run_opts(1)).rows);
}

TEST(Experiment, RowsFollowSeedDerivation)
{
    const ExperimentPlan plan = small_plan(9);
    const CnfFormula base = load_base_instance(plan);
    const ExtensionPool pool = build_extension_pool(base, plan.w);
    const HardnessDataset ds = run_experiment(base, pool, plan, run_opts(2));
    const double p = calibrate_p(pool, plan.target_ratio);
    EXPECT_EQ(ds.p, p);
    for (const HardnessRow& row : ds.rows) {
        EXPECT_EQ(row.extension_seed, derive_seed(9, "extension", row.mod_index));
        const ExtensionSet ext = sample_from_pool(pool, p, row.extension_seed);
        EXPECT_EQ(row.extension_size, ext.resolvents.size());
        const CnfFormula g = extend_formula(base, ext);
        double sum = 0.0;
        for (std::size_t j = 0; j < plan.runs_per_mod; ++j) {
            SolverConfig c = plan.solver;
            c.seed = derive_seed(9, "run", row.mod_index * plan.runs_per_mod + j);
            sum += static_cast<double>(solve(g, c).flips);
        }
        EXPECT_DOUBLE_EQ(row.mean_flips, sum / static_cast<double>(plan.runs_per_mod));
    }
}

TEST(Experiment, ResumeAfterInterruption)
{
    const ExperimentPlan plan = small_plan(13);
    const CnfFormula base = load_base_instance(plan);
    const ExtensionPool pool = build_extension_pool(base, plan.w);
    const fs::path full = temp_file("full.csv");
    run_experiment(base, pool, plan, run_opts(1, full));

    const fs::path part = temp_file("part.csv");
    RunOptions first = run_opts(2, part);
    first.stop_after = 5;
    EXPECT_EQ(run_experiment(base, pool, plan, first).rows.size(), 5u);
    {
        std::ofstream torn(part, std::ios::app);
        torn << "5,123,4,9";  // interrupted mid-line
    }
    const HardnessDataset resumed = run_experiment(base, pool, plan, run_opts(3, part));
    EXPECT_EQ(resumed.rows.size(), plan.modifications);
    EXPECT_EQ(slurp(part), slurp(full));

    ExperimentPlan other = plan;
    other.master_seed = 14;
    EXPECT_THROW(run_experiment(base, pool, other, run_opts(1, part)), DataError);
    RunOptions fresh = run_opts(1, part);
    fresh.resume = false;
    EXPECT_NO_THROW(run_experiment(base, pool, other, fresh));
}

TEST(Experiment, RejectsUnsatisfiableBaseAndForeignPool)
{
    ExperimentPlan plan = small_plan();
    const CnfFormula unsat(2, {Clause{1}, Clause{-1}});
    plan.base_spec.reset();
    plan.base_path = "unused.cnf";
    EXPECT_THROW(run_experiment(unsat, plan, run_opts(1)), DataError);
    const ExperimentPlan good = small_plan();
    const CnfFormula base = load_base_instance(good);
    const ExtensionPool pool = build_extension_pool(CnfFormula(3, {Clause{1, 2}}), good.w);
    EXPECT_THROW(run_experiment(base, pool, good, run_opts(1)), UsageError);
}

TEST(DatasetSample, DropsCensoredAndScalesVariance)
{
    HardnessDataset ds;
    ds.rows.push_back(HardnessRow{0, 1, 0, 100.0, 400.0, 20, 20, false});
    ds.rows.push_back(HardnessRow{1, 2, 0, 50.0, 100.0, 20, 19, true});
    ds.rows.push_back(HardnessRow{2, 3, 0, 80.0, 40.0, 20, 20, false});
    const NoisySample s = dataset_sample(ds);
    ASSERT_EQ(s.values.size(), 2u);
    EXPECT_EQ(s.dropped_censored, 1u);
    EXPECT_DOUBLE_EQ(s.values[1], 80.0);
    EXPECT_DOUBLE_EQ(s.noise.variances[0], 20.0);
    EXPECT_DOUBLE_EQ(s.noise.variances[1], 2.0);
}
