#pragma once

#include "slstail/cnf.hpp"
#include "slstail/fitting.hpp"
#include "slstail/instance_gen.hpp"
#include "slstail/resolution.hpp"
#include "slstail/serialization.hpp"
#include "slstail/solvers.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace slstail {

struct ExperimentPlan {
    /// Exactly one of base_path / base_spec.
    std::optional<std::string> base_path;
    std::optional<GenSpec> base_spec;
    std::size_t modifications = 200;
    std::size_t runs_per_mod = 20;
    std::size_t w = 4;
    /// Inclusion probability; when absent it is calibrated so that the
    /// expected |L| is target_ratio * |F|.
    std::optional<double> p;
    double target_ratio = 0.1;
    SolverConfig solver;
    std::uint64_t master_seed = 0;
    /// Skip the satisfiability screen of the base instance.
    bool trusted = false;

    void validate() const;
};

Json plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const Json& j);

/// Reads base_path or generates from base_spec.
CnfFormula load_base_instance(const ExperimentPlan& plan);

/// FNV-1a of the plan JSON together with the base formula digest.
std::uint64_t plan_digest(const ExperimentPlan& plan, const CnfFormula& base);

struct HardnessRow {
    std::size_t mod_index = 0;
    std::uint64_t extension_seed = 0;
    std::size_t extension_size = 0;
    double mean_flips = 0.0;
    double flips_var = 0.0;
    std::size_t runs = 0;
    std::size_t solved_runs = 0;
    bool censored = false;

    friend bool operator==(const HardnessRow&, const HardnessRow&) = default;
};

struct HardnessDataset {
    std::vector<HardnessRow> rows;
    std::uint64_t plan_digest = 0;
    double p = 0.0;
    std::size_t pool_size = 0;
    bool pool_limit_hit = false;
};

inline constexpr const char* kHardnessSchema = "slstail.hardness/1";

struct RunOptions {
    /// 0 means std::thread::hardware_concurrency().
    std::size_t workers = 0;
    /// Rows are appended and flushed here as they complete, in index order.
    std::optional<std::filesystem::path> csv_path;
    /// Reuse complete rows already present in csv_path.
    bool resume = true;
    /// Stop after this many rows have been written in this call (testing aid
    /// for interrupted runs).
    std::optional<std::size_t> stop_after;
};

/// Modification i samples L from the width-w pool with seed
/// derive_seed(master, "extension", i) and solves F + L runs_per_mod times,
/// run j with seed derive_seed(master, "run", i * runs_per_mod + j).
/// Output is independent of the worker count.
HardnessDataset run_experiment(const CnfFormula& base, const ExperimentPlan& plan, const RunOptions& options = {});
/// Same, with a pool already built from `base` at width plan.w.
HardnessDataset run_experiment(const CnfFormula& base, const ExtensionPool& pool, const ExperimentPlan& plan,
                               const RunOptions& options = {});

std::string format_hardness_row(const HardnessRow& row);
void write_hardness_csv(std::ostream& out, const HardnessDataset& ds);
/// Throws DataError on a schema mismatch or malformed rows. A trailing line
/// without newline is ignored (and reported through `partial_tail`).
HardnessDataset read_hardness_csv(std::istream& in, bool* partial_tail = nullptr);
HardnessDataset read_hardness_csv(const std::filesystem::path& path);

/// Non-censored mean flips plus per-row noise variance flips_var / runs.
struct NoisySample {
    std::vector<double> values;
    NoiseModel noise;
    std::size_t runs = 0;
    std::size_t dropped_censored = 0;
};
NoisySample dataset_sample(const HardnessDataset& ds);

}  // namespace slstail
