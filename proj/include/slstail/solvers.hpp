#pragma once

#include "slstail/cnf.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace slstail {

enum class SolverAlgorithm { srwa, probsat_poly, probsat_exp };

std::string to_string(SolverAlgorithm a);
SolverAlgorithm parse_solver_algorithm(const std::string& name);

inline constexpr std::uint64_t kNoRestart = std::numeric_limits<std::uint64_t>::max();

struct SolverConfig {
    SolverAlgorithm algorithm = SolverAlgorithm::srwa;
    /// Flips between restarts; kNoRestart disables restarts.
    std::uint64_t t_restart = kNoRestart;
    std::uint64_t max_flips = 100'000'000;
    std::uint64_t seed = 0;
    /// Break exponent. Defaults: 2.3 (exponential), 2.38 (polynomial).
    std::optional<double> cb;
    /// Epsilon of the polynomial break score.
    double eps = 1.0;
    /// Replaces the first random assignment (tests only).
    std::optional<Assignment> initial_assignment_override;

    double effective_cb() const;
    void validate() const;
};

enum class SolveStatus { solved, budget_exhausted };

struct SolveOutcome {
    SolveStatus status = SolveStatus::budget_exhausted;
    std::uint64_t flips = 0;
    std::uint64_t restarts_used = 0;
    std::optional<Assignment> witness;

    friend bool operator==(const SolveOutcome&, const SolveOutcome&) = default;
};

/// Called after each flip with (flipped variable, index of the selected clause).
struct FlipObserver {
    virtual ~FlipObserver() = default;
    virtual void on_flip(Var flipped, std::size_t clause_index, const Assignment& after) = 0;
    virtual void on_restart(const Assignment& fresh) { (void)fresh; }
};

/// Schoening's random walk. Each unsatisfied clause occurrence is equally
/// likely to be selected, repeated clauses included. Flips are counted across
/// restarts. Throws UsageError if the formula contains the empty clause.
SolveOutcome srwa_solve(const CnfFormula& f, const SolverConfig& cfg, FlipObserver* observer = nullptr);

/// probSAT: like SRWA but the variable within the selected clause is drawn with
/// weight cb^-break (exponential) or (eps + break)^-cb (polynomial).
SolveOutcome probsat_solve(const CnfFormula& f, const SolverConfig& cfg, FlipObserver* observer = nullptr);

/// Dispatches on cfg.algorithm.
SolveOutcome solve(const CnfFormula& f, const SolverConfig& cfg, FlipObserver* observer = nullptr);

struct BatchResult {
    std::vector<SolveOutcome> outcomes;
    std::vector<std::uint64_t> seeds;
    /// Mean flips over solved runs (0 if none solved).
    double mean_flips = 0.0;
    /// Unbiased sample variance of flips over solved runs.
    double flips_variance = 0.0;
    std::size_t solved_runs = 0;
    /// Some run hit the flip budget.
    bool censored = false;
};

/// Mean/variance/censoring summary of already-computed outcomes.
BatchResult summarize_batch(std::vector<SolveOutcome> outcomes, std::vector<std::uint64_t> seeds);

/// `runs` independent solves; run j uses derive_seed(cfg.seed, "run", j).
BatchResult run_batch(const CnfFormula& f, const SolverConfig& cfg, std::size_t runs);

/// CSV rows instance_id,run_index,seed,status,flips,restarts (with header
/// and schema line when `with_header`).
void write_batch_csv(std::ostream& out, const std::string& instance_id, const BatchResult& batch,
                     bool with_header = true);

}  // namespace slstail
