#pragma once

#include "slstail/cnf.hpp"
#include "slstail/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace slstail {

/// Resolvent of c1 and c2 on `pivot`, or nullopt when it is tautological.
/// Throws UsageError unless the pivot occurs with opposite signs in the two clauses.
std::optional<Clause> resolve(const Clause& c1, const Clause& c2, Var pivot);

/// Insertion-ordered set of canonical clauses.
class ClauseSet {
public:
    ClauseSet() = default;
    explicit ClauseSet(const CnfFormula& f);
    explicit ClauseSet(std::span<const Clause> clauses);

    /// Inserts the canonical form; returns false if already present.
    bool insert(const Clause& c);
    bool contains(const Clause& c) const;
    std::size_t size() const noexcept { return clauses_.size(); }
    std::span<const Clause> clauses() const noexcept { return clauses_; }

    /// Order-insensitive equality.
    friend bool operator==(const ClauseSet& a, const ClauseSet& b);

private:
    struct Hash {
        std::size_t operator()(const Clause& c) const noexcept;
    };

    std::vector<Clause> clauses_;
    std::unordered_set<Clause, Hash> index_;
};

/// One application of the width-restricted resolution operator: the input plus
/// every non-tautological resolvent of width <= w of two of its clauses.
ClauseSet res_w_step(const ClauseSet& f, std::size_t w);

struct ClosureLimits {
    std::size_t max_clauses = 1'000'000;
    std::size_t max_rounds = 64;
};

struct ClosureStats {
    /// Number of productive rounds, i.e. the least n with Res^n = Res^*.
    std::size_t rounds = 0;
    std::size_t closure_size = 0;
    std::size_t candidate_pool_size = 0;
    bool limit_hit = false;
};

struct Closure {
    ClauseSet clauses;
    ClosureStats stats;
};

/// Iterates res_w_step to a fixpoint or until a limit trips (reported in stats).
Closure res_w_star(const ClauseSet& f, std::size_t w, ClosureLimits limits = {});

/// Clauses of the width-w closure of F that are not in F, sorted canonically, ready for repeated sampling.
struct ExtensionPool {
    std::vector<Clause> candidates;
    std::size_t w = 0;
    std::size_t formula_size = 0;
    std::uint64_t source_digest = 0;
    ClosureStats stats;
};

ExtensionPool build_extension_pool(const CnfFormula& f, std::size_t w, ClosureLimits limits = {});

struct SamplingParams {
    std::size_t w = 0;
    double p = 1.0;
    std::uint64_t seed = 0;
};

/// A random set L of clauses implied by F.
struct ExtensionSet {
    std::vector<Clause> resolvents;
    std::uint64_t source_digest = 0;
    SamplingParams params;
    /// Set when the underlying closure hit a safety limit.
    bool tainted = false;
};

/// Each candidate is included independently with probability p, in pool order.
ExtensionSet sample_from_pool(const ExtensionPool& pool, double p, std::uint64_t seed);

/// Builds the pool and samples from it.
ExtensionSet sample_extension(const CnfFormula& f, std::size_t w, double p, std::uint64_t seed,
                              ClosureLimits limits = {});

/// min(1, target_expected / pool_size). Throws on an empty pool or nonpositive target.
double calibrate_p(std::size_t pool_size, double target_expected);

/// The default target |F| * ratio with ratio = 1/10.
double calibrate_p(const ExtensionPool& pool, double target_ratio = 0.1);

/// Independent p-inclusion over a caller-supplied pool whose clauses all have
/// the same width. Throws UsageError on mixed widths.
ExtensionSet sample_fixed_length_extension(const CnfFormula& f, std::span<const Clause> pool, double p,
                                           std::uint64_t seed);

/// F followed by L.
CnfFormula extend_formula(const CnfFormula& f, const ExtensionSet& ext);

/// DIMACS of L alone with a `c extension ...` header recording w, p, seed and source digest.
std::string emit_extension_dimacs(const CnfFormula& f, const ExtensionSet& ext);

}  // namespace slstail
