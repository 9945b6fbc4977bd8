#include "slstail/instance_gen.hpp"

#include "slstail/error.hpp"
#include "slstail/rng.hpp"

#include <cmath>

namespace slstail {

std::size_t GenSpec::num_clauses() const
{
    return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
}

void GenSpec::validate() const
{
    if (k < 2) {
        throw UsageError("clause width k must be >= 2");
    }
    if (n < k) {
        throw UsageError("need n >= k (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
    }
    if (!(ratio > 0.0)) {
        throw UsageError("clause-to-variable ratio must be positive");
    }
}

std::string to_string(GenKind kind)
{
    return kind == GenKind::uniform ? "uniform" : "planted-simple";
}

namespace {

Clause random_clause(std::uint32_t n, std::uint32_t k, Rng& rng)
{
    std::vector<Literal> lits;
    lits.reserve(k);
    while (lits.size() < k) {
        const auto x = static_cast<Var>(rng.below(n) + 1);
        bool fresh = true;
        for (Literal l : lits) {
            fresh = fresh && l.var() != x;
        }
        if (fresh) {
            lits.emplace_back(x, rng.coin());
        }
    }
    return Clause(std::move(lits));
}

}  // namespace

CnfFormula gen_uniform(const GenSpec& spec)
{
    spec.validate();
    Rng rng(spec.seed);
    std::vector<Clause> clauses;
    const std::size_t m = spec.num_clauses();
    clauses.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        clauses.push_back(random_clause(spec.n, spec.k, rng));
    }
    return CnfFormula(spec.n, std::move(clauses));
}

PlantedInstance gen_planted(const GenSpec& spec)
{
    spec.validate();
    Rng rng(spec.seed);
    Assignment hidden(spec.n);
    for (Var x = 1; x <= spec.n; ++x) {
        hidden.set(x, rng.coin());
    }
    std::vector<Clause> clauses;
    const std::size_t m = spec.num_clauses();
    clauses.reserve(m);
    while (clauses.size() < m) {
        Clause c = random_clause(spec.n, spec.k, rng);
        if (clause_satisfied(c, hidden)) {
            clauses.push_back(std::move(c));
        }
    }
    return {CnfFormula(spec.n, std::move(clauses)), std::move(hidden)};
}

std::vector<ScreenedInstance> screen_satisfiable(std::span<const CnfFormula> formulas, ScreenOptions options)
{
    std::vector<ScreenedInstance> kept;
    for (std::size_t i = 0; i < formulas.size(); ++i) {
        const CnfFormula& f = formulas[i];
        if (f.has_empty_clause()) {
            continue;
        }
        std::optional<Assignment> witness;
        if (f.num_vars() <= kBruteForceMaxVars) {
            witness = brute_force_satisfiable(f);
        } else {
            SolverConfig cfg;
            cfg.max_flips = options.flip_budget;
            cfg.seed = derive_seed(options.seed, "screen", i);
            auto outcome = srwa_solve(f, cfg);
            witness = std::move(outcome.witness);
        }
        if (witness && evaluate(f, *witness)) {
            kept.push_back({i, std::move(*witness)});
        }
    }
    return kept;
}

}  // namespace slstail
