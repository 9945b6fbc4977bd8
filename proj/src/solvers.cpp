#include "slstail/solvers.hpp"

#include "slstail/error.hpp"
#include "slstail/rng.hpp"

#include <cmath>

namespace slstail {

std::string to_string(SolverAlgorithm a)
{
    switch (a) {
    case SolverAlgorithm::srwa:
        return "srwa";
    case SolverAlgorithm::probsat_poly:
        return "probsat-poly";
    case SolverAlgorithm::probsat_exp:
        return "probsat-exp";
    }
    return "?";
}

SolverAlgorithm parse_solver_algorithm(const std::string& name)
{
    if (name == "srwa") {
        return SolverAlgorithm::srwa;
    }
    if (name == "probsat-poly" || name == "probsat_poly") {
        return SolverAlgorithm::probsat_poly;
    }
    if (name == "probsat-exp" || name == "probsat_exp" || name == "probsat") {
        return SolverAlgorithm::probsat_exp;
    }
    throw UsageError("unknown solver algorithm '" + name + "'");
}

double SolverConfig::effective_cb() const
{
    if (cb) {
        return *cb;
    }
    return algorithm == SolverAlgorithm::probsat_poly ? 2.38 : 2.3;
}

void SolverConfig::validate() const
{
    if (t_restart < 1) {
        throw UsageError("t_restart must be >= 1");
    }
    if (max_flips < 1) {
        throw UsageError("max_flips must be >= 1");
    }
    if (algorithm != SolverAlgorithm::srwa && !(effective_cb() > 0.0)) {
        throw UsageError("cb must be positive");
    }
}

namespace {

// Flat clause database with incremental bookkeeping of the unsatisfied set.
class WalkState {
public:
    explicit WalkState(const CnfFormula& f) : num_vars_(f.num_vars())
    {
        clause_start_.reserve(f.num_clauses() + 1);
        clause_start_.push_back(0);
        for (const Clause& c : f.clauses()) {
            for (Literal l : c.literals()) {
                lits_.push_back(l);
            }
            clause_start_.push_back(static_cast<std::uint32_t>(lits_.size()));
        }
        occ_start_.assign(2 * (num_vars_ + 1) + 1, 0);
        for (Literal l : lits_) {
            ++occ_start_[slot(l) + 1];
        }
        for (std::size_t i = 1; i < occ_start_.size(); ++i) {
            occ_start_[i] += occ_start_[i - 1];
        }
        occ_.resize(lits_.size());
        std::vector<std::uint32_t> fill(occ_start_.begin(), occ_start_.end() - 1);
        for (std::uint32_t c = 0; c + 1 < clause_start_.size(); ++c) {
            for (std::uint32_t k = clause_start_[c]; k < clause_start_[c + 1]; ++k) {
                occ_[fill[slot(lits_[k])]++] = c;
            }
        }
        true_count_.assign(num_clauses(), 0);
        unsat_pos_.assign(num_clauses(), kAbsent);
    }

    std::size_t num_clauses() const { return clause_start_.size() - 1; }

    void reset(Assignment a)
    {
        assignment_ = std::move(a);
        unsat_.clear();
        for (std::uint32_t c = 0; c < num_clauses(); ++c) {
            std::uint32_t count = 0;
            for (std::uint32_t k = clause_start_[c]; k < clause_start_[c + 1]; ++k) {
                count += assignment_.satisfies(lits_[k]);
            }
            true_count_[c] = count;
            unsat_pos_[c] = kAbsent;
            if (count == 0) {
                push_unsat(c);
            }
        }
    }

    bool satisfied() const { return unsat_.empty(); }
    std::size_t num_unsat() const { return unsat_.size(); }
    std::uint32_t unsat_at(std::size_t i) const { return unsat_[i]; }
    std::span<const Literal> clause(std::uint32_t c) const
    {
        return {lits_.data() + clause_start_[c], clause_start_[c + 1] - clause_start_[c]};
    }
    const Assignment& assignment() const { return assignment_; }

    /// Clauses made false by flipping x.
    std::uint32_t break_value(Var x) const
    {
        const Literal now_true(x, !assignment_.value(x));
        std::uint32_t b = 0;
        for (std::uint32_t i = occ_start_[slot(now_true)]; i < occ_start_[slot(now_true) + 1]; ++i) {
            b += true_count_[occ_[i]] == 1;
        }
        return b;
    }

    void flip(Var x)
    {
        const Literal now_true(x, !assignment_.value(x));
        assignment_.flip(x);
        for (std::uint32_t i = occ_start_[slot(now_true)]; i < occ_start_[slot(now_true) + 1]; ++i) {
            const std::uint32_t c = occ_[i];
            if (--true_count_[c] == 0) {
                push_unsat(c);
            }
        }
        const Literal became_true = ~now_true;
        for (std::uint32_t i = occ_start_[slot(became_true)]; i < occ_start_[slot(became_true) + 1]; ++i) {
            const std::uint32_t c = occ_[i];
            if (true_count_[c]++ == 0) {
                remove_unsat(c);
            }
        }
    }

private:
    static constexpr std::uint32_t kAbsent = 0xFFFFFFFFu;

    static std::size_t slot(Literal l) { return 2 * static_cast<std::size_t>(l.var()) + (l.negated() ? 1 : 0); }

    void push_unsat(std::uint32_t c)
    {
        unsat_pos_[c] = static_cast<std::uint32_t>(unsat_.size());
        unsat_.push_back(c);
    }

    void remove_unsat(std::uint32_t c)
    {
        const std::uint32_t pos = unsat_pos_[c];
        const std::uint32_t last = unsat_.back();
        unsat_[pos] = last;
        unsat_pos_[last] = pos;
        unsat_.pop_back();
        unsat_pos_[c] = kAbsent;
    }

    std::uint32_t num_vars_;
    std::vector<Literal> lits_;
    std::vector<std::uint32_t> clause_start_;
    std::vector<std::uint32_t> occ_start_;
    std::vector<std::uint32_t> occ_;
    std::vector<std::uint32_t> true_count_;
    std::vector<std::uint32_t> unsat_;
    std::vector<std::uint32_t> unsat_pos_;
    Assignment assignment_;
};

Assignment random_assignment(std::uint32_t n, Rng& rng)
{
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) {
        b = rng.coin() ? 1 : 0;
    }
    return Assignment(std::move(bits));
}

template <typename PickLiteral>
SolveOutcome walk(const CnfFormula& f, const SolverConfig& cfg, FlipObserver* observer, PickLiteral pick)
{
    cfg.validate();
    if (f.has_empty_clause()) {
        throw UsageError("formula contains the empty clause and cannot be satisfied");
    }
    if (cfg.initial_assignment_override && cfg.initial_assignment_override->size() != f.num_vars()) {
        throw UsageError("initial assignment override has the wrong length");
    }
    Rng rng(cfg.seed);
    WalkState state(f);
    SolveOutcome outcome;
    bool first_epoch = true;
    while (true) {
        if (first_epoch && cfg.initial_assignment_override) {
            state.reset(*cfg.initial_assignment_override);
        } else {
            state.reset(random_assignment(f.num_vars(), rng));
            if (!first_epoch && observer != nullptr) {
                observer->on_restart(state.assignment());
            }
        }
        first_epoch = false;
        std::uint64_t epoch_flips = 0;
        while (true) {
            if (state.satisfied()) {
                outcome.status = SolveStatus::solved;
                outcome.witness = state.assignment();
                return outcome;
            }
            if (outcome.flips >= cfg.max_flips) {
                outcome.status = SolveStatus::budget_exhausted;
                return outcome;
            }
            if (epoch_flips == cfg.t_restart) {
                break;
            }
            const std::uint32_t c = state.unsat_at(rng.below(state.num_unsat()));
            const Literal l = pick(state, state.clause(c), rng);
            state.flip(l.var());
            ++outcome.flips;
            ++epoch_flips;
            if (observer != nullptr) {
                observer->on_flip(l.var(), c, state.assignment());
            }
        }
        ++outcome.restarts_used;
    }
}

}  // namespace

SolveOutcome srwa_solve(const CnfFormula& f, const SolverConfig& cfg, FlipObserver* observer)
{
    return walk(f, cfg, observer, [](const WalkState&, std::span<const Literal> clause, Rng& rng) {
        return clause[rng.below(clause.size())];
    });
}

SolveOutcome probsat_solve(const CnfFormula& f, const SolverConfig& cfg, FlipObserver* observer)
{
    const double cb = cfg.effective_cb();
    const double eps = cfg.eps;
    const bool exponential = cfg.algorithm != SolverAlgorithm::probsat_poly;
    // Scores for small break values are tabulated.
    std::vector<double> table(64);
    for (std::size_t b = 0; b < table.size(); ++b) {
        table[b] = exponential ? std::pow(cb, -static_cast<double>(b)) : std::pow(eps + static_cast<double>(b), -cb);
    }
    auto score = [&](std::uint32_t b) {
        if (b < table.size()) {
            return table[b];
        }
        return exponential ? std::pow(cb, -static_cast<double>(b)) : std::pow(eps + static_cast<double>(b), -cb);
    };
    std::vector<double> weights;
    return walk(f, cfg, observer, [&](const WalkState& state, std::span<const Literal> clause, Rng& rng) {
        weights.resize(clause.size());
        double total = 0.0;
        for (std::size_t i = 0; i < clause.size(); ++i) {
            weights[i] = score(state.break_value(clause[i].var()));
            total += weights[i];
        }
        double r = rng.uniform() * total;
        for (std::size_t i = 0; i < clause.size(); ++i) {
            if (r < weights[i]) {
                return clause[i];
            }
            r -= weights[i];
        }
        return clause[clause.size() - 1];
    });
}

SolveOutcome solve(const CnfFormula& f, const SolverConfig& cfg, FlipObserver* observer)
{
    return cfg.algorithm == SolverAlgorithm::srwa ? srwa_solve(f, cfg, observer) : probsat_solve(f, cfg, observer);
}

BatchResult summarize_batch(std::vector<SolveOutcome> outcomes, std::vector<std::uint64_t> seeds)
{
    BatchResult batch;
    double sum = 0.0;
    for (const auto& o : outcomes) {
        if (o.status == SolveStatus::solved) {
            ++batch.solved_runs;
            sum += static_cast<double>(o.flips);
        } else {
            batch.censored = true;
        }
    }
    if (batch.solved_runs > 0) {
        batch.mean_flips = sum / static_cast<double>(batch.solved_runs);
    }
    if (batch.solved_runs > 1) {
        double ss = 0.0;
        for (const auto& o : outcomes) {
            if (o.status == SolveStatus::solved) {
                const double d = static_cast<double>(o.flips) - batch.mean_flips;
                ss += d * d;
            }
        }
        batch.flips_variance = ss / static_cast<double>(batch.solved_runs - 1);
    }
    batch.outcomes = std::move(outcomes);
    batch.seeds = std::move(seeds);
    return batch;
}

BatchResult run_batch(const CnfFormula& f, const SolverConfig& cfg, std::size_t runs)
{
    if (runs < 1) {
        throw UsageError("run_batch: runs must be >= 1");
    }
    std::vector<SolveOutcome> outcomes;
    std::vector<std::uint64_t> seeds;
    for (std::size_t j = 0; j < runs; ++j) {
        SolverConfig run_cfg = cfg;
        run_cfg.seed = derive_seed(cfg.seed, "run", j);
        seeds.push_back(run_cfg.seed);
        outcomes.push_back(solve(f, run_cfg));
    }
    return summarize_batch(std::move(outcomes), std::move(seeds));
}

void write_batch_csv(std::ostream& out, const std::string& instance_id, const BatchResult& batch, bool with_header)
{
    if (with_header) {
        out << "# schema=slstail.runs/1\n";
        out << "instance_id,run_index,seed,status,flips,restarts\n";
    }
    for (std::size_t j = 0; j < batch.outcomes.size(); ++j) {
        const auto& o = batch.outcomes[j];
        out << instance_id << ',' << j << ',' << batch.seeds[j] << ','
            << (o.status == SolveStatus::solved ? "solved" : "budget_exhausted") << ',' << o.flips << ','
            << o.restarts_used << '\n';
    }
}

}  // namespace slstail
