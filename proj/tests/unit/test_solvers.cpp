#include "slstail/error.hpp"
#include "slstail/instance_gen.hpp"
#include "slstail/solvers.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <map>
#include <sstream>

using namespace slstail;

namespace {

struct Recorder : FlipObserver {
    const CnfFormula* f = nullptr;
    Assignment before;
    std::vector<std::pair<Var, std::size_t>> flips;
    bool consistent = true;
    std::size_t restarts = 0;

    void on_flip(Var x, std::size_t clause_index, const Assignment& after) override
    {
        const Clause& c = f->clauses()[clause_index];
        // The chosen clause was unsatisfied and the flipped variable belongs to it.
        consistent = consistent && !clause_satisfied(c, before) && c.contains_var(x) &&
                     hamming_distance(before, after) == 1 && before.value(x) != after.value(x);
        flips.emplace_back(x, clause_index);
        before = after;
    }
    void on_restart(const Assignment& fresh) override
    {
        ++restarts;
        before = fresh;
    }
};

// Expected SRWA flips to reach a model, by solving the absorbing Markov chain
// over all 2^n assignments (Gauss-Jordan on the hitting-time equations).
double exact_srwa_expected_flips(const CnfFormula& f)
{
    const unsigned n = f.num_vars();
    const std::size_t states = std::size_t{1} << n;
    const auto raw = oracle::to_raw(f);
    std::vector<std::vector<double>> a(states, std::vector<double>(states + 1, 0.0));
    for (std::size_t s = 0; s < states; ++s) {
        a[s][s] = 1.0;
        if (oracle::satisfies(raw, static_cast<std::uint32_t>(s))) {
            continue;
        }
        std::vector<const Clause*> unsat;
        for (const auto& c : f.clauses()) {
            bool sat = false;
            for (auto l : c.literals()) {
                sat = sat || (((s >> (l.var() - 1)) & 1u) != 0) == !l.negated();
            }
            if (!sat) {
                unsat.push_back(&c);
            }
        }
        a[s][states] = 1.0;
        for (const Clause* c : unsat) {
            for (auto l : c->literals()) {
                const std::size_t t = s ^ (std::size_t{1} << (l.var() - 1));
                a[s][t] -= 1.0 / static_cast<double>(unsat.size() * c->width());
            }
        }
    }
    for (std::size_t col = 0; col < states; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col; r < states; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) {
                piv = r;
            }
        }
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < states; ++r) {
            if (r != col && a[r][col] != 0.0) {
                const double m = a[r][col] / a[col][col];
                for (std::size_t k = col; k <= states; ++k) {
                    a[r][k] -= m * a[col][k];
                }
            }
        }
    }
    double total = 0.0;
    for (std::size_t s = 0; s < states; ++s) {
        total += a[s][states] / a[s][s];
    }
    return total / static_cast<double>(states);
}

}  // namespace

TEST(SolverConfig, Validation)
{
    SolverConfig c;
    EXPECT_NO_THROW(c.validate());
    c.t_restart = 0;
    EXPECT_THROW(c.validate(), UsageError);
    SolverConfig d;
    d.algorithm = SolverAlgorithm::probsat_exp;
    EXPECT_DOUBLE_EQ(d.effective_cb(), 2.3);
    d.algorithm = SolverAlgorithm::probsat_poly;
    EXPECT_DOUBLE_EQ(d.effective_cb(), 2.38);
    EXPECT_EQ(parse_solver_algorithm(to_string(SolverAlgorithm::probsat_poly)), SolverAlgorithm::probsat_poly);
    EXPECT_THROW(parse_solver_algorithm("walksat"), UsageError);
}

TEST(Solvers, WitnessesSatisfyPlantedFormulas)
{
    for (auto alg : {SolverAlgorithm::srwa, SolverAlgorithm::probsat_exp, SolverAlgorithm::probsat_poly}) {
        for (std::uint64_t s = 0; s < 30; ++s) {
            GenSpec g;
            g.kind = GenKind::planted;
            g.n = 25;
            g.ratio = 4.0;
            g.seed = s;
            const auto inst = gen_planted(g);
            SolverConfig c;
            c.algorithm = alg;
            c.seed = s + 100;
            c.max_flips = 1'000'000;
            const SolveOutcome o = solve(inst.formula, c);
            ASSERT_EQ(o.status, SolveStatus::solved);
            ASSERT_TRUE(o.witness.has_value());
            EXPECT_TRUE(evaluate(inst.formula, *o.witness));
        }
    }
}

TEST(Solvers, DeterministicGivenSeed)
{
    GenSpec g;
    g.n = 30;
    g.seed = 4;
    g.kind = GenKind::planted;
    const auto f = gen_planted(g).formula;
    SolverConfig c;
    c.seed = 77;
    EXPECT_EQ(srwa_solve(f, c), srwa_solve(f, c));
    c.algorithm = SolverAlgorithm::probsat_exp;
    EXPECT_EQ(probsat_solve(f, c), probsat_solve(f, c));
}

TEST(Solvers, ObserverSeesValidWalk)
{
    GenSpec g;
    g.n = 20;
    g.seed = 12;
    g.kind = GenKind::planted;
    const auto f = gen_planted(g).formula;
    for (auto alg : {SolverAlgorithm::srwa, SolverAlgorithm::probsat_poly}) {
        SolverConfig c;
        c.algorithm = alg;
        c.seed = 3;
        c.t_restart = 7;
        c.initial_assignment_override = Assignment(f.num_vars());
        Recorder r;
        r.f = &f;
        r.before = *c.initial_assignment_override;
        const SolveOutcome o = solve(f, c, &r);
        EXPECT_TRUE(r.consistent);
        EXPECT_EQ(r.flips.size(), o.flips);
        EXPECT_EQ(r.restarts, o.restarts_used);
        // Flips are counted across restarts: every epoch but the last is full.
        EXPECT_LE(o.restarts_used * c.t_restart, o.flips);
        EXPECT_LE(o.flips, (o.restarts_used + 1) * c.t_restart);
    }
}

TEST(Solvers, SatisfiedStartNeedsNoFlips)
{
    const CnfFormula f(2, {Clause{1, 2}});
    SolverConfig c;
    c.initial_assignment_override = Assignment(2, true);
    const auto o = srwa_solve(f, c);
    EXPECT_EQ(o.status, SolveStatus::solved);
    EXPECT_EQ(o.flips, 0u);
}

TEST(Solvers, BudgetExhaustionOnUnsat)
{
    const CnfFormula f(1, {Clause{1}, Clause{-1}});
    SolverConfig c;
    c.max_flips = 500;
    for (auto alg : {SolverAlgorithm::srwa, SolverAlgorithm::probsat_exp}) {
        c.algorithm = alg;
        const auto o = solve(f, c);
        EXPECT_EQ(o.status, SolveStatus::budget_exhausted);
        EXPECT_EQ(o.flips, 500u);
        EXPECT_FALSE(o.witness.has_value());
    }
    const CnfFormula empty(1, {Clause{}});
    EXPECT_THROW(srwa_solve(empty, c), UsageError);
}

TEST(Srwa, ClauseSelectionCountsRepeatedOccurrences)
{
    // Under the all-false start, x1 and x2 are both unsatisfied; clause (x1)
    // appears three times, so it is chosen with probability 3/4.
    const CnfFormula f(2, {Clause{1}, Clause{1}, Clause{1}, Clause{2}});
    int x1 = 0;
    const int reps = 20000;
    for (int s = 0; s < reps; ++s) {
        SolverConfig c;
        c.seed = derive_seed(5, "t", s);
        c.initial_assignment_override = Assignment(2);
        Recorder r;
        r.f = &f;
        r.before = Assignment(2);
        srwa_solve(f, c, &r);
        x1 += r.flips.front().first == 1 ? 1 : 0;
    }
    EXPECT_NEAR(x1 / static_cast<double>(reps), 0.75, 4.0 * std::sqrt(0.75 * 0.25 / reps));
}

TEST(Srwa, MeanFlipsMatchesExactMarkovChain)
{
    Rng rng(10);
    for (int t = 0; t < 3; ++t) {
        CnfFormula f;
        do {
            f = oracle::random_formula(rng, 5, 14, 3);
        } while (oracle::models(oracle::to_raw(f), 5).empty());
        const double exact = exact_srwa_expected_flips(f);
        double s = 0.0, s2 = 0.0;
        const int reps = 20000;
        for (int r = 0; r < reps; ++r) {
            SolverConfig c;
            c.seed = derive_seed(t, "chain", r);
            const double x = static_cast<double>(srwa_solve(f, c).flips);
            s += x;
            s2 += x * x;
        }
        const double mean = s / reps;
        const double se = std::sqrt((s2 / reps - mean * mean) / reps);
        EXPECT_NEAR(mean, exact, 4.0 * se + 1e-9) << "formula " << t;
    }
}

TEST(ProbSat, BreakWeightedVariableChoice)
{
    // Start all false. Clause (x1 v x2) is the only unsatisfied one. Flipping x1
    // breaks (-x1 v x3) and (-x1 v x4); flipping x2 breaks nothing.
    const CnfFormula f(4, {Clause{1, 2}, Clause{-1, 3}, Clause{-1, 4}});
    for (auto alg : {SolverAlgorithm::probsat_exp, SolverAlgorithm::probsat_poly}) {
        SolverConfig base;
        base.algorithm = alg;
        const double cb = base.effective_cb();
        const double w1 = alg == SolverAlgorithm::probsat_exp ? std::pow(cb, -2.0) : std::pow(1.0 + 2.0, -cb);
        const double w2 = alg == SolverAlgorithm::probsat_exp ? 1.0 : std::pow(1.0, -cb);
        const double p1 = w1 / (w1 + w2);
        int hits = 0;
        const int reps = 20000;
        for (int s = 0; s < reps; ++s) {
            SolverConfig c = base;
            c.seed = derive_seed(9, "p", s);
            c.initial_assignment_override = Assignment(4);
            Recorder r;
            r.f = &f;
            r.before = Assignment(4);
            probsat_solve(f, c, &r);
            hits += r.flips.front().first == 1 ? 1 : 0;
        }
        EXPECT_NEAR(hits / static_cast<double>(reps), p1, 4.0 * std::sqrt(p1 * (1 - p1) / reps) + 1e-3);
    }
}

TEST(Batch, SummaryStatistics)
{
    std::vector<SolveOutcome> outs(4);
    const double flips[] = {10, 20, 40, 1000};
    for (int i = 0; i < 4; ++i) {
        outs[i].flips = static_cast<std::uint64_t>(flips[i]);
        outs[i].status = i < 3 ? SolveStatus::solved : SolveStatus::budget_exhausted;
    }
    const BatchResult b = summarize_batch(outs, {1, 2, 3, 4});
    EXPECT_EQ(b.solved_runs, 3u);
    EXPECT_TRUE(b.censored);
    EXPECT_DOUBLE_EQ(b.mean_flips, 70.0 / 3.0);
    const double m = 70.0 / 3.0;
    EXPECT_NEAR(b.flips_variance, ((10 - m) * (10 - m) + (20 - m) * (20 - m) + (40 - m) * (40 - m)) / 2.0, 1e-9);
}

TEST(Batch, RunSeedsAndCsv)
{
    GenSpec g;
    g.n = 15;
    g.kind = GenKind::planted;
    const auto f = gen_planted(g).formula;
    SolverConfig c;
    c.seed = 42;
    const BatchResult b = run_batch(f, c, 5);
    ASSERT_EQ(b.seeds.size(), 5u);
    for (std::size_t j = 0; j < 5; ++j) {
        EXPECT_EQ(b.seeds[j], derive_seed(42, "run", j));
        SolverConfig one = c;
        one.seed = b.seeds[j];
        EXPECT_EQ(solve(f, one), b.outcomes[j]);
    }
    std::ostringstream os;
    write_batch_csv(os, "inst", b);
    const std::string text = os.str();
    EXPECT_NE(text.find("instance_id,run_index,seed,status,flips,restarts"), std::string::npos);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
}
