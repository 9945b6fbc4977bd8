#include "slstail/error.hpp"
#include "slstail/instance_gen.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include <set>

using namespace slstail;

TEST(GenSpec, ClauseCountAndValidation)
{
    GenSpec g;
    g.n = 50;
    g.ratio = 4.267;
    EXPECT_EQ(g.num_clauses(), 213u);
    g.k = 0;
    EXPECT_THROW(g.validate(), UsageError);
    GenSpec h;
    h.n = 2;
    h.k = 3;
    EXPECT_THROW(h.validate(), UsageError);
    GenSpec r;
    r.ratio = -1.0;
    EXPECT_THROW(r.validate(), UsageError);
}

TEST(GenUniform, ShapeProperty)
{
    for (std::uint64_t s = 0; s < 20; ++s) {
        GenSpec g;
        g.n = 10 + static_cast<std::uint32_t>(s);
        g.k = 3 + static_cast<std::uint32_t>(s % 3);
        g.ratio = 3.0;
        g.seed = s;
        const CnfFormula f = gen_uniform(g);
        EXPECT_EQ(f.num_vars(), g.n);
        EXPECT_EQ(f.num_clauses(), g.num_clauses());
        for (const auto& c : f.clauses()) {
            ASSERT_EQ(c.width(), g.k);
            std::set<Var> vars;
            for (auto l : c.literals()) {
                vars.insert(l.var());
                EXPECT_GE(l.var(), 1u);
                EXPECT_LE(l.var(), g.n);
            }
            EXPECT_EQ(vars.size(), g.k);
        }
        EXPECT_EQ(gen_uniform(g), f);
    }
}

TEST(GenUniform, PolarityAndVariableBalance)
{
    GenSpec g;
    g.n = 20;
    g.ratio = 100.0;
    g.seed = 3;
    const CnfFormula f = gen_uniform(g);
    std::size_t neg = 0, total = 0;
    std::vector<std::size_t> count(g.n + 1);
    for (const auto& c : f.clauses()) {
        for (auto l : c.literals()) {
            neg += l.negated() ? 1 : 0;
            ++total;
            ++count[l.var()];
        }
    }
    EXPECT_NEAR(static_cast<double>(neg) / total, 0.5, 4.0 * std::sqrt(0.25 / total));
    const double expected = static_cast<double>(total) / g.n;
    double chi2 = 0.0;
    for (Var v = 1; v <= g.n; ++v) {
        chi2 += (count[v] - expected) * (count[v] - expected) / expected;
    }
    EXPECT_LT(chi2, 43.8);  // chi-square(19) upper 0.001 point
}

TEST(GenPlanted, HiddenAssignmentSatisfies)
{
    for (std::uint64_t s = 0; s < 50; ++s) {
        GenSpec g;
        g.kind = GenKind::planted;
        g.n = 30;
        g.ratio = 4.5;
        g.seed = s;
        const auto inst = gen_planted(g);
        EXPECT_TRUE(evaluate(inst.formula, inst.hidden));
        EXPECT_EQ(inst.formula.num_clauses(), g.num_clauses());
        EXPECT_EQ(inst.hidden.size(), g.n);
    }
    EXPECT_EQ(to_string(GenKind::planted), "planted-simple");
}

TEST(Screen, KeepsOnlyCertifiedFormulas)
{
    std::vector<CnfFormula> fs;
    GenSpec g;
    g.kind = GenKind::planted;
    g.n = 12;
    fs.push_back(gen_planted(g).formula);
    fs.emplace_back(2, std::vector<Clause>{Clause{1}, Clause{-1}});
    g.n = 40;
    g.seed = 5;
    fs.push_back(gen_planted(g).formula);
    const auto kept = screen_satisfiable(fs);
    ASSERT_EQ(kept.size(), 2u);
    EXPECT_EQ(kept[0].index, 0u);
    EXPECT_EQ(kept[1].index, 2u);
    for (const auto& k : kept) {
        EXPECT_TRUE(evaluate(fs[k.index], k.witness));
    }
}

TEST(Screen, SrwaTimeoutDropsFormula)
{
    // 25 variables (beyond brute force) with a contradiction on x1.
    std::vector<Clause> cs{Clause{1}, Clause{-1}};
    for (Var v = 2; v <= 25; ++v) {
        cs.push_back(Clause{static_cast<std::int32_t>(v)});
    }
    const std::vector<CnfFormula> fs{CnfFormula(25, cs)};
    ScreenOptions o;
    o.flip_budget = 1000;
    EXPECT_TRUE(screen_satisfiable(fs, o).empty());
}
