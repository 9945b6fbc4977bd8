#include "slstail/cnf.hpp"

#include "slstail/error.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace slstail {

Literal Literal::from_dimacs(std::int32_t code)
{
    if (code == 0 || code == std::numeric_limits<std::int32_t>::min()) {
        throw UsageError("literal code must be a nonzero 32-bit integer");
    }
    return code < 0 ? Literal(static_cast<Var>(-code), true) : Literal(static_cast<Var>(code), false);
}

Clause::Clause(std::vector<Literal> literals)
{
    literals_.reserve(literals.size());
    for (Literal l : literals) {
        if (l.var() == 0) {
            throw UsageError("literal variable must be >= 1");
        }
        bool duplicate = false;
        for (Literal seen : literals_) {
            if (seen.var() != l.var()) {
                continue;
            }
            if (seen != l) {
                throw DataError("tautological clause: variable " + std::to_string(l.var()) +
                                " occurs in both polarities");
            }
            duplicate = true;
            break;
        }
        if (!duplicate) {
            literals_.push_back(l);
        }
    }
}

Clause::Clause(std::initializer_list<std::int32_t> dimacs_codes)
    : Clause([&] {
          std::vector<Literal> lits;
          for (auto c : dimacs_codes) {
              lits.push_back(Literal::from_dimacs(c));
          }
          return lits;
      }())
{
}

bool Clause::contains_var(Var x) const noexcept
{
    return std::any_of(literals_.begin(), literals_.end(), [x](Literal l) { return l.var() == x; });
}

Var Clause::max_var() const noexcept
{
    Var m = 0;
    for (Literal l : literals_) {
        m = std::max(m, l.var());
    }
    return m;
}

Clause Clause::canonical() const
{
    Clause c = *this;
    std::sort(c.literals_.begin(), c.literals_.end());
    return c;
}

CnfFormula::CnfFormula(std::uint32_t num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses))
{
    for (const Clause& c : clauses_) {
        if (c.max_var() > num_vars_) {
            throw DataError("clause mentions variable " + std::to_string(c.max_var()) +
                            " beyond num_vars " + std::to_string(num_vars_));
        }
    }
}

bool CnfFormula::has_empty_clause() const noexcept
{
    return std::any_of(clauses_.begin(), clauses_.end(), [](const Clause& c) { return c.empty(); });
}

Var Assignment::check(Var x) const
{
    if (x < 1 || x > values_.size()) {
        throw UsageError("variable " + std::to_string(x) + " outside assignment of size " +
                         std::to_string(values_.size()));
    }
    return x;
}

Assignment flip(Assignment a, Var x)
{
    a.flip(x);
    return a;
}

std::size_t hamming_distance(const Assignment& a, const Assignment& b)
{
    if (a.size() != b.size()) {
        throw UsageError("hamming_distance: size mismatch");
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.bits().size(); ++i) {
        d += a.bits()[i] != b.bits()[i];
    }
    return d;
}

bool clause_satisfied(const Clause& c, const Assignment& a)
{
    return std::any_of(c.literals().begin(), c.literals().end(), [&](Literal l) { return a.satisfies(l); });
}

namespace {

void require_complete(const CnfFormula& f, const Assignment& a)
{
    if (a.size() != f.num_vars()) {
        throw UsageError("assignment has " + std::to_string(a.size()) + " variables, formula has " +
                         std::to_string(f.num_vars()));
    }
}

}  // namespace

bool evaluate(const CnfFormula& f, const Assignment& a)
{
    require_complete(f, a);
    return std::all_of(f.clauses().begin(), f.clauses().end(),
                       [&](const Clause& c) { return clause_satisfied(c, a); });
}

std::size_t count_unsat(const CnfFormula& g, const Assignment& b, UnsatFilter filter)
{
    require_complete(g, b);
    if (filter.kind != UnsatFilter::Kind::all && (filter.var < 1 || filter.var > g.num_vars())) {
        throw UsageError("count_unsat: filter variable out of range");
    }
    std::size_t count = 0;
    for (const Clause& c : g.clauses()) {
        if (clause_satisfied(c, b)) {
            continue;
        }
        switch (filter.kind) {
        case UnsatFilter::Kind::all:
            ++count;
            break;
        case UnsatFilter::Kind::containing:
            count += c.contains_var(filter.var);
            break;
        case UnsatFilter::Kind::not_containing:
            count += !c.contains_var(filter.var);
            break;
        }
    }
    return count;
}

namespace {

struct MaskClause {
    std::uint32_t pos = 0;
    std::uint32_t neg = 0;
};

std::vector<MaskClause> to_masks(const CnfFormula& f)
{
    if (f.num_vars() > kBruteForceMaxVars) {
        throw UsageError("brute force limited to " + std::to_string(kBruteForceMaxVars) + " variables, got " +
                         std::to_string(f.num_vars()));
    }
    std::vector<MaskClause> masks;
    masks.reserve(f.num_clauses());
    for (const Clause& c : f.clauses()) {
        MaskClause m;
        for (Literal l : c.literals()) {
            (l.negated() ? m.neg : m.pos) |= 1u << (l.var() - 1);
        }
        masks.push_back(m);
    }
    return masks;
}

bool satisfies_all(const std::vector<MaskClause>& masks, std::uint32_t model)
{
    for (const MaskClause& m : masks) {
        if ((model & m.pos) == 0 && (~model & m.neg) == 0) {
            return false;
        }
    }
    return true;
}

Assignment from_mask(std::uint32_t n, std::uint32_t model)
{
    Assignment a(n);
    for (Var x = 1; x <= n; ++x) {
        a.set(x, ((model >> (x - 1)) & 1u) != 0);
    }
    return a;
}

}  // namespace

std::optional<Assignment> brute_force_satisfiable(const CnfFormula& f)
{
    const auto masks = to_masks(f);
    const std::uint64_t total = std::uint64_t{1} << f.num_vars();
    for (std::uint64_t m = 0; m < total; ++m) {
        if (satisfies_all(masks, static_cast<std::uint32_t>(m))) {
            return from_mask(f.num_vars(), static_cast<std::uint32_t>(m));
        }
    }
    return std::nullopt;
}

std::vector<std::uint32_t> enumerate_models(const CnfFormula& f)
{
    const auto masks = to_masks(f);
    const std::uint64_t total = std::uint64_t{1} << f.num_vars();
    std::vector<std::uint32_t> models;
    for (std::uint64_t m = 0; m < total; ++m) {
        if (satisfies_all(masks, static_cast<std::uint32_t>(m))) {
            models.push_back(static_cast<std::uint32_t>(m));
        }
    }
    return models;
}

}  // namespace slstail
