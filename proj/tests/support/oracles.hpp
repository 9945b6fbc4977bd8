#pragma once

// Deliberately naive reference implementations used as test oracles. They
// share no code with the library beyond the plain data types.

#include "slstail/cnf.hpp"
#include "slstail/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <set>
#include <unordered_set>
#include <vector>

namespace oracle {

using RawClause = std::vector<int>;  // sorted by (|lit|, sign)
using RawSet = std::set<RawClause>;

inline RawClause normalize(std::vector<int> c)
{
    std::sort(c.begin(), c.end(), [](int a, int b) {
        return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a > b;
    });
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

inline bool tautology(const RawClause& c)
{
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        if (c[i] == -c[i + 1]) {
            return true;
        }
    }
    return false;
}

inline RawSet to_raw(const slstail::CnfFormula& f)
{
    RawSet s;
    for (const auto& c : f.clauses()) {
        std::vector<int> lits;
        for (auto l : c.literals()) {
            lits.push_back(l.dimacs());
        }
        s.insert(normalize(lits));
    }
    return s;
}

inline RawSet to_raw(std::span<const slstail::Clause> clauses)
{
    RawSet s;
    for (const auto& c : clauses) {
        std::vector<int> lits;
        for (auto l : c.literals()) {
            lits.push_back(l.dimacs());
        }
        s.insert(normalize(lits));
    }
    return s;
}

/// All-pairs fixpoint of width-bounded resolution (no width filter on the input).
/// Clauses are held as (positive, negative) variable masks, so at most 32
/// variables. Each round pairs every newly added clause with every clause.
inline RawSet naive_closure(const RawSet& s, std::size_t w)
{
    using Mask = std::pair<std::uint32_t, std::uint32_t>;
    std::vector<Mask> all;
    std::unordered_set<std::uint64_t> seen;
    auto key = [](const Mask& m) { return (std::uint64_t{m.first} << 32) | m.second; };
    for (const auto& c : s) {
        Mask m{0, 0};
        for (int l : c) {
            (l > 0 ? m.first : m.second) |= 1u << (std::abs(l) - 1);
        }
        if (seen.insert(key(m)).second) {
            all.push_back(m);
        }
    }
    std::size_t fresh = 0;
    while (fresh < all.size()) {
        const std::size_t end = all.size();
        for (std::size_t i = fresh; i < end; ++i) {
            for (std::size_t j = 0; j < end; ++j) {
                const Mask a = all[i];
                const Mask b = all[j];
                const std::uint32_t clash = (a.first & b.second) | (a.second & b.first);
                if (std::popcount(clash) != 1) {
                    continue;  // no pivot, or every resolvent is tautological
                }
                const Mask r{(a.first | b.first) & ~clash, (a.second | b.second) & ~clash};
                if (static_cast<std::size_t>(std::popcount(r.first | r.second)) <= w && seen.insert(key(r)).second) {
                    all.push_back(r);
                }
            }
        }
        fresh = end;
    }
    RawSet out;
    for (const Mask& m : all) {
        std::vector<int> c;
        for (int v = 1; v <= 32; ++v) {
            if ((m.first >> (v - 1)) & 1u) {
                c.push_back(v);
            }
            if ((m.second >> (v - 1)) & 1u) {
                c.push_back(-v);
            }
        }
        out.insert(normalize(c));
    }
    return out;
}

inline bool satisfies(const RawSet& s, std::uint32_t mask)
{
    for (const auto& c : s) {
        bool sat = false;
        for (int l : c) {
            const bool v = ((mask >> (std::abs(l) - 1)) & 1u) != 0;
            if ((l > 0) == v) {
                sat = true;
                break;
            }
        }
        if (!sat) {
            return false;
        }
    }
    return true;
}

inline std::vector<std::uint32_t> models(const RawSet& s, unsigned n)
{
    std::vector<std::uint32_t> out;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        if (satisfies(s, m)) {
            out.push_back(m);
        }
    }
    return out;
}

/// Random formula over n variables with clause widths in [1, kmax].
inline slstail::CnfFormula random_formula(slstail::Rng& rng, unsigned n, std::size_t m, unsigned kmax)
{
    std::vector<slstail::Clause> cs;
    while (cs.size() < m) {
        const unsigned k = 1 + static_cast<unsigned>(rng.below(std::min(kmax, n)));
        std::vector<slstail::Var> vars;
        while (vars.size() < k) {
            const auto v = static_cast<slstail::Var>(1 + rng.below(n));
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
                vars.push_back(v);
            }
        }
        std::vector<slstail::Literal> lits;
        for (auto v : vars) {
            lits.emplace_back(v, rng.coin());
        }
        cs.emplace_back(std::move(lits));
    }
    return slstail::CnfFormula(n, std::move(cs));
}

/// Kolmogorov distance of a sample to a cdf, straight from the definition.
template <class Cdf>
double ks(std::vector<double> x, Cdf cdf)
{
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max(d, std::max(std::abs((i + 1) / n - f), std::abs(f - i / n)));
    }
    return d;
}

}  // namespace oracle
