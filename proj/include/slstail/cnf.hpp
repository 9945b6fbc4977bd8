#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace slstail {

using Var = std::uint32_t;

/// A variable (1-based) together with a polarity.
class Literal {
public:
    constexpr Literal() = default;
    constexpr Literal(Var var, bool negated) : code_(negated ? -static_cast<std::int32_t>(var) : static_cast<std::int32_t>(var)) {}

    /// From a nonzero DIMACS integer.
    static Literal from_dimacs(std::int32_t code);

    constexpr Var var() const noexcept { return static_cast<Var>(code_ < 0 ? -code_ : code_); }
    constexpr bool negated() const noexcept { return code_ < 0; }
    constexpr std::int32_t dimacs() const noexcept { return code_; }
    constexpr Literal operator~() const noexcept { return Literal(var(), !negated()); }

    /// True when the literal is satisfied by `value` for its variable.
    constexpr bool satisfied_by(bool value) const noexcept { return value != negated(); }

    friend constexpr bool operator==(Literal, Literal) = default;
    /// Canonical order: by variable, positive before negative.
    friend constexpr bool operator<(Literal a, Literal b) noexcept
    {
        return a.var() != b.var() ? a.var() < b.var() : (!a.negated() && b.negated());
    }

private:
    std::int32_t code_ = 0;
};

/// A disjunction of literals over pairwise distinct variables.
class Clause {
public:
    Clause() = default;

    /// Drops repeated literals (keeping first occurrences) and rejects a clause
    /// containing a variable in both polarities.
    explicit Clause(std::vector<Literal> literals);
    Clause(std::initializer_list<std::int32_t> dimacs_codes);

    std::span<const Literal> literals() const noexcept { return literals_; }
    std::size_t width() const noexcept { return literals_.size(); }
    bool empty() const noexcept { return literals_.empty(); }
    bool contains_var(Var x) const noexcept;
    Var max_var() const noexcept;

    /// Same literals sorted in canonical order.
    Clause canonical() const;

    friend bool operator==(const Clause&, const Clause&) = default;

private:
    std::vector<Literal> literals_;
};

/// A conjunction of clauses over variables 1..num_vars. Clause order and
/// repeated clauses are preserved.
class CnfFormula {
public:
    CnfFormula() = default;
    CnfFormula(std::uint32_t num_vars, std::vector<Clause> clauses);

    std::uint32_t num_vars() const noexcept { return num_vars_; }
    std::span<const Clause> clauses() const noexcept { return clauses_; }
    std::size_t num_clauses() const noexcept { return clauses_.size(); }
    bool has_empty_clause() const noexcept;

    friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

private:
    std::uint32_t num_vars_ = 0;
    std::vector<Clause> clauses_;
};

/// Complete truth assignment. Values are indexed by 1-based variable.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(std::uint32_t num_vars, bool value = false) : values_(num_vars, value ? 1 : 0) {}
    explicit Assignment(std::vector<std::uint8_t> values) : values_(std::move(values)) {}

    std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(values_.size()); }
    bool value(Var x) const { return values_.at(x - 1) != 0; }
    void set(Var x, bool v) { values_.at(check(x) - 1) = v ? 1 : 0; }
    /// Flips x in place.
    void flip(Var x) { values_.at(check(x) - 1) ^= 1; }
    bool satisfies(Literal l) const { return l.satisfied_by(value(l.var())); }
    std::span<const std::uint8_t> bits() const noexcept { return values_; }

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    Var check(Var x) const;

    std::vector<std::uint8_t> values_;
};

/// Copy of `a` with x flipped.
Assignment flip(Assignment a, Var x);

std::size_t hamming_distance(const Assignment& a, const Assignment& b);

bool clause_satisfied(const Clause& c, const Assignment& a);

/// True iff every clause has a satisfied literal. Throws on length mismatch.
bool evaluate(const CnfFormula& f, const Assignment& a);

/// Which clauses count_unsat considers.
struct UnsatFilter {
    enum class Kind { all, containing, not_containing };
    Kind kind = Kind::all;
    Var var = 0;

    static UnsatFilter all() { return {}; }
    static UnsatFilter containing(Var x) { return {Kind::containing, x}; }
    static UnsatFilter not_containing(Var x) { return {Kind::not_containing, x}; }
};

/// Number of clauses of g falsified by b, optionally restricted to those that do or do not mention a variable.
std::size_t count_unsat(const CnfFormula& g, const Assignment& b, UnsatFilter filter = UnsatFilter::all());

/// Exhaustive 2^n scan; returns the first satisfying assignment found.
/// Throws UsageError when num_vars exceeds kBruteForceMaxVars.
std::optional<Assignment> brute_force_satisfiable(const CnfFormula& f);

/// All models as bit masks (bit x-1 holds the value of x), ascending.
std::vector<std::uint32_t> enumerate_models(const CnfFormula& f);

inline constexpr std::uint32_t kBruteForceMaxVars = 24;

}  // namespace slstail
