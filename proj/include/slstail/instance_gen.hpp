#pragma once

#include "slstail/cnf.hpp"
#include "slstail/solvers.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace slstail {

enum class GenKind { uniform, planted };

struct GenSpec {
    GenKind kind = GenKind::uniform;
    std::uint32_t n = 50;
    std::uint32_t k = 3;
    double ratio = 4.267;
    std::uint64_t seed = 0;

    /// floor(ratio * n).
    std::size_t num_clauses() const;
    void validate() const;
};

std::string to_string(GenKind kind);

/// Uniform random k-CNF: each clause has k distinct variables and fair-coin polarities.
CnfFormula gen_uniform(const GenSpec& spec);

struct PlantedInstance {
    CnfFormula formula;
    Assignment hidden;
};

/// Rejection planting: clauses falsified by a uniformly drawn hidden assignment
/// are redrawn. Reports label this class `planted-simple`.
PlantedInstance gen_planted(const GenSpec& spec);

struct ScreenedInstance {
    std::size_t index = 0;
    Assignment witness;
};

struct ScreenOptions {
    /// SRWA flip budget for formulas too large for brute force.
    std::uint64_t flip_budget = 10'000'000;
    std::uint64_t seed = 0;
};

/// Keeps the formulas certified satisfiable: brute force when n <= 24,
/// otherwise an SRWA witness. An SRWA timeout drops the formula.
std::vector<ScreenedInstance> screen_satisfiable(std::span<const CnfFormula> formulas, ScreenOptions options = {});

}  // namespace slstail
