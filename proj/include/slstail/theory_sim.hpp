#pragma once

#include <cstdint>
#include <vector>

namespace slstail {

/// Pool sizes of the binomial clause-count model behind the P, Q, R ratios.
struct PqrModel {
    std::uint64_t n_in = 1000;       ///< implied clauses unsatisfied and containing x
    std::uint64_t n_out = 1000;      ///< implied clauses unsatisfied and not containing x
    std::uint64_t n_unsat_L = 2000;  ///< implied clauses unsatisfied under the assignment
    std::uint64_t m_F = 50;          ///< unsatisfied original clauses (fixed)
    double p = 0.3;                  ///< inclusion probability
    unsigned ell = 3;                ///< clause length
};

/// n_in, m_F, ell >= 1 and 0 < p <= 1; n_out and n_unsat_L may be 0.
void validate(const PqrModel& m);

struct SimOptions {
    std::size_t reps = 100000;
    std::uint64_t seed = 0;
    /// Add Uniform(-1/2, 1/2) to each nonzero binomial count before forming the
    /// ratio. Without it the ratios live on a lattice, which a chi-square test
    /// against a continuous law detects at large reps.
    bool jitter = false;
    double max_rejection = 0.10;
};

inline constexpr std::size_t kMinSimReps = 1000;

struct SimResult {
    std::vector<double> values;
    std::size_t attempts = 0;
    std::size_t rejected = 0;  ///< draws with a zero denominator count

    double rejection_rate() const noexcept
    {
        return attempts == 0 ? 0.0 : static_cast<double>(rejected) / static_cast<double>(attempts);
    }
};

/// (1/ell) / (1 + B/A) with A ~ Bin(n_in, p), B ~ Bin(n_out, p); A = 0 rejected.
SimResult simulate_P(const PqrModel& m, const SimOptions& o);
/// m_F / (m_F + U) with U ~ Bin(n_unsat_L, p).
SimResult simulate_Q(const PqrModel& m, const SimOptions& o);
/// U / (m_F + U) with U ~ Bin(n_unsat_L, p); U = 0 rejected.
SimResult simulate_R(const PqrModel& m, const SimOptions& o);

struct QrPair {
    SimResult q;
    SimResult r;
};
/// Q and R from the same U draws, so Q + R = 1 on every accepted draw.
QrPair simulate_QR_paired(const PqrModel& m, const SimOptions& o);

struct LogMeanReport {
    std::uint64_t n = 0;
    double p = 0.0;
    std::size_t reps = 0;
    std::size_t rejected = 0;  ///< zero sample means
    double mean_log = 0.0;
    double var_log = 0.0;
    double expected_mean = 0.0;  ///< log p
    double expected_var = 0.0;   ///< (1 - p) / (n p)
    double mean_std_error = 0.0;
    double mean_deviation_se = 0.0;   ///< (mean_log - log p) / mean_std_error
    double var_relative_error = 0.0;  ///< var_log / expected_var - 1
};

/// Log of the mean of n Bernoulli(p) trials, repeated reps times. Requires
/// n p (1 - p) >= 50 unless p = 1, which is the degenerate case log = 0.
LogMeanReport check_log_mean(std::uint64_t n, double p, std::size_t reps, std::uint64_t seed);

}  // namespace slstail
