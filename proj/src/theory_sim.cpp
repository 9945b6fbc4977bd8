#include "slstail/theory_sim.hpp"

#include "slstail/error.hpp"
#include "slstail/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace slstail {

namespace {

// Reps are drawn in fixed-size chunks, each from its own derived stream.
constexpr std::size_t kChunk = 4096;

void check_reps(std::size_t reps)
{
    if (reps < kMinSimReps) {
        throw UsageError("simulation needs at least " + std::to_string(kMinSimReps) + " reps");
    }
}

double count(std::uint64_t k, bool jitter, Rng& rng)
{
    const double v = static_cast<double>(k);
    return (jitter && k > 0) ? v + rng.uniform() - 0.5 : v;
}

template <class Draw>
void run_chunks(const SimOptions& o, const char* tag, Draw&& draw)
{
    for (std::size_t start = 0, c = 0; start < o.reps; start += kChunk, ++c) {
        Rng rng(derive_seed(o.seed, tag, c));
        const std::size_t end = std::min(o.reps, start + kChunk);
        for (std::size_t r = start; r < end; ++r) {
            draw(rng);
        }
    }
}

void check_rejection(const SimResult& s, const SimOptions& o, const char* what)
{
    if (s.rejection_rate() > o.max_rejection) {
        throw UsageError(std::string(what) + ": zero-denominator rate " + std::to_string(s.rejection_rate()) +
                         " exceeds the limit; the pool is too sparse");
    }
}

}  // namespace

void validate(const PqrModel& m)
{
    if (m.n_in < 1 || m.m_F < 1 || m.ell < 1) {
        throw UsageError("pqr model: n_in, m_F and ell must be at least 1");
    }
    if (!(m.p > 0.0 && m.p <= 1.0)) {
        throw UsageError("pqr model: p must lie in (0, 1]");
    }
}

SimResult simulate_P(const PqrModel& m, const SimOptions& o)
{
    validate(m);
    check_reps(o.reps);
    SimResult s;
    const double inv_ell = 1.0 / static_cast<double>(m.ell);
    run_chunks(o, "pqr-P", [&](Rng& rng) {
        ++s.attempts;
        const auto a = rng.binomial(m.n_in, m.p);
        const auto b = rng.binomial(m.n_out, m.p);
        if (a == 0) {
            ++s.rejected;
            return;
        }
        const double ja = count(a, o.jitter, rng);
        const double jb = count(b, o.jitter, rng);
        s.values.push_back(inv_ell / (1.0 + jb / ja));
    });
    check_rejection(s, o, "simulate_P");
    return s;
}

SimResult simulate_Q(const PqrModel& m, const SimOptions& o)
{
    validate(m);
    check_reps(o.reps);
    SimResult s;
    const double mf = static_cast<double>(m.m_F);
    run_chunks(o, "pqr-Q", [&](Rng& rng) {
        ++s.attempts;
        const double u = count(rng.binomial(m.n_unsat_L, m.p), o.jitter, rng);
        s.values.push_back(mf / (mf + u));
    });
    return s;
}

SimResult simulate_R(const PqrModel& m, const SimOptions& o)
{
    validate(m);
    check_reps(o.reps);
    SimResult s;
    const double mf = static_cast<double>(m.m_F);
    run_chunks(o, "pqr-R", [&](Rng& rng) {
        ++s.attempts;
        const auto k = rng.binomial(m.n_unsat_L, m.p);
        if (k == 0) {
            ++s.rejected;
            return;
        }
        const double u = count(k, o.jitter, rng);
        s.values.push_back(u / (mf + u));
    });
    check_rejection(s, o, "simulate_R");
    return s;
}

QrPair simulate_QR_paired(const PqrModel& m, const SimOptions& o)
{
    validate(m);
    check_reps(o.reps);
    QrPair out;
    const double mf = static_cast<double>(m.m_F);
    run_chunks(o, "pqr-QR", [&](Rng& rng) {
        ++out.q.attempts;
        ++out.r.attempts;
        const auto k = rng.binomial(m.n_unsat_L, m.p);
        const double u = count(k, o.jitter, rng);
        out.q.values.push_back(mf / (mf + u));
        if (k == 0) {
            ++out.r.rejected;
            return;
        }
        out.r.values.push_back(u / (mf + u));
    });
    check_rejection(out.r, o, "simulate_QR_paired");
    return out;
}

LogMeanReport check_log_mean(std::uint64_t n, double p, std::size_t reps, std::uint64_t seed)
{
    if (n == 0 || !(p > 0.0 && p <= 1.0)) {
        throw UsageError("check_log_mean: need n >= 1 and 0 < p <= 1");
    }
    const double dn = static_cast<double>(n);
    if (p < 1.0 && dn * p * (1.0 - p) < 50.0) {
        throw UsageError("check_log_mean: requires n p (1 - p) >= 50");
    }
    if (reps < 2) {
        throw UsageError("check_log_mean: needs at least 2 reps");
    }
    LogMeanReport rep;
    rep.n = n;
    rep.p = p;
    rep.expected_mean = std::log(p);
    rep.expected_var = (1.0 - p) / (dn * p);

    std::vector<double> logs;
    logs.reserve(reps);
    SimOptions o;
    o.reps = reps;
    o.seed = seed;
    run_chunks(o, "log-mean", [&](Rng& rng) {
        const auto y = rng.binomial(n, p);
        if (y == 0) {
            ++rep.rejected;
            return;
        }
        logs.push_back(std::log(static_cast<double>(y) / dn));
    });
    rep.reps = logs.size();
    if (rep.reps < 2) {
        throw NumericError("check_log_mean: too many zero sample means");
    }
    double sum = 0.0;
    for (double v : logs) {
        sum += v;
    }
    rep.mean_log = sum / static_cast<double>(rep.reps);
    double ss = 0.0;
    for (double v : logs) {
        ss += (v - rep.mean_log) * (v - rep.mean_log);
    }
    rep.var_log = ss / static_cast<double>(rep.reps - 1);
    rep.mean_std_error = std::sqrt(rep.var_log / static_cast<double>(rep.reps));
    if (rep.mean_std_error > 0.0) {
        rep.mean_deviation_se = (rep.mean_log - rep.expected_mean) / rep.mean_std_error;
    }
    if (rep.expected_var > 0.0) {
        rep.var_relative_error = rep.var_log / rep.expected_var - 1.0;
    }
    return rep;
}

}  // namespace slstail
