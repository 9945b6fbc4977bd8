#include "slstail/serialization.hpp"

#include <cmath>

namespace slstail {

namespace {

// JSON has no NaN/inf; encode them as null.
Json number(double v)
{
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

template <class T>
Json optional_number(const std::optional<T>& v)
{
    return v ? number(*v) : Json(nullptr);
}

double require_number(const Json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw DataError(std::string("missing numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

}  // namespace

void to_json(Json& j, const NormalParams& p)
{
    j = Json{{"mu", p.mu}, {"sigma", p.sigma}};
}

void to_json(Json& j, const LogNormalParams& p)
{
    j = Json{{"mu", p.mu}, {"sigma", p.sigma}, {"xi", p.xi}};
}

void to_json(Json& j, const SbParams& p)
{
    j = Json{{"gamma", p.gamma}, {"delta", p.delta}, {"lambda", p.lambda}, {"xi", p.xi}};
}

void from_json(const Json& j, NormalParams& p)
{
    p.mu = require_number(j, "mu");
    p.sigma = require_number(j, "sigma");
}

void from_json(const Json& j, LogNormalParams& p)
{
    p.mu = require_number(j, "mu");
    p.sigma = require_number(j, "sigma");
    p.xi = j.value("xi", 0.0);
}

void from_json(const Json& j, SbParams& p)
{
    p.gamma = require_number(j, "gamma");
    p.delta = require_number(j, "delta");
    p.lambda = require_number(j, "lambda");
    p.xi = require_number(j, "xi");
}

void to_json(Json& j, const GenSpec& s)
{
    j = Json{{"kind", to_string(s.kind) == "planted" ? "planted-simple" : to_string(s.kind)},
             {"n", s.n},
             {"k", s.k},
             {"ratio", s.ratio},
             {"num_clauses", s.num_clauses()},
             {"seed", s.seed}};
}

void from_json(const Json& j, GenSpec& s)
{
    const std::string kind = j.value("kind", std::string("uniform"));
    if (kind == "uniform") {
        s.kind = GenKind::uniform;
    } else if (kind == "planted" || kind == "planted-simple") {
        s.kind = GenKind::planted;
    } else {
        throw DataError("unknown generator kind '" + kind + "'");
    }
    s.n = j.value("n", s.n);
    s.k = j.value("k", s.k);
    s.ratio = j.value("ratio", s.ratio);
    s.seed = j.value("seed", s.seed);
}

void to_json(Json& j, const SolverConfig& c)
{
    j = Json{{"algorithm", to_string(c.algorithm)},
             {"t_restart", c.t_restart == kNoRestart ? Json("inf") : Json(c.t_restart)},
             {"max_flips", c.max_flips},
             {"seed", c.seed}};
    if (c.algorithm != SolverAlgorithm::srwa) {
        j["cb"] = c.effective_cb();
        j["eps"] = c.eps;
    }
}

void from_json(const Json& j, SolverConfig& c)
{
    if (j.contains("algorithm")) {
        c.algorithm = parse_solver_algorithm(j.at("algorithm").get<std::string>());
    }
    if (j.contains("t_restart")) {
        const auto& t = j.at("t_restart");
        c.t_restart = t.is_string() ? kNoRestart : t.get<std::uint64_t>();
    }
    c.max_flips = j.value("max_flips", c.max_flips);
    c.seed = j.value("seed", c.seed);
    if (j.contains("cb")) {
        c.cb = j.at("cb").get<double>();
    }
    c.eps = j.value("eps", c.eps);
}

void to_json(Json& j, const PqrModel& m)
{
    j = Json{{"n_in", m.n_in}, {"n_out", m.n_out}, {"n_unsat_L", m.n_unsat_L},
             {"m_F", m.m_F},   {"p", m.p},         {"ell", m.ell}};
}

void from_json(const Json& j, PqrModel& m)
{
    m.n_in = j.value("n_in", m.n_in);
    m.n_out = j.value("n_out", m.n_out);
    m.n_unsat_L = j.value("n_unsat_L", m.n_unsat_L);
    m.m_F = j.value("m_F", m.m_F);
    m.p = j.value("p", m.p);
    m.ell = j.value("ell", m.ell);
}

void to_json(Json& j, const FitReport& r)
{
    j = Json::object();
    j["family"] = to_string(r.family);
    j["params"] = std::visit([](const auto& p) { return Json(p); }, r.params);
    j["loglik"] = number(r.loglik);
    j["chi2"] = number(r.chi2);
    j["dof"] = r.dof;
    j["bins"] = r.bins;
    j["bootstrap_pvalue"] = optional_number(r.bootstrap_pvalue);
    j["verdict"] = to_string(r.verdict);
    j["n"] = r.n;
    j["seed"] = r.seed;
    if (r.verdict != Verdict::not_tested) {
        j["alpha"] = r.alpha;
        j["replicates"] = r.replicates;
        j["failed_replicates"] = r.failed_replicates;
        j["critical_value"] = optional_number(r.critical_value);
    }
}

void to_json(Json& j, const RestartVerdict& v)
{
    j = Json{{"useful", v.useful},
             {"witness_p", optional_number(v.witness_p)},
             {"witness_threshold", optional_number(v.witness_threshold)},
             {"margin", number(v.margin)},
             {"grid_size", v.grid_size},
             {"infinite_mean", v.infinite_mean},
             {"heuristic", v.heuristic}};
}

void to_json(Json& j, const LogMeanReport& r)
{
    j = Json{{"n", r.n},
             {"p", r.p},
             {"reps", r.reps},
             {"rejected", r.rejected},
             {"mean_log", number(r.mean_log)},
             {"expected_mean", number(r.expected_mean)},
             {"mean_std_error", number(r.mean_std_error)},
             {"mean_deviation_se", number(r.mean_deviation_se)},
             {"var_log", number(r.var_log)},
             {"expected_var", number(r.expected_var)},
             {"var_relative_error", number(r.var_relative_error)}};
}

void to_json(Json& j, const LongTailReport& r)
{
    j = Json{{"verdict", to_string(r.verdict)},
             {"ratio_y1", number(r.ratio_y1)},
             {"ratio_y10", number(r.ratio_y10)},
             {"ratio_ok", r.ratio_ok},
             {"hazard_trend", to_string(r.hazard)},
             {"hazard_ok", r.hazard_ok}};
}

Distribution distribution_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("family")) {
        throw DataError("distribution spec needs a 'family' field");
    }
    const std::string family = j.at("family").get<std::string>();
    const Json& p = j.contains("params") ? j.at("params") : j;
    if (family == "normal") {
        return Distribution(p.get<NormalParams>());
    }
    if (family == "lognormal" || family == "LogNormal3" || family == "LogNormal2") {
        return Distribution(p.get<LogNormalParams>());
    }
    if (family == "sb" || family == "johnson_sb" || family == "SB") {
        return Distribution(p.get<SbParams>());
    }
    if (family == "exponential") {
        return Distribution(ExponentialParams{require_number(p, "rate")});
    }
    if (family == "uniform") {
        return Distribution(UniformParams{require_number(p, "a"), require_number(p, "b")});
    }
    if (family == "pareto") {
        return Distribution(ParetoParams{require_number(p, "scale"), require_number(p, "shape")});
    }
    throw DataError("unknown distribution family '" + family + "'");
}

Json distribution_to_json(const Distribution& d)
{
    Json j = Json::object();
    j["family"] = d.family();
    std::visit(
        [&j](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, NormalParams> || std::is_same_v<T, LogNormalParams> ||
                          std::is_same_v<T, SbParams>) {
                j["params"] = Json(p);
            } else if constexpr (std::is_same_v<T, ExponentialParams>) {
                j["params"] = Json{{"rate", p.rate}};
            } else if constexpr (std::is_same_v<T, UniformParams>) {
                j["params"] = Json{{"a", p.a}, {"b", p.b}};
            } else if constexpr (std::is_same_v<T, ParetoParams>) {
                j["params"] = Json{{"scale", p.scale}, {"shape", p.shape}};
            } else {
                j["params"] = Json{{"n", p->size()}};
            }
        },
        d.params());
    return j;
}

}  // namespace slstail
