#pragma once

#include "slstail/distributions.hpp"
#include "slstail/fitting.hpp"
#include "slstail/instance_gen.hpp"
#include "slstail/restart.hpp"
#include "slstail/solvers.hpp"
#include "slstail/theory_sim.hpp"

#include "json.hpp"

namespace slstail {

using Json = nlohmann::ordered_json;

void to_json(Json& j, const NormalParams& p);
void to_json(Json& j, const LogNormalParams& p);
void to_json(Json& j, const SbParams& p);
void from_json(const Json& j, NormalParams& p);
void from_json(const Json& j, LogNormalParams& p);
void from_json(const Json& j, SbParams& p);

void to_json(Json& j, const GenSpec& s);
void from_json(const Json& j, GenSpec& s);
void to_json(Json& j, const SolverConfig& c);
void from_json(const Json& j, SolverConfig& c);
void to_json(Json& j, const PqrModel& m);
void from_json(const Json& j, PqrModel& m);

/// {family, params, loglik, chi2, dof, bins, bootstrap_pvalue, verdict, n, seed, ...}
void to_json(Json& j, const FitReport& r);
/// {useful, witness_p, witness_threshold, margin, grid_size, ...}
void to_json(Json& j, const RestartVerdict& v);
void to_json(Json& j, const LogMeanReport& r);
void to_json(Json& j, const LongTailReport& r);

/// Parses a distribution spec such as {"family": "lognormal", "mu": 1, "sigma": 1.25}.
Distribution distribution_from_json(const Json& j);
Json distribution_to_json(const Distribution& d);

}  // namespace slstail
