#include "slstail/error.hpp"
#include "slstail/serialization.hpp"

#include <gtest/gtest.h>

using namespace slstail;

TEST(Json, ParamsRoundTrip)
{
    const SbParams sb{0.1, 2.0, 3.0, -4.0};
    const auto sb2 = Json(sb).get<SbParams>();
    EXPECT_EQ(sb2.gamma, sb.gamma);
    EXPECT_EQ(sb2.xi, sb.xi);
    const LogNormalParams ln{1.0, 1.25, 0.5};
    const auto ln2 = Json(ln).get<LogNormalParams>();
    EXPECT_EQ(ln2.sigma, 1.25);
    EXPECT_EQ(ln2.xi, 0.5);
}

TEST(Json, GenSpecAndSolverConfig)
{
    GenSpec g;
    g.kind = GenKind::planted;
    g.n = 33;
    g.seed = 18446744073709551615ULL;
    const Json j = g;
    EXPECT_EQ(j.at("kind"), "planted-simple");
    const auto g2 = j.get<GenSpec>();
    EXPECT_EQ(g2.kind, GenKind::planted);
    EXPECT_EQ(g2.seed, g.seed);

    SolverConfig c;
    c.algorithm = SolverAlgorithm::probsat_exp;
    c.cb = 2.1;
    const Json jc = c;
    EXPECT_EQ(jc.at("t_restart"), "inf");
    const auto c2 = jc.get<SolverConfig>();
    EXPECT_EQ(c2.algorithm, c.algorithm);
    EXPECT_EQ(c2.t_restart, kNoRestart);
    EXPECT_EQ(c2.cb, c.cb);
    c.t_restart = 100;
    EXPECT_EQ(Json(c).get<SolverConfig>().t_restart, 100u);
}

TEST(Json, DistributionSpecs)
{
    const Distribution d = distribution_from_json(Json::parse(R"({"family":"lognormal","mu":1,"sigma":1.25})"));
    EXPECT_NEAR(d.mean(), std::exp(1.0 + 0.78125), 1e-12);
    const Distribution back = distribution_from_json(distribution_to_json(d));
    EXPECT_EQ(back.cdf(3.0), d.cdf(3.0));
    const Distribution sb = distribution_from_json(Json::parse(R"({"family":"sb","gamma":0,"delta":1,"lambda":2,"xi":1})"));
    EXPECT_EQ(sb.support_upper(), 3.0);
    EXPECT_THROW(distribution_from_json(Json::parse(R"({"family":"weibull"})")), DataError);
}

TEST(Json, ReportsWriteNullForNan)
{
    FitReport r;
    r.params = SbParams{};
    r.chi2 = std::nan("");
    const Json j = r;
    EXPECT_TRUE(j.at("chi2").is_null());
    EXPECT_EQ(j.at("verdict"), "not_tested");
}
