#include "support/oracles.hpp"

#include "thermograph/errors.hpp"
#include "thermograph/verify.hpp"

#include <gtest/gtest.h>

using namespace thermograph;

TEST(Verify, TriangleSmallHasEightStatesWithBoltzmannWeights) {
    auto m = oracle::loadModel("triangles-small.model");
    m.energy.costs = {0.4, -0.3, 1.2, -2.5};
    auto space = enumerateComponent(m.initial, m.rules, m.policy, m.energy);
    ASSERT_EQ(space.size(), 8u);
    auto pi = stationary(space);
    auto oracle = oracle::triangleBoltzmann(1, {0.4, -0.3, 1.2, -2.5});
    ASSERT_EQ(oracle.size(), 8u);
    for (std::size_t i = 0; i < space.size(); ++i)
        EXPECT_NEAR(pi[i], oracle.at(oracle::triangleState(space.states[i])), 1e-12);
    EXPECT_EQ(space.energyViolations, 0u);
}

TEST(Verify, DetailedBalanceHoldsAndDetectsMutation) {
    auto m = oracle::loadModel("triangles-small.model");
    auto space = enumerateComponent(m.initial, m.rules, m.policy, m.energy);
    auto report = checkDetailedBalance(space);
    EXPECT_TRUE(report.pass);
    EXPECT_LE(report.maxRelativeError, 1e-10);
    EXPECT_EQ(report.oneWay, 0u);
    EXPECT_TRUE(checkDetailedBalanceCollapsed(space).pass);

    auto& [to, rate] = *space.rates[0].begin();
    rate *= 1.01;
    (void)to;
    EXPECT_FALSE(checkDetailedBalance(space).pass);
}

TEST(Verify, TwoPerTypeStateCountAndExpectation) {
    auto m = oracle::loadModel("triangles.model");
    m.initial = parsePattern(m.graph, "A(l, r), B(l, r), C(l, r), A(l, r), B(l, r), C(l, r)");
    auto space = enumerateComponent(m.initial, m.rules, m.policy, m.energy);
    EXPECT_EQ(space.size(), 343u);
    auto pi = oracle::triangleBoltzmann(2, {0, 0, 0, -2.5});
    double expected = 0;
    for (auto& [st, p] : pi) expected += p * static_cast<double>(oracle::triangleCount(st));
    double got = stationaryExpectation(space, [&](const ContactMap&, const PatternCounts& n) { return n[3]; });
    EXPECT_NEAR(got, expected, 1e-12);
    EXPECT_TRUE(checkDetailedBalance(space).pass);
}

TEST(Verify, CapRaises) {
    auto m = oracle::loadModel("triangles.model");
    m.initial = parsePattern(m.graph, "A(l, r), B(l, r), C(l, r), A(l, r), B(l, r), C(l, r)");
    try {
        enumerateComponent(m.initial, m.rules, m.policy, m.energy, 100);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "CAP");
    }
}

TEST(Verify, EmpiricalOccupancyConverges) {
    auto m = oracle::loadModel("triangles-small.model");
    auto space = enumerateComponent(m.initial, m.rules, m.policy, m.energy);
    Simulator sim(m.rules, m.policy, m.energy, m.initial, 5);
    auto occ = recordOccupancy(sim, 100000);
    EXPECT_EQ(occ.events, 100000u);
    auto report = compareEmpirical(occ, space, 0.02);
    EXPECT_TRUE(report.pass) << report.toText();
    EXPECT_EQ(report.unmatchedTime, 0.0);
}

TEST(Verify, ReportsSerialize) {
    auto m = oracle::loadModel("triangles-small.model");
    auto space = enumerateComponent(m.initial, m.rules, m.policy, m.energy);
    auto report = checkDetailedBalance(space);
    EXPECT_NE(report.toJson().find("\"pass\""), std::string::npos);
    EXPECT_NE(report.toText().find("PASS"), std::string::npos);
}

TEST(Verify, RingWithTwoAgentsIsBalanced) {
    auto ring = oracle::loadModel("ring.model");
    auto x = parsePattern(ring.graph, "P(x!1, y!2, f~0, s), P(x!2, y!1, f~0, s), Y(s~p)");
    auto space = enumerateComponent(x, ring.rules, ring.policy, ring.energy);
    EXPECT_GT(space.size(), 4u);
    auto report = checkDetailedBalance(space);
    EXPECT_TRUE(report.pass) << report.toText();
    EXPECT_EQ(report.energyViolations, 0u);
}
