#include "support/oracles.hpp"

#include "thermograph/errors.hpp"
#include "thermograph/kasim_export.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace thermograph;

namespace {

bool endsWith(const std::string& s, const std::string& tail) {
    return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

}  // namespace

TEST(Export, TriangleClosingRates) {
    auto m = oracle::loadModel("triangles.model");
    auto ex = exportKasim(m);
    ASSERT_EQ(ex.ruleLines.size(), m.rules.size());
    int closing = 0, opening = 0;
    for (std::size_t i = 0; i < m.rules.size(); ++i) {
        const auto& r = m.rules[i];
        bool closes = r.refined.delta[3] != 0;
        if (!closes) continue;
        if (r.inverse) {
            EXPECT_TRUE(endsWith(ex.ruleLines[i], "@ [exp] -(-1/2 * ('" + r.generator + "' + 't'))")) << ex.ruleLines[i];
            ++opening;
        } else {
            EXPECT_TRUE(endsWith(ex.ruleLines[i], "@ [exp] (-1/2 * ('" + r.generator + "' + 't'))")) << ex.ruleLines[i];
            ++closing;
        }
    }
    EXPECT_EQ(closing, 3);
    EXPECT_EQ(opening, 3);
    EXPECT_NE(ex.text.find("%agent: A(l,r)"), std::string::npos);
    EXPECT_NE(ex.text.find("%var: 't' -2.5"), std::string::npos);
    EXPECT_NE(ex.text.find("%init: 100 A(l, r)"), std::string::npos);
    EXPECT_NE(ex.text.find("# A(r), B(l) -> A(r!1), B(l!1) refines into:"), std::string::npos);
}

// The exported rate text, evaluated with the pattern costs bound to their
// names, is the rate the policy assigns.
TEST(Export, RatesEvaluateToPolicyRates) {
    for (const char* policy : {"symmetric", "metropolis", "symmetric C.ab=3"}) {
        CompileOptions opts;
        opts.policyOverride = policy;
        auto m = oracle::loadModel("triangles.model", opts);
        std::map<std::string, double> costs;
        for (std::size_t c = 0; c < m.energy.size(); ++c) costs[m.energy.names[c]] = m.energy.costs[c];
        auto rates = m.policy.logRates(m.rules, m.energy);
        for (std::size_t i = 0; i < m.rules.size(); ++i) {
            double k = parseExpr(m.graph, kasimRate(m, i)).eval(costs);
            EXPECT_NEAR(std::log(k), rates[i], 1e-12) << policy << " " << kasimRate(m, i);
        }
    }
}

TEST(Export, ZeroCostsStaySymbolic) {
    auto src = parseModel(oracle::readFile(oracle::modelPath("triangles.model")));
    for (auto& p : src.params) p.value = Expr::number(0);
    auto m = compileModel(src);
    auto ex = exportKasim(m);
    EXPECT_NE(ex.text.find("%var: 't' 0"), std::string::npos);
    for (std::size_t i = 0; i < m.rules.size(); ++i) EXPECT_NE(kasimRate(m, i).find("'" + m.rules[i].generator + "'"), std::string::npos);
}

TEST(Export, MetropolisForms) {
    CompileOptions opts;
    opts.policyOverride = "metropolis";
    auto m = oracle::loadModel("triangles.model", opts);
    for (std::size_t i = 0; i < m.rules.size(); ++i) {
        const auto& r = m.rules[i];
        if (r.inverse) EXPECT_EQ(kasimRate(m, i), "[exp] (0)");
        else if (r.refined.delta[3] != 0) EXPECT_EQ(kasimRate(m, i), "[exp] (-1 * ('" + r.generator + "' + 't'))");
        else EXPECT_EQ(kasimRate(m, i), "[exp] (-1 * '" + r.generator + "')");
    }
}

TEST(Export, NonlinearIsNotExportable) {
    CompileOptions opts;
    opts.policyOverride = "nonlinear quadratic.t=1";
    auto m = oracle::loadModel("triangles-small.model", opts);
    try {
        exportKasim(m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "EXPORT");
    }
}

// Re-reading the export (with the energy patterns declared over its %var
// names) and compiling it gives the same rules with the same balance vectors
// and rates.
TEST(Export, ReimportIsAFixedPoint) {
    for (const char* name : {"triangles.model", "ring.model"}) {
        auto m = oracle::loadModel(name);
        auto ex = exportKasim(m);
        std::string text = ex.text;
        for (std::size_t c = 0; c < m.energy.size(); ++c)
            text += "%energy: '" + m.energy.names[c] + "' " + formatPattern(m.energy.patterns[c]) + " @ '" +
                    m.energy.names[c] + "'\n";
        auto again = compileModel(parseModel(text));
        ASSERT_EQ(again.rules.size(), m.rules.size()) << name;
        auto r1 = m.policy.logRates(m.rules, m.energy);
        auto r2 = again.policy.logRates(again.rules, again.energy);
        for (std::size_t i = 0; i < m.rules.size(); ++i) {
            EXPECT_EQ(again.rules[i].refined.name, m.rules[i].refined.name);
            EXPECT_TRUE(oracle::bruteIsomorphic(again.rules[i].refined.rule.lhs(), m.rules[i].refined.rule.lhs()));
            EXPECT_EQ(again.rules[i].refined.delta, m.rules[i].refined.delta);
            EXPECT_NEAR(r2[i], r1[i], 1e-12);
        }
        auto lines = exportKasim(again).ruleLines;
        auto normal = [&](const std::string& line) {
            std::size_t at = line.find(" @ ");
            return line.substr(0, at) + parseExpr(m.graph, line.substr(at + 3)).print();
        };
        for (std::size_t i = 0; i < lines.size(); ++i) EXPECT_EQ(normal(lines[i]), normal(ex.ruleLines[i]));
        EXPECT_TRUE(checkCompat(again.rules, again.policy, again.energy).ok);
    }
}

TEST(Export, AppendixFixtureCompiles) {
    auto m = oracle::loadAppendix();
    EXPECT_TRUE(m.explicitRules);
    EXPECT_EQ(m.rules.size(), 30u);
    EXPECT_EQ(m.initial.agentCount(), 3000);
    EXPECT_TRUE(checkCompat(m.rules, m.policy, m.energy).ok);
}
