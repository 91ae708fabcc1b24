#include "support/oracles.hpp"

#include "thermograph/errors.hpp"
#include "thermograph/refine.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace thermograph;

namespace {

struct Triangle {
    explicit Triangle(ContactGraphPtr graph = oracle::triangleGraph()) : g(std::move(graph)) {}
    ContactGraphPtr g;
    std::vector<ContactMap> patterns{
        parsePattern(g, "A(r!1), B(l!1)"), parsePattern(g, "B(r!1), C(l!1)"), parsePattern(g, "C(r!1), A(l!1)"),
        parsePattern(g, "A(r!1, l!3), B(l!1, r!2), C(l!2, r!3)")};
    Rule ab{"ab", parsePattern(g, "A(r), B(l)"), parsePattern(g, "A(r!1), B(l!1)")};
};

// Brute-force pattern counts.
std::vector<long> bruteCounts(const ContactMap& x, const std::vector<ContactMap>& patterns) {
    std::vector<long> n;
    for (const auto& p : patterns) n.push_back(static_cast<long>(oracle::bruteOccurrences(p, x)));
    return n;
}

}  // namespace

TEST(Refine, TriangleBindHasEightMatureMembers) {
    Triangle T;
    auto ref = enumerateMature(T.ab, T.patterns);
    ASSERT_EQ(ref.size(), 8u);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        EXPECT_EQ(ref[i].name, "ab#" + std::to_string(i + 1));
        for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(oracle::bruteIsomorphic(ref[i].ext.t, ref[j].ext.t));
        auto req = computeRequests(T.ab, ref[i].ext.phi, ref[i].ext.t, T.patterns);
        EXPECT_EQ(classify(ref[i].ext.phi, ref[i].ext.t, req).kind, Maturity::Mature);
        EXPECT_TRUE(isBalanced(ref[i].ext.t, ref[i].rule.modifiedSites(), T.patterns));
        EXPECT_TRUE(isBalanced(ref[i].ext.tStar, ref[i].rule.modifiedSites(), T.patterns));
        EXPECT_TRUE(isEpi(ref[i].ext.phi, ref[i].ext.t));
    }
}

TEST(Refine, TriangleBalanceVectorsFromBruteCounts) {
    Triangle T;
    for (const auto& m : enumerateMature(T.ab, T.patterns)) {
        auto before = bruteCounts(m.ext.t, T.patterns);
        auto after = bruteCounts(m.ext.tStar, T.patterns);
        // the codomains may carry dangling sites, so only the difference is meaningful
        std::vector<long> d(before.size());
        for (std::size_t c = 0; c < d.size(); ++c) d[c] = after[c] - before[c];
        EXPECT_EQ(m.delta, d) << m.name;
    }
}

TEST(Refine, UnbalancedWithoutDanglingResolution) {
    Triangle T;
    RefineOptions opts;
    opts.resolveDangling = false;
    EXPECT_THROW(enumerateMature(T.ab, T.patterns, opts), Error);
}

TEST(Refine, ExtensionCapRaises) {
    Triangle T;
    RefineOptions opts;
    opts.maxExtensions = 2;
    EXPECT_THROW(enumerateMature(T.ab, T.patterns, opts), Error);
}

TEST(Refine, NoPatternsGivesTheGeneratorItself) {
    Triangle T;
    auto ref = enumerateMature(T.ab, {});
    ASSERT_EQ(ref.size(), 1u);
    EXPECT_TRUE(oracle::bruteIsomorphic(ref[0].ext.t, T.ab.lhs()));
    EXPECT_TRUE(ref[0].delta.empty());
}

TEST(Refine, MirrorSwapsSides) {
    Triangle T;
    auto ref = enumerateMature(T.ab, T.patterns);
    auto mir = mirrorRefinement(T.ab, ref);
    ASSERT_EQ(mir.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        EXPECT_EQ(mir[i].name, "ab*#" + std::to_string(i + 1));
        EXPECT_EQ(mir[i].rule.lhs(), ref[i].rule.rhs());
        for (std::size_t c = 0; c < ref[i].delta.size(); ++c) EXPECT_EQ(mir[i].delta[c], -ref[i].delta[c]);
    }
}

TEST(Refine, RandomApplicationsFactorUniquelyAndKeepBalance) {
    auto m = oracle::loadModel("triangles-small.model");
    Triangle T(m.graph);
    auto ref = enumerateMature(T.ab, T.patterns);
    std::mt19937_64 rng(17);
    auto base = parsePattern(T.g, "A(l, r), B(l, r), C(l, r), A(l, r), B(l, r), C(l, r)");
    for (int trial = 0; trial < 30; ++trial) {
        auto x = oracle::randomWalk(m.rules, base, trial % 7, rng);
        for (const auto& psi : enumerateEmbeddings(T.ab.lhs(), x)) {
            EXPECT_EQ(countFactorizations(psi, x, ref), 1u);
            auto f = uniqueFactor(T.ab, psi, x, ref);
            const auto& member = ref[f.index];
            EXPECT_TRUE(isEmbedding(f.residual, member.ext.t, x));
            auto before = bruteCounts(x, T.patterns);
            auto y = applyRule(member.rule, f.residual, x).mixture;
            auto after = bruteCounts(y, T.patterns);
            for (std::size_t c = 0; c < before.size(); ++c) EXPECT_EQ(after[c] - before[c], member.delta[c]);
        }
    }
}

TEST(Refine, RingBindSplitsByConformation) {
    auto m = oracle::loadModel("ring.model");
    auto b = m.membersOf("b");
    ASSERT_EQ(b.size(), 2u);
    std::set<std::vector<long>> deltas;
    for (auto i : b) deltas.insert(m.rules[i].refined.delta);
    // PP00 PP01 PP10 PP11 P0 P1 PY0 PY1
    EXPECT_EQ(deltas, (std::set<std::vector<long>>{{0, 0, 0, 0, 0, 0, 1, 0}, {0, 0, 0, 0, 0, 0, 0, 1}}));
}

TEST(Refine, UniqueFactorThrowsWithoutMembers) {
    Triangle T;
    auto x = parsePattern(T.g, "A(l, r), B(l, r), C(l, r)");
    auto psi = enumerateEmbeddings(T.ab.lhs(), x);
    ASSERT_EQ(psi.size(), 1u);
    EXPECT_THROW(uniqueFactor(T.ab, psi[0], x, {}), InvariantViolation);
}

// Divalent chains closing into a 3-ring: only the closing step changes the
// triangle count, by exactly one copy.
TEST(Refine, ChainsClosingStepMakesOneTriangle) {
    auto m = oracle::loadModel("chains.model");
    auto g = m.membersOf("g");
    ASSERT_FALSE(g.empty());
    int closing = 0;
    for (auto i : g) {
        const auto& r = m.rules[i].refined;
        long brute = bruteCounts(r.rule.rhs(), m.energy.patterns)[0] - bruteCounts(r.rule.lhs(), m.energy.patterns)[0];
        EXPECT_EQ(r.delta, BalanceVector{brute}) << r.name;
        if (r.delta == BalanceVector{1}) {
            ++closing;
            EXPECT_TRUE(oracle::bruteIsomorphic(r.ext.t, parsePattern(m.graph, "X(a, b!1), X(a!1, b!2), X(a!2, b)")));
        } else {
            EXPECT_EQ(r.delta, BalanceVector{0});
        }
    }
    EXPECT_EQ(closing, 1);
    EXPECT_EQ(balanceRank(m.rules), 1);
    EXPECT_TRUE(checkCompat(m.rules, m.policy, m.energy).ok);
}
