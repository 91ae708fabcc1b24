#include "support/oracles.hpp"

#include "thermograph/errors.hpp"
#include "thermograph/rules.hpp"

#include <gtest/gtest.h>

using namespace thermograph;

TEST(Rule, ModifiedSitesOfBind) {
    auto g = oracle::triangleGraph();
    Rule r("ab", parsePattern(g, "A(l, r), B(l, r)"), parsePattern(g, "A(l, r!1), B(l!1, r)"));
    ASSERT_EQ(r.modifiedSites().size(), 2u);
    for (int s : r.modifiedSites()) EXPECT_EQ(r.lhs().site(s).partner, kNone);
    EXPECT_EQ(r.componentCount(), 2);
}

TEST(Rule, RejectsSidesOverDifferentSites) {
    auto g = oracle::triangleGraph();
    EXPECT_THROW(Rule("x", parsePattern(g, "A(r), B(l)"), parsePattern(g, "A(r!1), B(l!1, r)")), InvalidArgument);
    EXPECT_THROW(Rule("x", parsePattern(g, "A(r)"), parsePattern(g, "B(l)")), InvalidArgument);
}

TEST(Rule, InvertedNames) {
    EXPECT_EQ(invertedName("ab"), "ab*");
    EXPECT_EQ(invertedName("ab*"), "ab");
    auto g = oracle::triangleGraph();
    Rule r("ab", parsePattern(g, "A(r), B(l)"), parsePattern(g, "A(r!1), B(l!1)"));
    Rule s = invert(r);
    EXPECT_EQ(s.name(), "ab*");
    EXPECT_EQ(s.lhs(), r.rhs());
    EXPECT_EQ(invert(s).lhs(), r.lhs());
}

TEST(Rule, ApplyThenInverseRestoresMixture) {
    auto g = oracle::triangleGraph();
    Rule r("ab", parsePattern(g, "A(r), B(l)"), parsePattern(g, "A(r!1), B(l!1)"));
    auto x = parsePattern(g, "A(l, r), B(l, r), A(l, r), B(l, r!1), C(l!1, r)");
    auto es = enumerateEmbeddings(r.lhs(), x);
    EXPECT_EQ(es.size(), 4u);
    EXPECT_EQ(oracle::bruteCount(r.lhs(), x), 4u);
    for (const auto& e : es) {
        auto y = applyRule(r, e, x);
        EXPECT_TRUE(isEmbedding(y.embedding, r.rhs(), y.mixture));
        auto back = applyRule(invert(r), y.embedding, y.mixture);
        EXPECT_EQ(back.mixture, x);
    }
}

TEST(Rule, ApplyRejectsNonMixtureAndForeignEmbedding) {
    auto g = oracle::triangleGraph();
    Rule r("ab", parsePattern(g, "A(r), B(l)"), parsePattern(g, "A(r!1), B(l!1)"));
    auto partial = parsePattern(g, "A(r), B(l)");
    EXPECT_THROW(applyRule(r, identityEmbedding(partial), partial), InvalidArgument);
    auto x = parsePattern(g, "A(l, r!1), B(l!1, r)");
    Embedding bogus{{0, 1}, {1, 2}};
    EXPECT_THROW(applyRule(r, bogus, x), InvalidArgument);
}

TEST(Extension, EpiAndPrefix) {
    auto g = oracle::triangleGraph();
    auto lhs = parsePattern(g, "A(r), B(l)");
    auto t = parsePattern(g, "A(l, r), B(l, r), C(l, r)");
    Embedding phi{{0, 1}, {1, 2}};
    EXPECT_FALSE(isEpi(phi, t));
    EXPECT_FALSE(isPrefixOfEpi(phi, t));
    auto t2 = parsePattern(g, "A(r), B(l), C()");
    Embedding phi2{{0, 1}, {0, 1}};
    EXPECT_FALSE(isEpi(phi2, t2));
    EXPECT_TRUE(isPrefixOfEpi(phi2, t2));
    EXPECT_TRUE(isEpi(identityEmbedding(lhs), lhs));
}

TEST(Extension, MirrorReplaysDelta) {
    auto g = oracle::triangleGraph();
    Rule r("ab", parsePattern(g, "A(r), B(l)"), parsePattern(g, "A(r!1), B(l!1)"));
    auto t = parsePattern(g, "A(l, r), B(l, r!1), C(l!1)");
    auto phis = enumerateEmbeddings(r.lhs(), t);
    ASSERT_EQ(phis.size(), 1u);
    auto ext = mirrorExtension(r, phis[0], t);
    EXPECT_TRUE(isomorphic(ext.tStar, parsePattern(g, "A(l, r!2), B(l!2, r!1), C(l!1)")));
    EXPECT_TRUE(isEmbedding(ext.phiStar(), r.rhs(), ext.tStar));
    EXPECT_THROW(mirrorExtension(r, phis[0], parsePattern(g, "A(l, r), B(l, r), C(l, r)")), InvalidArgument);
}
