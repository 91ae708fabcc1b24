#include "support/oracles.hpp"

#include "thermograph/errors.hpp"
#include "thermograph/model_file.hpp"

#include <gtest/gtest.h>

using namespace thermograph;

namespace {

struct Diagnostic {
    std::string code;
    int line = 0, column = 0;
};

Diagnostic diagnose(const std::string& text, bool compile = false) {
    try {
        auto m = parseModel(text);
        if (compile) compileModel(m);
    } catch (const ParseError& e) {
        return {e.code(), e.line(), e.column()};
    }
    return {"none"};
}

const std::string kHeader = "%agent: A(l, r, f~0~1)\n%agent: B(l, r)\n%bond: A.r B.l\n";

// A random model that is valid by construction.
std::string randomModel(std::mt19937_64& rng) {
    auto coin = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    int agents = 1 + coin(3);
    std::vector<std::vector<std::pair<std::string, int>>> sites(agents);  // name, state count
    std::string out;
    for (int a = 0; a < agents; ++a) {
        out += "%agent: T" + std::to_string(a) + "(";
        int n = 1 + coin(3);
        for (int s = 0; s < n; ++s) {
            int states = coin(3) == 0 ? 2 + coin(2) : 0;
            sites[a].push_back({"s" + std::to_string(s), states});
            if (s) out += ", ";
            out += "s" + std::to_string(s);
            for (int k = 0; k < states; ++k) out += "~v" + std::to_string(k);
        }
        out += ")\n";
    }
    struct Bond {
        int a, sa, b, sb;
    };
    std::vector<Bond> bonds;
    for (int i = 0; i < 1 + coin(3); ++i) {
        int a = coin(agents), b = coin(agents);
        int sa = coin(static_cast<int>(sites[a].size())), sb = coin(static_cast<int>(sites[b].size()));
        bonds.push_back({a, sa, b, sb});
    }
    bool explicitBonds = coin(3) != 0;
    auto siteName = [&](int a, int s) { return "T" + std::to_string(a) + "." + sites[a][s].first; };
    if (explicitBonds)
        for (auto& b : bonds) out += "%bond: " + siteName(b.a, b.sa) + " " + siteName(b.b, b.sb) + "\n";
    auto bondPattern = [&](const Bond& b, const std::string& label) {
        return "T" + std::to_string(b.a) + "(" + sites[b.a][b.sa].first + "!" + label + "), T" + std::to_string(b.b) +
               "(" + sites[b.b][b.sb].first + "!" + label + ")";
    };
    int params = coin(3);
    for (int p = 0; p < params; ++p) out += "%param: 'p" + std::to_string(p) + "' " + std::to_string(coin(7) - 3) + ".25\n";
    auto cost = [&]() { return params && coin(2) ? "'p" + std::to_string(coin(params)) + "' * 2" : std::to_string(coin(5) - 2); };
    int energies = 0;
    for (std::size_t i = 0; i < bonds.size(); ++i)
        if (coin(2) || !explicitBonds) out += "%energy: 'e" + std::to_string(energies++) + "' " + bondPattern(bonds[i], "1") + " @ " + cost() + "\n";
    for (int a = 0; a < agents; ++a)
        for (auto& [name, states] : sites[a])
            if (states && coin(2))
                out += "%energy: 'e" + std::to_string(energies++) + "' T" + std::to_string(a) + "(" + name + "~v1) @ " + cost() + "\n";
    int gens = 0;
    if (coin(4) != 0) {
        const Bond& b = bonds[0];
        std::string l = "T" + std::to_string(b.a) + "(" + sites[b.a][b.sa].first + "), T" + std::to_string(b.b) + "(" +
                        sites[b.b][b.sb].first + ")";
        out += "%gen: 'g" + std::to_string(gens++) + "' " + l + " <-> " + bondPattern(b, "1") + "\n";
    }
    for (int a = 0; a < agents; ++a)
        for (auto& [name, states] : sites[a])
            if (states && coin(2))
                out += "%gen: 'g" + std::to_string(gens++) + "' T" + std::to_string(a) + "(" + name + "~v0) <-> T" +
                       std::to_string(a) + "(" + name + "~v1)\n";
    static const char* policies[] = {"", "%policy: metropolis\n", "%policy: symmetric\n"};
    out += policies[coin(3)];
    for (int a = 0; a < agents; ++a) out += "%init: " + std::to_string(1 + coin(5)) + " T" + std::to_string(a) + "()\n";
    if (coin(2)) out += "%obs: 'o' |T0()| + 1\n";
    return out;
}

}  // namespace

TEST(ModelFile, EveryDiagnosticCode) {
    EXPECT_EQ(diagnose("").code, "E001");
    EXPECT_EQ(diagnose("# only a comment\n").code, "E001");
    EXPECT_EQ(diagnose(kHeader + "%init: 1 C()\n").code, "E002");
    EXPECT_EQ(diagnose(kHeader + "%init: 1 A(q)\n").code, "E003");
    EXPECT_EQ(diagnose(kHeader + "%energy: 'x' A(l!1), B(r!1) @ 1\n").code, "E003");
    EXPECT_EQ(diagnose(kHeader + "%init: 1 A(f~2)\n").code, "E004");
    EXPECT_EQ(diagnose(kHeader + "%gen: 'g' A(f~0) -> A(f~1)\n").code, "E005");
    EXPECT_EQ(diagnose(kHeader + "%gen: 'g' A(f~0) <-> B(l)\n").code, "E005");
    EXPECT_EQ(diagnose(kHeader + "%energy: 'x' A(), B() @ 1\n").code, "E006");
    EXPECT_EQ(diagnose(kHeader + "%energy: 'x' A(f~1) @ 'missing'\n").code, "E007");
    EXPECT_EQ(diagnose(kHeader + "%param: 'a' 'b'\n%param: 'b' 1\n").code, "E007");
    EXPECT_EQ(diagnose(kHeader + "%init: A()\n").code, "E008");
    EXPECT_EQ(diagnose(kHeader + "%bogus: 1\n").code, "E008");
    EXPECT_EQ(diagnose(kHeader + "%gen: 'g' A(f~0) <-> A(f~1)\n%policy: sideways\n").code, "E009");
    EXPECT_EQ(diagnose(kHeader + "%gen: 'g' A(f~0) <-> A(f~1)\n%policy: symmetric C.h=2\n").code, "E009");
    EXPECT_EQ(diagnose(kHeader + "%gen: 'g' A(f~0) <-> A(f~1)\n%policy: symmetric C.g=-1\n").code, "E009");
    EXPECT_EQ(diagnose(kHeader + "%energy: 'x' A(f~1, r!1), B(l!1) @ 1\n'r' A(r), B(l) <-> A(r!1), B(l!1) @ 1, 1\n", true).code, "E010");
    EXPECT_EQ(diagnose(kHeader + "'r' A(f~0) -> A(f~1) @ 1\n", true).code, "E005");
    EXPECT_EQ(diagnose(kHeader + "%gen: 'g' A(f~0) <-> A(f~1)\n'r' A(f~0) <-> A(f~1) @ 1, 1\n", true).code, "E008");
}

TEST(ModelFile, DiagnosticsCarryPositions) {
    auto d = diagnose(kHeader + "\n%init: 1 A(l), C()\n");
    EXPECT_EQ(d.code, "E002");
    EXPECT_EQ(d.line, 5);
    EXPECT_EQ(d.column, 16);
    auto e = diagnose("%agent: A(x)\n%init: 1 \\\n  A(y)\n");
    EXPECT_EQ(e.code, "E003");
    EXPECT_EQ(e.line, 3);
    EXPECT_EQ(e.column, 5);
    EXPECT_EQ(diagnose("").line, 1);
}

TEST(ModelFile, InfersBondsWithoutBondLines) {
    auto m = parseModel("%agent: A(l, r)\n%agent: B(l, r)\n%energy: 'ab' A(r!1), B(l!1) @ -1\n");
    EXPECT_TRUE(m.inferredBonds);
    ASSERT_EQ(m.bonds.size(), 1u);
    EXPECT_EQ(diagnose("%agent: A(l, r)\n%agent: B(l, r)\n%bond: A.r B.l\n%init: 1 A(l!1), B(r!1)\n").code, "E003");
}

TEST(ModelFile, CommentsAndContinuations) {
    auto m = parseModel("%agent: A(l, r) # trailing\n%agent: B(l, \\\n r)\n%obs: 'n#1' |A()| # count\n");
    ASSERT_EQ(m.agents.size(), 2u);
    EXPECT_EQ(m.agents[1].sites.size(), 2u);
    ASSERT_EQ(m.observables.size(), 1u);
    EXPECT_EQ(m.observables[0].name, "n#1");
}

TEST(ModelFile, BundledModelsRoundTrip) {
    for (const char* name : {"triangles.model", "triangles-small.model", "ring.model"}) {
        auto m = parseModel(oracle::readFile(oracle::modelPath(name)));
        auto back = parseModel(m.print());
        EXPECT_TRUE(back == m) << name;
        EXPECT_EQ(back.print(), m.print());
    }
    auto ka = parseModel(oracle::readFile(oracle::fixturePath("appendix_a.ka")));
    EXPECT_EQ(ka.rules.size(), 30u);
    EXPECT_TRUE(parseModel(ka.print()) == ka);
}

TEST(ModelFile, GeneratedModelsRoundTrip) {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        std::string text = randomModel(rng);
        ModelFile m;
        ASSERT_NO_THROW(m = parseModel(text)) << text;
        auto back = parseModel(m.print());
        EXPECT_TRUE(back == m) << text << "\n---\n" << m.print();
    }
}

TEST(ModelFile, MutationFuzzNeverCrashes) {
    std::vector<std::string> seeds;
    for (const char* name : {"triangles.model", "ring.model"}) seeds.push_back(oracle::readFile(oracle::modelPath(name)));
    seeds.push_back(oracle::readFile(oracle::fixturePath("appendix_a.ka")));
    const std::string alphabet = "%!~@|'()<->.,#\\ \n0123456789ABPYlrxyfs*/-+e[]";
    std::mt19937_64 rng(99);
    int rejected = 0;
    for (int i = 0; i < 3000; ++i) {
        std::string text = seeds[rng() % seeds.size()];
        int edits = 1 + static_cast<int>(rng() % 4);
        for (int k = 0; k < edits; ++k) {
            std::size_t at = rng() % (text.size() + 1);
            switch (rng() % 3) {
                case 0: if (at < text.size()) text.erase(at, 1 + rng() % 3); break;
                case 1: text.insert(at, 1, alphabet[rng() % alphabet.size()]); break;
                default: if (at < text.size()) text[at] = alphabet[rng() % alphabet.size()]; break;
            }
        }
        try {
            auto m = parseModel(text);
            EXPECT_TRUE(parseModel(m.print()) == m);
        } catch (const ParseError& e) {
            ++rejected;
            EXPECT_FALSE(e.code().empty());
            EXPECT_GE(e.line(), 1);
        } catch (const std::exception& e) {
            ADD_FAILURE() << "unexpected " << e.what() << "\n" << text;
        }
    }
    EXPECT_GT(rejected, 100);
}

TEST(ModelFile, CompileInitialMixture) {
    auto m = oracle::loadModel("ring.model");
    EXPECT_TRUE(isMixture(m.initial));
    EXPECT_EQ(m.initial.agentCount(), 16);
    EXPECT_EQ(countEmbeddings(parsePattern(m.graph, "P(f~0)"), m.initial), 8u);
    EXPECT_EQ(countEmbeddings(parsePattern(m.graph, "Y(s~u)"), m.initial), 8u);
    ASSERT_EQ(m.observables.size(), 3u);
    EXPECT_EQ(m.observables[0].eval(m.initial), 0.0);
    EXPECT_EQ(m.observables[1].eval(m.initial), 0.0);
}
