#pragma once

// Brute-force reference implementations for the tests. None of these call
// into the matcher, the canonical forms or the rank routine they check.

#include "thermograph/compile.hpp"
#include "thermograph/notation.hpp"
#include "thermograph/sitegraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

using namespace thermograph;

inline std::string readFile(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string modelPath(const std::string& name) { return std::string(THERMOGRAPH_MODELS_DIR) + "/" + name; }
inline std::string fixturePath(const std::string& name) { return std::string(THERMOGRAPH_FIXTURES_DIR) + "/" + name; }

inline CompiledModel loadModel(const std::string& name, const CompileOptions& opts = {}) {
    return compileModel(parseModel(readFile(modelPath(name))), opts);
}

/// The appendix listing with the triangle energy patterns declared over its
/// %var names, so that balance vectors are defined.
inline CompiledModel loadAppendix() {
    std::string text = readFile(fixturePath("appendix_a.ka"));
    text += "%energy: 'ab' A(r!1), B(l!1) @ 'ab'\n"
            "%energy: 'bc' B(r!1), C(l!1) @ 'bc'\n"
            "%energy: 'ca' C(r!1), A(l!1) @ 'ca'\n"
            "%energy: 't' A(l!3, r!1), B(l!1, r!2), C(l!2, r!3) @ 't'\n";
    return compileModel(parseModel(text));
}

/// A(l,r), B(l,r), C(l,r) with A.r-B.l, B.r-C.l, C.r-A.l.
inline ContactGraphPtr triangleGraph() {
    auto c = std::make_shared<ContactGraph>();
    int a = c->addAgentType("A"), b = c->addAgentType("B"), cc = c->addAgentType("C");
    int al = c->addSiteType(a, "l"), ar = c->addSiteType(a, "r");
    int bl = c->addSiteType(b, "l"), br = c->addSiteType(b, "r");
    int cl = c->addSiteType(cc, "l"), cr = c->addSiteType(cc, "r");
    c->addEdgeType(ar, bl);
    c->addEdgeType(br, cl);
    c->addEdgeType(cr, al);
    return c;
}

/// Site image forced by an agent map, or kNone when it does not exist.
inline int siteImage(const ContactMap& from, const ContactMap& to, const std::vector<int>& agents, int s) {
    const Site& site = from.site(s);
    if (site.owner != kNone) return to.siteAt(agents[site.owner], from.slotOf(s));
    const Site& anchor = from.site(site.partner);
    int img = to.siteAt(agents[anchor.owner], from.slotOf(site.partner));
    if (img == kNone) return kNone;
    int p = to.site(img).partner;
    if (p == kNone || to.site(p).type != site.type) return kNone;
    return p;
}

/// Site map of an agent map that is an embedding, or empty.
inline std::vector<int> checkAgentMap(const ContactMap& from, const ContactMap& to, const std::vector<int>& agents) {
    std::vector<int> sites(static_cast<std::size_t>(from.siteCount()), kNone);
    for (int s = 0; s < from.siteCount(); ++s) {
        int img = siteImage(from, to, agents, s);
        if (img == kNone) return {};
        sites[s] = img;
    }
    std::vector<int> sorted = sites;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return {};
    for (int s = 0; s < from.siteCount(); ++s) {
        const Site& a = from.site(s);
        const Site& b = to.site(sites[s]);
        if (a.type != b.type) return {};
        if (a.state != kNone && a.state != b.state) return {};
        if (a.owner != kNone && b.owner != agents[a.owner]) return {};
        if (a.partner == kNone) {
            if (b.partner != kNone) return {};
        } else if (b.partner != sites[a.partner]) {
            return {};
        }
    }
    return sites;
}

/// Calls `visit(agentMap, siteMap)` for every embedding, by trying every
/// injective type-preserving agent map.
template <class Visit>
void bruteEmbeddings(const ContactMap& from, const ContactMap& to, Visit visit) {
    std::vector<int> agents(static_cast<std::size_t>(from.agentCount()), kNone);
    std::vector<char> used(static_cast<std::size_t>(to.agentCount()), 0);
    auto rec = [&](auto&& self, int u) -> void {
        if (u == from.agentCount()) {
            auto sites = checkAgentMap(from, to, agents);
            if (!sites.empty() || from.siteCount() == 0) visit(agents, sites);
            return;
        }
        for (int v = 0; v < to.agentCount(); ++v) {
            if (used[v] || to.agent(v).type != from.agent(u).type) continue;
            used[v] = 1;
            agents[u] = v;
            self(self, u + 1);
            used[v] = 0;
        }
    };
    rec(rec, 0);
}

inline std::size_t bruteCount(const ContactMap& from, const ContactMap& to) {
    std::size_t n = 0;
    bruteEmbeddings(from, to, [&](const auto&, const auto&) { ++n; });
    return n;
}

/// Copies of `from` in `to`: embeddings divided by automorphisms.
inline std::size_t bruteOccurrences(const ContactMap& from, const ContactMap& to) {
    return bruteCount(from, to) / bruteCount(from, from);
}

/// Isomorphism by brute force: an agent bijection whose forced site map is a
/// bijection preserving edges, owners and states exactly.
inline bool bruteIsomorphic(const ContactMap& a, const ContactMap& b) {
    if (a.agentCount() != b.agentCount() || a.siteCount() != b.siteCount()) return false;
    bool found = false;
    bruteEmbeddings(a, b, [&](const auto&, const std::vector<int>& sites) {
        if (found) return;
        for (int s = 0; s < a.siteCount(); ++s) {
            const Site& x = a.site(s);
            const Site& y = b.site(sites[s]);
            if (x.state != y.state || (x.owner == kNone) != (y.owner == kNone)) return;
        }
        found = true;
    });
    return found;
}

/// Copy of `h` with agents permuted by `perm` (new id of agent u is perm[u])
/// and sites reinserted in a shuffled order.
inline ContactMap relabel(const ContactMap& h, const std::vector<int>& perm, std::mt19937_64& rng) {
    ContactMap out(h.graphPtr());
    std::vector<int> inverse(perm.size());
    for (std::size_t u = 0; u < perm.size(); ++u) inverse[perm[u]] = static_cast<int>(u);
    for (int v : inverse) out.addAgent(h.agent(v).type);
    std::vector<int> order(static_cast<std::size_t>(h.siteCount()));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> map(order.size(), kNone);
    for (int s : order) {
        const Site& site = h.site(s);
        map[s] = site.owner == kNone ? out.addDangling(site.type, site.state)
                                     : out.addSite(perm[site.owner], site.type, site.state);
    }
    for (int s = 0; s < h.siteCount(); ++s) {
        int p = h.site(s).partner;
        if (p != kNone && s < p) out.bind(map[s], map[p]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Triangle systems

struct TriangleCosts {
    double ab = 0, bc = 0, ca = 0, t = 0;
};

/// Bond pattern of a mixture of A, B, C agents: bonds[k] lists, for each
/// agent of the left type of bond kind k (ab, bc, ca), the index among
/// agents of the right type it is bound to, or -1.
struct TriangleState {
    std::vector<std::vector<int>> bonds;
    bool operator<(const TriangleState& o) const { return bonds < o.bonds; }
    bool operator==(const TriangleState& o) const = default;
};

inline TriangleState triangleState(const ContactMap& x) {
    const ContactGraph& c = x.graph();
    int types[3] = {*c.findAgentType("A"), *c.findAgentType("B"), *c.findAgentType("C")};
    std::vector<std::vector<int>> byType(3);
    std::vector<int> rank(static_cast<std::size_t>(x.agentCount()));
    for (int u = 0; u < x.agentCount(); ++u)
        for (int k = 0; k < 3; ++k)
            if (x.agent(u).type == types[k]) {
                rank[u] = static_cast<int>(byType[k].size());
                byType[k].push_back(u);
            }
    TriangleState st;
    for (int k = 0; k < 3; ++k) {
        int slot = c.siteType(*c.findSiteType(types[k], "r")).slot;
        std::vector<int> row;
        for (int u : byType[k]) {
            int p = x.site(x.siteAt(u, slot)).partner;
            row.push_back(p == kNone ? -1 : rank[x.site(p).owner]);
        }
        st.bonds.push_back(row);
    }
    return st;
}

inline double triangleEnergy(const TriangleState& st, const TriangleCosts& e) {
    double cost[3] = {e.ab, e.bc, e.ca};
    double E = 0;
    for (int k = 0; k < 3; ++k)
        for (int p : st.bonds[k]) E += p >= 0 ? cost[k] : 0;
    for (std::size_t a = 0; a < st.bonds[0].size(); ++a) {
        int b = st.bonds[0][a];
        if (b < 0) continue;
        int c = st.bonds[1][b];
        if (c < 0) continue;
        if (st.bonds[2][c] == static_cast<int>(a)) E += e.t;
    }
    return E;
}

inline long triangleCount(const TriangleState& st) {
    long n = 0;
    for (std::size_t a = 0; a < st.bonds[0].size(); ++a) {
        int b = st.bonds[0][a];
        if (b >= 0 && st.bonds[1][b] >= 0 && st.bonds[2][st.bonds[1][b]] == static_cast<int>(a)) ++n;
    }
    return n;
}

/// Every partial matching of n left agents into n right agents.
inline std::vector<std::vector<int>> partialMatchings(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> m(static_cast<std::size_t>(n), -1);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            out.push_back(m);
            return;
        }
        m[i] = -1;
        self(self, i + 1);
        for (int j = 0; j < n; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            m[i] = j;
            self(self, i + 1);
            used[j] = 0;
        }
        m[i] = -1;
    };
    rec(rec, 0);
    return out;
}

/// Boltzmann distribution over all bond patterns of n agents per type.
inline std::map<TriangleState, double> triangleBoltzmann(int n, const TriangleCosts& e) {
    auto ms = partialMatchings(n);
    std::map<TriangleState, double> pi;
    double z = 0;
    for (const auto& x : ms)
        for (const auto& y : ms)
            for (const auto& w : ms) {
                TriangleState st{{x, y, w}};
                double p = std::exp(-triangleEnergy(st, e));
                pi[st] = p;
                z += p;
            }
    for (auto& [st, p] : pi) p /= z;
    return pi;
}

// ---------------------------------------------------------------------------
// Rank over GF(p), maximised over a few primes.

inline int modRank(std::vector<std::vector<long>> rows, std::int64_t p) {
    auto mod = [p](std::int64_t v) { return ((v % p) + p) % p; };
    auto power = [&](std::int64_t b, std::int64_t e) {
        std::int64_t r = 1;
        b = mod(b);
        while (e) {
            if (e & 1) r = static_cast<std::int64_t>((__int128)r * b % p);
            b = static_cast<std::int64_t>((__int128)b * b % p);
            e >>= 1;
        }
        return r;
    };
    std::vector<std::vector<std::int64_t>> m;
    for (auto& r : rows) {
        std::vector<std::int64_t> v;
        for (long x : r) v.push_back(mod(x));
        m.push_back(v);
    }
    if (m.empty()) return 0;
    std::size_t cols = m[0].size();
    int rank = 0;
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
        std::size_t piv = static_cast<std::size_t>(rank);
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rank]);
        std::int64_t inv = power(m[rank][c], p - 2);
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == static_cast<std::size_t>(rank) || m[r][c] == 0) continue;
            std::int64_t f = static_cast<std::int64_t>((__int128)m[r][c] * inv % p);
            for (std::size_t k = 0; k < cols; ++k)
                m[r][k] = mod(m[r][k] - static_cast<std::int64_t>((__int128)f * m[rank][k] % p));
        }
        ++rank;
    }
    return rank;
}

inline int oracleRank(const std::vector<std::vector<long>>& rows) {
    int r = 0;
    for (std::int64_t p : {1000000007LL, 998244353LL, 2147483647LL}) r = std::max(r, modRank(rows, p));
    return r;
}

// ---------------------------------------------------------------------------
// Random reachable mixtures

/// Fires `steps` uniformly chosen events (rule, embedding) from `x`.
inline ContactMap randomWalk(const RuleSet& rules, ContactMap x, int steps, std::mt19937_64& rng) {
    for (int i = 0; i < steps; ++i) {
        std::vector<std::pair<std::size_t, Embedding>> events;
        for (std::size_t r = 0; r < rules.size(); ++r)
            for (auto& e : enumerateEmbeddings(rules[r].refined.rule.lhs(), x)) events.emplace_back(r, e);
        if (events.empty()) break;
        auto& [r, e] = events[std::uniform_int_distribution<std::size_t>(0, events.size() - 1)(rng)];
        x = applyRule(rules[r].refined.rule, e, x).mixture;
    }
    return x;
}

}  // namespace oracle
