#pragma once

#include "support/oracles.hpp"

#include <chrono>
#include <string>

namespace acceptance {

using namespace thermograph;

struct Result {
    bool pass = false;
    std::string detail;
};

Result criterion1();
Result criterion2();
Result criterion3();
Result criterion4();
Result criterion5();
Result criterion6();
Result criterion7();
Result criterion8();
Result criterion9();
Result criterion10();

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Every agent gets all of its sites (free, first state), and every dangling
/// site becomes a fresh agent of the owning type.
inline ContactMap completeMixture(const ContactMap& t) {
    ContactMap x = t;
    const ContactGraph& c = x.graph();
    for (int s = 0; s < x.siteCount(); ++s)
        if (x.isDangling(s)) {
            int type = c.siteType(x.site(s).type).owner;
            x.adopt(s, x.addAgent(type));
        }
    for (int u = 0; u < x.agentCount(); ++u) {
        const auto& sites = c.agentType(x.agent(u).type).sites;
        for (std::size_t slot = 0; slot < sites.size(); ++slot) {
            int s = x.siteAt(u, static_cast<int>(slot));
            if (s == kNone) s = x.addSite(u, sites[slot]);
            if (c.hasStates(sites[slot]) && x.site(s).state == kNone) x.setState(s, 0);
        }
    }
    return x;
}

inline ContactMap disjointUnion(const ContactMap& a, const ContactMap& b) {
    ContactMap x = a;
    std::vector<int> agents, sites(static_cast<std::size_t>(b.siteCount()), kNone);
    for (int u = 0; u < b.agentCount(); ++u) agents.push_back(x.addAgent(b.agent(u).type));
    for (int s = 0; s < b.siteCount(); ++s) {
        const Site& site = b.site(s);
        sites[s] = site.owner == kNone ? x.addDangling(site.type, site.state)
                                       : x.addSite(agents[site.owner], site.type, site.state);
    }
    for (int s = 0; s < b.siteCount(); ++s) {
        int p = b.site(s).partner;
        if (p != kNone && s < p) x.bind(sites[s], sites[p]);
    }
    return x;
}

/// Refined members of generator `g` (forward) or of its inverse.
inline std::vector<RefinedRule> members(const CompiledModel& m, const std::string& g, bool inverse) {
    std::vector<RefinedRule> out;
    for (const auto& r : m.rules)
        if (r.generator == g && r.inverse == inverse) out.push_back(r.refined);
    return out;
}

/// Ring mixtures with rings of size 1 to 4, open chains, isolated P and
/// active Y, mixed by random events.
inline std::vector<ContactMap> ringPool(const CompiledModel& m, int size, std::mt19937_64& rng) {
    ContactMap base = parsePattern(m.graph,
        "P(x!1, y!1), P(x!2, y!3), P(x!3, y!2), P(x!4, y!5), P(x!5, y!6), P(x!6, y!4), "
        "P(x!7, y!8), P(x!8, y!9), P(x!9, y!10), P(x!10, y!7), P(x, y!11), P(x!11, y!12), P(x!12, y), P(x, y), "
        "Y(s~p), Y(s~p), Y(s~p), Y(s~u)");
    base = completeMixture(base);
    std::vector<ContactMap> pool;
    for (int i = 0; i < size; ++i) pool.push_back(oracle::randomWalk(m.rules, base, 2 + i % 12, rng));
    return pool;
}

inline std::vector<ContactMap> trianglePool(const CompiledModel& m, int size, std::mt19937_64& rng) {
    ContactMap base = parsePattern(m.graph, "A(l, r), B(l, r), C(l, r), A(l, r), B(l, r), C(l, r), "
                                            "A(l, r), B(l, r), C(l, r)");
    std::vector<ContactMap> pool;
    for (int i = 0; i < size; ++i) pool.push_back(oracle::randomWalk(m.rules, base, i % 15, rng));
    return pool;
}

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace acceptance
