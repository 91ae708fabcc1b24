#include "thermograph/gluing.hpp"

#include "thermograph/errors.hpp"

#include <algorithm>

namespace thermograph {

Span pullback(const ContactMap& a, const ContactMap& b, const Embedding& fa, const Embedding& fb) {
    Span span{ContactMap(a.graphPtr()), {}, {}};
    // Preimages in b, indexed by the common codomain.
    int hAgents = 0, hSites = 0;
    for (int v : fa.agents) hAgents = std::max(hAgents, v + 1);
    for (int v : fb.agents) hAgents = std::max(hAgents, v + 1);
    for (int v : fa.sites) hSites = std::max(hSites, v + 1);
    for (int v : fb.sites) hSites = std::max(hSites, v + 1);
    std::vector<int> preAgentB(static_cast<std::size_t>(hAgents), kNone);
    std::vector<int> preSiteB(static_cast<std::size_t>(hSites), kNone);
    for (int y = 0; y < b.agentCount(); ++y) preAgentB[fb.agents[y]] = y;
    for (int y = 0; y < b.siteCount(); ++y) preSiteB[fb.sites[y]] = y;

    std::vector<int> apexAgentOf(static_cast<std::size_t>(a.agentCount()), kNone);
    for (int x = 0; x < a.agentCount(); ++x) {
        int y = preAgentB[fa.agents[x]];
        if (y == kNone || a.agent(x).type != b.agent(y).type) continue;
        apexAgentOf[x] = span.apex.addAgent(a.agent(x).type);
        span.left.agents.push_back(x);
        span.right.agents.push_back(y);
    }
    std::vector<int> apexSiteOf(static_cast<std::size_t>(a.siteCount()), kNone);
    for (int x = 0; x < a.siteCount(); ++x) {
        int y = preSiteB[fa.sites[x]];
        if (y == kNone) continue;
        const Site& sx = a.site(x);
        const Site& sy = b.site(y);
        int state = (sx.state != kNone && sx.state == sy.state) ? sx.state : kNone;
        int owner = (sx.owner != kNone && sy.owner != kNone) ? apexAgentOf[sx.owner] : kNone;
        apexSiteOf[x] = owner != kNone ? span.apex.addSite(owner, sx.type, state) : span.apex.addDangling(sx.type, state);
        span.left.sites.push_back(x);
        span.right.sites.push_back(y);
    }
    for (int x = 0; x < a.siteCount(); ++x) {
        int p = a.site(x).partner;
        if (apexSiteOf[x] == kNone || p == kNone || apexSiteOf[p] == kNone || p < x) continue;
        int y = span.right.sites[apexSiteOf[x]];
        int q = span.right.sites[apexSiteOf[p]];
        if (b.site(y).partner == q) span.apex.bind(apexSiteOf[x], apexSiteOf[p]);
    }
    return span;
}

std::optional<Cospan> pushout(const ContactMap& a, const ContactMap& b, const Span& span) {
    const ContactGraph& c = a.graph();
    Cospan out{ContactMap(a.graphPtr()), identityEmbedding(a), {}};
    out.fromB.agents.assign(static_cast<std::size_t>(b.agentCount()), kNone);
    out.fromB.sites.assign(static_cast<std::size_t>(b.siteCount()), kNone);
    for (std::size_t i = 0; i < span.left.agents.size(); ++i) {
        int x = span.left.agents[i], y = span.right.agents[i];
        if (out.fromB.agents[y] != kNone && out.fromB.agents[y] != x) return std::nullopt;
        out.fromB.agents[y] = x;
    }
    for (std::size_t i = 0; i < span.left.sites.size(); ++i) {
        int x = span.left.sites[i], y = span.right.sites[i];
        if (out.fromB.sites[y] != kNone && out.fromB.sites[y] != x) return std::nullopt;
        out.fromB.sites[y] = x;
    }
    int nAgents = a.agentCount();
    for (int y = 0; y < b.agentCount(); ++y)
        if (out.fromB.agents[y] == kNone) out.fromB.agents[y] = nAgents++;
    int nSites = a.siteCount();
    for (int y = 0; y < b.siteCount(); ++y)
        if (out.fromB.sites[y] == kNone) out.fromB.sites[y] = nSites++;

    struct Proto {
        int type = kNone, owner = kNone, partner = kNone, state = kNone;
    };
    std::vector<Proto> proto(static_cast<std::size_t>(nSites));
    std::vector<int> agentType(static_cast<std::size_t>(nAgents), kNone);
    auto merge = [](int& slot, int value) {
        if (value == kNone) return true;
        if (slot != kNone && slot != value) return false;
        slot = value;
        return true;
    };
    auto absorb = [&](const ContactMap& g, const Embedding& f) {
        for (int x = 0; x < g.agentCount(); ++x)
            if (!merge(agentType[f.agents[x]], g.agent(x).type)) return false;
        for (int x = 0; x < g.siteCount(); ++x) {
            const Site& s = g.site(x);
            Proto& p = proto[f.sites[x]];
            if (!merge(p.type, s.type) || !merge(p.state, s.state)) return false;
            if (s.owner != kNone && !merge(p.owner, f.agents[s.owner])) return false;
            if (s.partner != kNone && !merge(p.partner, f.sites[s.partner])) return false;
        }
        return true;
    };
    if (!absorb(a, out.fromA) || !absorb(b, out.fromB)) return std::nullopt;

    for (int u = 0; u < nAgents; ++u) out.glued.addAgent(agentType[u]);
    for (int s = 0; s < nSites; ++s) {
        const Proto& p = proto[s];
        if (p.owner == kNone) {
            out.glued.addDangling(p.type, p.state);
            continue;
        }
        if (out.glued.agent(p.owner).slots[c.siteType(p.type).slot] != kNone) return std::nullopt;
        out.glued.addSite(p.owner, p.type, p.state);
    }
    for (int s = 0; s < nSites; ++s) {
        int q = proto[s].partner;
        if (q == kNone) continue;
        if (proto[q].partner != s) return std::nullopt;
        if (s < q) out.glued.bind(s, q);
    }
    if (!out.glued.realizability().isRealizable) return std::nullopt;
    return out;
}

namespace {

// A partial bijection between the agents and sites of a and b, closed under
// the identifications forced by realizability and local injectivity.
struct Relation {
    std::vector<int> agentAB, agentBA, siteAB, siteBA;
};

class GluingEnumerator {
public:
    GluingEnumerator(const ContactMap& a, const ContactMap& b) : a_(a), b_(b) {
        for (int x = 0; x < a.agentCount(); ++x)
            for (int y = 0; y < b.agentCount(); ++y)
                if (a.agent(x).type == b.agent(y).type) seeds_.emplace_back(x, y);
    }

    std::vector<MinimalGluing> run() {
        Relation r;
        r.agentAB.assign(static_cast<std::size_t>(a_.agentCount()), kNone);
        r.agentBA.assign(static_cast<std::size_t>(b_.agentCount()), kNone);
        r.siteAB.assign(static_cast<std::size_t>(a_.siteCount()), kNone);
        r.siteBA.assign(static_cast<std::size_t>(b_.siteCount()), kNone);
        excluded_.assign(seeds_.size(), 0);
        dfs(0, r);
        return std::move(out_);
    }

private:
    bool pairAgents(Relation& r, int x, int y) {
        if (r.agentAB[x] == y) return true;
        if (r.agentAB[x] != kNone || r.agentBA[y] != kNone) return false;
        if (a_.agent(x).type != b_.agent(y).type) return false;
        r.agentAB[x] = y;
        r.agentBA[y] = x;
        work_.push_back({true, x, y});
        return true;
    }

    bool pairSites(Relation& r, int x, int y) {
        if (r.siteAB[x] == y) return true;
        if (r.siteAB[x] != kNone || r.siteBA[y] != kNone) return false;
        const Site& sx = a_.site(x);
        const Site& sy = b_.site(y);
        if (sx.type != sy.type) return false;
        if (sx.state != kNone && sy.state != kNone && sx.state != sy.state) return false;
        if ((sx.partner == kNone) != (sy.partner == kNone)) return false;
        r.siteAB[x] = y;
        r.siteBA[y] = x;
        work_.push_back({false, x, y});
        return true;
    }

    bool close(Relation& r) {
        while (!work_.empty()) {
            auto [isAgent, x, y] = work_.back();
            work_.pop_back();
            if (isAgent) {
                const Agent& ax = a_.agent(x);
                const Agent& by = b_.agent(y);
                for (std::size_t slot = 0; slot < ax.slots.size(); ++slot)
                    if (ax.slots[slot] != kNone && by.slots[slot] != kNone &&
                        !pairSites(r, ax.slots[slot], by.slots[slot]))
                        return false;
                continue;
            }
            const Site& sx = a_.site(x);
            const Site& sy = b_.site(y);
            if (sx.owner != kNone && sy.owner != kNone && !pairAgents(r, sx.owner, sy.owner)) return false;
            if (sx.partner == kNone) continue;
            // The overlap would carry an edge between two dangling sites.
            bool dx = sx.owner == kNone, dy = sy.owner == kNone;
            bool px = a_.site(sx.partner).owner == kNone, py = b_.site(sy.partner).owner == kNone;
            if ((dx || dy) && (px || py)) return false;
            if (!pairSites(r, sx.partner, sy.partner)) return false;
        }
        return true;
    }

    void dfs(std::size_t i, const Relation& r) {
        if (i == seeds_.size()) {
            emit(r);
            return;
        }
        auto [x, y] = seeds_[i];
        if (r.agentAB[x] == y) {
            dfs(i + 1, r);
            return;
        }
        excluded_[i] = 1;
        dfs(i + 1, r);
        excluded_[i] = 0;
        if (r.agentAB[x] != kNone || r.agentBA[y] != kNone) return;
        Relation next = r;
        work_.clear();
        bool ok = pairAgents(next, x, y) && close(next);
        work_.clear();
        if (!ok) return;
        for (std::size_t k = 0; k < i; ++k)
            if (excluded_[k] && next.agentAB[seeds_[k].first] == seeds_[k].second) return;
        dfs(i + 1, next);
    }

    void emit(const Relation& r) {
        Span span{ContactMap(a_.graphPtr()), {}, {}};
        std::vector<int> apexAgent(static_cast<std::size_t>(a_.agentCount()), kNone);
        for (int x = 0; x < a_.agentCount(); ++x) {
            if (r.agentAB[x] == kNone) continue;
            apexAgent[x] = span.apex.addAgent(a_.agent(x).type);
            span.left.agents.push_back(x);
            span.right.agents.push_back(r.agentAB[x]);
        }
        std::vector<int> apexSite(static_cast<std::size_t>(a_.siteCount()), kNone);
        for (int x = 0; x < a_.siteCount(); ++x) {
            int y = r.siteAB[x];
            if (y == kNone) continue;
            const Site& sx = a_.site(x);
            const Site& sy = b_.site(y);
            int state = (sx.state != kNone && sx.state == sy.state) ? sx.state : kNone;
            bool owned = sx.owner != kNone && sy.owner != kNone;
            apexSite[x] = owned ? span.apex.addSite(apexAgent[sx.owner], sx.type, state)
                                : span.apex.addDangling(sx.type, state);
            span.left.sites.push_back(x);
            span.right.sites.push_back(y);
        }
        for (int x = 0; x < a_.siteCount(); ++x) {
            int p = a_.site(x).partner;
            if (apexSite[x] != kNone && p != kNone && x < p) span.apex.bind(apexSite[x], apexSite[p]);
        }
        auto cospan = pushout(a_, b_, span);
        if (!cospan) return;
        out_.push_back({std::move(span), std::move(*cospan)});
    }

    struct Work {
        bool isAgent;
        int x, y;
    };

    const ContactMap& a_;
    const ContactMap& b_;
    std::vector<std::pair<int, int>> seeds_;
    std::vector<char> excluded_;
    std::vector<Work> work_;
    std::vector<MinimalGluing> out_;
};

}  // namespace

std::vector<MinimalGluing> minimalGluings(const ContactMap& a, const ContactMap& b) {
    return GluingEnumerator(a, b).run();
}

RelevanceTag classifyRelevance(const MinimalGluing& mg, const Rule& rule, RuleSide side) {
    const ContactMap& r = side == RuleSide::Left ? rule.lhs() : rule.rhs();
    const Embedding& leg = mg.cospan.fromB;
    if (static_cast<int>(leg.agents.size()) != r.agentCount() || static_cast<int>(leg.sites.size()) != r.siteCount())
        throw InvalidArgument("gluing leg does not start at the rule side");
    std::vector<char> fromPattern(static_cast<std::size_t>(mg.glued().siteCount()), 0);
    for (int s : mg.cospan.fromA.sites) fromPattern[s] = 1;
    RelevanceTag tag;
    for (int s : rule.modifiedSites()) {
        int g = leg.sites[s];
        if (fromPattern[g]) tag.witnessSites.push_back(g);
    }
    std::sort(tag.witnessSites.begin(), tag.witnessSites.end());
    tag.relevant = !tag.witnessSites.empty();
    return tag;
}

std::vector<MinimalGluing> relevantGluings(const ContactMap& pattern, const ContactMap& t,
                                           const std::vector<int>& modified) {
    std::vector<MinimalGluing> out;
    for (auto& mg : minimalGluings(pattern, t)) {
        bool hit = false;
        for (int y : mg.overlap.right.sites)
            if (std::find(modified.begin(), modified.end(), y) != modified.end()) hit = true;
        if (hit) out.push_back(std::move(mg));
    }
    return out;
}

}  // namespace thermograph
