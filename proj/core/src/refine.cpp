#include "thermograph/refine.hpp"

#include "thermograph/errors.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <unordered_set>

namespace thermograph {

const char* toString(Maturity m) {
    switch (m) {
    case Maturity::Immature: return "immature";
    case Maturity::Mature: return "mature";
    case Maturity::Overgrown: return "overgrown";
    }
    return "?";
}

namespace {

// One side of a generator seen through an extension: the codomain, the image
// of the side's sites, which of those carry a state fixed by the side, and
// the modified sites.
struct SideView {
    const ContactMap* t = nullptr;
    std::vector<char> imageAgent;
    std::vector<char> imageSite;
    std::vector<char> keepState;
    std::vector<int> modified;
};

SideView makeView(const ContactMap& side, const Rule& g, const Embedding& phi, const ContactMap& t) {
    SideView v;
    v.t = &t;
    v.imageAgent.assign(static_cast<std::size_t>(t.agentCount()), 0);
    v.imageSite.assign(static_cast<std::size_t>(t.siteCount()), 0);
    v.keepState.assign(static_cast<std::size_t>(t.siteCount()), 0);
    for (int a : phi.agents) v.imageAgent[a] = 1;
    for (int s = 0; s < side.siteCount(); ++s) {
        v.imageSite[phi.sites[s]] = 1;
        if (side.site(s).state != kNone) v.keepState[phi.sites[s]] = 1;
    }
    for (int s : g.modifiedSites()) v.modified.push_back(phi.sites[s]);
    std::sort(v.modified.begin(), v.modified.end());
    return v;
}

struct Rewind {
    ContactMap t1;
    Embedding into;  // t1 -> t
    std::vector<int> modified;
};

// Sub-contact map of t over the agents touched by the image and by `kept`
// edges. Sites of the image are always kept; partners that are dropped are
// replaced by dangling copies.
Rewind buildRewind(const SideView& v, const std::vector<std::pair<int, int>>& keptEdges) {
    const ContactMap& t = *v.t;
    std::vector<char> keepSite = v.imageSite;
    std::vector<char> keepAgent = v.imageAgent;
    for (auto [a, b] : keptEdges) {
        keepSite[a] = keepSite[b] = 1;
        keepAgent[t.site(a).owner] = keepAgent[t.site(b).owner] = 1;
    }
    Rewind r{ContactMap(t.graphPtr()), {}, {}};
    std::vector<int> agentMap(static_cast<std::size_t>(t.agentCount()), kNone);
    for (int u = 0; u < t.agentCount(); ++u) {
        if (!keepAgent[u]) continue;
        agentMap[u] = r.t1.addAgent(t.agent(u).type);
        r.into.agents.push_back(u);
    }
    std::vector<int> siteMap(static_cast<std::size_t>(t.siteCount()), kNone);
    auto stateOf = [&](int s) { return v.keepState[s] ? t.site(s).state : kNone; };
    for (int s = 0; s < t.siteCount(); ++s) {
        if (!keepSite[s]) continue;
        const Site& x = t.site(s);
        siteMap[s] = x.owner == kNone ? r.t1.addDangling(x.type, stateOf(s)) : r.t1.addSite(agentMap[x.owner], x.type, stateOf(s));
        r.into.sites.push_back(s);
    }
    for (int s = 0; s < t.siteCount(); ++s) {
        if (!keepSite[s]) continue;
        int p = t.site(s).partner;
        if (p == kNone) continue;
        if (keepSite[p]) {
            if (s < p) r.t1.bind(siteMap[s], siteMap[p]);
            continue;
        }
        int copy = r.t1.addDangling(t.site(p).type);
        r.into.sites.push_back(p);
        r.t1.bind(siteMap[s], copy);
    }
    for (int m : v.modified) r.modified.push_back(siteMap[m]);
    return r;
}

// Every minimal edge set connecting further agents to the image.
std::vector<std::vector<std::pair<int, int>>> rewindEdgeSets(const SideView& v) {
    const ContactMap& t = *v.t;
    std::vector<std::pair<int, int>> candidates;
    for (int s = 0; s < t.siteCount(); ++s) {
        const Site& x = t.site(s);
        if (x.partner == kNone || x.partner < s || x.owner == kNone || t.isDangling(x.partner)) continue;
        if (v.imageSite[s] && v.imageSite[x.partner]) continue;
        candidates.emplace_back(s, x.partner);
    }
    std::vector<std::vector<std::pair<int, int>>> out;
    const std::size_t k = candidates.size();
    if (k > 20) throw InvariantViolation("extension too large for rewind enumeration");
    const int n = t.agentCount();
    std::vector<int> parent(static_cast<std::size_t>(n));
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        std::iota(parent.begin(), parent.end(), 0);
        // Image agents count as one block (the image is always kept).
        int root = kNone;
        for (int u = 0; u < n; ++u)
            if (v.imageAgent[u]) {
                if (root == kNone) root = u;
                parent[find(u)] = find(root);
            }
        bool cycle = false;
        std::vector<std::pair<int, int>> edges;
        for (std::size_t i = 0; i < k && !cycle; ++i) {
            if (!(mask & (1u << i))) continue;
            int a = find(t.site(candidates[i].first).owner);
            int b = find(t.site(candidates[i].second).owner);
            if (a == b) cycle = true;
            parent[a] = b;
            edges.push_back(candidates[i]);
        }
        if (cycle) continue;
        bool connected = true;
        for (auto [a, b] : edges)
            if (find(t.site(a).owner) != find(root)) connected = false;
        if (connected) out.push_back(std::move(edges));
    }
    return out;
}

void addRequests(const std::vector<ContactMap>& patterns, const Rewind& rw, SiteRequestMap& req) {
    for (const ContactMap& c : patterns) {
        for (const MinimalGluing& mg : relevantGluings(c, rw.t1, rw.modified)) {
            const ContactMap& m = mg.glued();
            for (int u1 = 0; u1 < rw.t1.agentCount(); ++u1) {
                int u = rw.into.agents[u1];
                const Agent& ga = m.agent(mg.cospan.fromB.agents[u1]);
                for (std::size_t slot = 0; slot < ga.slots.size(); ++slot)
                    if (ga.slots[slot] != kNone) req.requested[u][slot] = 1;
            }
        }
    }
}

void addSideRequests(const SideView& v, const std::vector<ContactMap>& patterns, SiteRequestMap& req) {
    const ContactMap& t = *v.t;
    for (int s = 0; s < t.siteCount(); ++s)
        if (v.imageSite[s] && !t.isDangling(s)) req.requested[t.site(s).owner][t.slotOf(s)] = 1;
    if (patterns.empty()) return;
    Rewind whole{t, identityEmbedding(t), v.modified};
    addRequests(patterns, whole, req);
    for (const auto& edges : rewindEdgeSets(v)) addRequests(patterns, buildRewind(v, edges), req);
}

SiteRequestMap emptyRequests(const ContactMap& t) {
    SiteRequestMap req;
    for (const Agent& a : t.agents()) req.requested.emplace_back(a.slots.size(), 0);
    return req;
}

}  // namespace

SiteRequestMap computeRequests(const Rule& g, const Embedding& phi, const ContactMap& t,
                               const std::vector<ContactMap>& patterns) {
    SiteRequestMap req = emptyRequests(t);
    ContactMap tStar = t;
    applyDelta(g, phi, tStar);
    addSideRequests(makeView(g.lhs(), g, phi, t), patterns, req);
    addSideRequests(makeView(g.rhs(), g, phi, tStar), patterns, req);
    return req;
}

MaturityStatus classify(const Embedding& phi, const ContactMap& t, const SiteRequestMap& requests) {
    MaturityStatus st;
    std::vector<std::pair<int, int>> missing, extra;
    for (int u = 0; u < t.agentCount(); ++u) {
        const Agent& a = t.agent(u);
        for (std::size_t slot = 0; slot < a.slots.size(); ++slot) {
            bool present = a.slots[slot] != kNone;
            bool wanted = requests.isRequested(u, static_cast<int>(slot));
            if (present && !wanted) extra.emplace_back(u, static_cast<int>(slot));
            if (!present && wanted) missing.emplace_back(u, static_cast<int>(slot));
        }
    }
    if (!extra.empty()) {
        st.kind = Maturity::Overgrown;
        st.witnesses = std::move(extra);
    } else if (!missing.empty() || !isEpi(phi, t)) {
        st.kind = Maturity::Immature;
        st.witnesses = std::move(missing);
    } else {
        st.kind = Maturity::Mature;
    }
    return st;
}

namespace {

bool legIsIso(const MinimalGluing& mg, const ContactMap& t) {
    const ContactMap& m = mg.glued();
    if (m.agentCount() != t.agentCount() || m.siteCount() != t.siteCount()) return false;
    for (int y = 0; y < t.siteCount(); ++y)
        if (m.site(mg.cospan.fromB.sites[y]).state != t.site(y).state) return false;
    return true;
}

// First relevant gluing that is not absorbed by t, with its pattern index.
std::optional<std::pair<std::size_t, MinimalGluing>> offendingGluing(const ContactMap& t,
                                                                     const std::vector<int>& modified,
                                                                     const std::vector<ContactMap>& patterns) {
    for (std::size_t i = 0; i < patterns.size(); ++i)
        for (MinimalGluing& mg : relevantGluings(patterns[i], t, modified))
            if (!legIsIso(mg, t)) return std::pair(i, std::move(mg));
    return std::nullopt;
}

std::vector<int> imageOf(const std::vector<int>& sites, const Embedding& phi) {
    std::vector<int> out;
    for (int s : sites) out.push_back(phi.sites[s]);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

bool isBalanced(const ContactMap& t, const std::vector<int>& modified, const std::vector<ContactMap>& patterns) {
    return !offendingGluing(t, modified, patterns);
}

BalanceVector balanceVector(const Rule& g, const Extension& ext, const std::vector<ContactMap>& patterns) {
    auto modified = imageOf(g.modifiedSites(), ext.phi);
    if (!isBalanced(ext.t, modified, patterns) || !isBalanced(ext.tStar, modified, patterns))
        throw InvalidArgument("extension of '" + g.name() + "' is not balanced");
    BalanceVector d;
    for (const ContactMap& c : patterns)
        d.push_back(static_cast<long>(countOccurrences(c, ext.tStar)) - static_cast<long>(countOccurrences(c, ext.t)));
    return d;
}

namespace {

struct Node {
    ContactMap t;
    Embedding phi;
    std::vector<std::string> provenance;
};

class Refiner {
public:
    Refiner(const Rule& g, const std::vector<ContactMap>& patterns, const RefineOptions& options)
        : g_(g), patterns_(patterns), options_(options), c_(g.lhs().graph()) {
        constrained_.assign(c_.siteTypeCount(), 0);
        auto note = [&](const ContactMap& h) {
            for (const Site& s : h.sites())
                if (s.state != kNone) constrained_[s.type] = 1;
        };
        for (const ContactMap& p : patterns) note(p);
        note(g.lhs());
        note(g.rhs());
        int dp = 0;
        for (const ContactMap& p : patterns) dp = std::max(dp, diameter(p));
        bound_ = 2 * dp + diameter(g.lhs()) + 1;
        modifiedL_ = g.modifiedSites();
    }

    std::vector<RefinedRule> run() {
        push({g_.lhs(), identityEmbedding(g_.lhs()), {}});
        while (!queue_.empty()) {
            Node n = std::move(queue_.front());
            queue_.pop_front();
            visit(n);
        }
        return std::move(out_);
    }

private:
    std::vector<int> marks(const Node& n) const {
        std::vector<int> m(static_cast<std::size_t>(n.t.agentCount()), kNone);
        for (std::size_t a = 0; a < n.phi.agents.size(); ++a) m[n.phi.agents[a]] = static_cast<int>(a);
        return m;
    }

    void push(Node n) {
        auto m = marks(n);
        if (!seen_.insert(canonicalForm(n.t, m)).second) return;
        if (++explored_ > options_.maxExtensions)
            throw Error("REFINE", "refinement of '" + g_.name() + "' exceeded " +
                                      std::to_string(options_.maxExtensions) + " extensions");
        queue_.push_back(std::move(n));
    }

    void visit(const Node& n) {
        SiteRequestMap req = computeRequests(g_, n.phi, n.t, patterns_);
        MaturityStatus st = classify(n.phi, n.t, req);
        if (st.kind == Maturity::Overgrown) return;
        if (diameter(n.t) > bound_)
            throw Error("REFINE", "refinement of '" + g_.name() + "' produced an extension of diameter " +
                                      std::to_string(diameter(n.t)) + " above the bound " + std::to_string(bound_));
        if (st.kind == Maturity::Immature) {
            if (!st.witnesses.empty()) grow(n, st.witnesses.front().first, st.witnesses.front().second);
            return;
        }
        Extension ext = mirrorExtension(g_, n.phi, n.t);
        auto modified = imageOf(modifiedL_, n.phi);
        auto bad = offendingGluing(ext.t, modified, patterns_);
        const ContactMap* side = &ext.t;
        if (!bad) {
            bad = offendingGluing(ext.tStar, modified, patterns_);
            side = &ext.tStar;
        }
        if (!bad) {
            emit(n, std::move(ext));
            return;
        }
        if (!options_.resolveDangling)
            throw InvariantViolation("mature extension of '" + g_.name() + "' is not balanced");
        resolve(n, patterns_[bad->first], bad->second, *side);
    }

    void emit(const Node& n, Extension ext) {
        RefinedRule r;
        r.name = g_.name() + "#" + std::to_string(out_.size() + 1);
        r.delta = balanceVector(g_, ext, patterns_);
        r.rule = ext.refined(r.name);
        r.ext = std::move(ext);
        r.provenance = n.provenance;
        out_.push_back(std::move(r));
    }

    std::vector<int> stateOptions(int siteType) const {
        if (c_.hasStates(siteType) && constrained_[siteType]) {
            std::vector<int> v(c_.siteType(siteType).states.size());
            std::iota(v.begin(), v.end(), 0);
            return v;
        }
        return {kNone};
    }

    std::string where(const ContactMap& t, int u, int slot) const {
        return c_.agentType(t.agent(u).type).name + "@" + std::to_string(u) + "." +
               c_.siteType(c_.siteTypeAt(t.agent(u).type, slot)).name;
    }

    static std::string stateTag(const ContactGraph& c, int st, int state) {
        return state == kNone ? std::string() : "~" + c.siteType(st).states[state];
    }

    Node child(const Node& n, ContactMap t, std::string move) const {
        Node m{std::move(t), n.phi, n.provenance};
        m.provenance.push_back(std::move(move));
        return m;
    }

    void grow(const Node& n, int u, int slot) {
        const int st = c_.siteTypeAt(n.t.agent(u).type, slot);
        const std::string at = where(n.t, u, slot);
        for (int state : stateOptions(st)) {
            const std::string tag = stateTag(c_, st, state);
            {
                ContactMap t = n.t;
                t.addSite(u, st, state);
                push(child(n, std::move(t), "reveal " + at + tag + " free"));
            }
            for (int p : c_.siteType(st).partners) {
                ContactMap t = n.t;
                int s = t.addSite(u, st, state);
                t.bind(s, t.addDangling(p));
                push(child(n, std::move(t), "reveal " + at + tag + " bound to " + c_.siteLabel(p)));
            }
            for (int d = 0; d < n.t.siteCount(); ++d) {
                const Site& x = n.t.site(d);
                if (x.owner != kNone || x.type != st) continue;
                if (x.state != kNone && state != kNone && x.state != state) continue;
                ContactMap t = n.t;
                t.adopt(d, u);
                if (state != kNone) t.setState(d, state);
                std::string move = "reveal " + at + tag + " closing onto " + c_.siteLabel(n.t.site(x.partner).type);
                push(child(n, std::move(t), std::move(move)));
            }
        }
    }

    void resolve(const Node& n, const ContactMap& c, const MinimalGluing& mg, const ContactMap& side) {
        const Span& o = mg.overlap;
        std::vector<int> dangling;
        std::vector<int> unset;
        for (std::size_t i = 0; i < o.right.sites.size(); ++i) {
            int y = o.right.sites[i];
            int x = o.left.sites[i];
            if (side.isDangling(y) && !c.isDangling(x)) dangling.push_back(y);
            if (side.site(y).state == kNone && c.site(x).state != kNone) unset.push_back(y);
        }
        std::sort(dangling.begin(), dangling.end());
        if (!dangling.empty()) {
            assignDangling(n, dangling, 0, {}, {});
            return;
        }
        if (!unset.empty()) {
            int y = unset.front();
            for (std::size_t k = 0; k < c_.siteType(n.t.site(y).type).states.size(); ++k) {
                ContactMap t = n.t;
                t.setState(y, static_cast<int>(k));
                push(child(n, std::move(t), "split " + c_.siteLabel(n.t.site(y).type) + "~" +
                                                c_.siteType(n.t.site(y).type).states[k]));
            }
            return;
        }
        throw InvariantViolation("mature extension of '" + g_.name() + "' is unbalanced and cannot be resolved");
    }

    // Each implicated dangling site goes to an existing agent lacking that
    // slot, or to a fresh agent; fresh agents may host several of them.
    void assignDangling(const Node& n, const std::vector<int>& d, std::size_t i, std::vector<int> target,
                        std::vector<int> groups) {
        if (i == d.size()) {
            ContactMap t = n.t;
            std::vector<int> fresh;
            std::string move = "resolve";
            for (std::size_t k = 0; k < d.size(); ++k) {
                int owner = target[k];
                if (owner < 0) {
                    std::size_t gi = static_cast<std::size_t>(-owner - 1);
                    while (fresh.size() <= gi) fresh.push_back(kNone);
                    if (fresh[gi] == kNone) fresh[gi] = t.addAgent(c_.siteType(t.site(d[k]).type).owner);
                    owner = fresh[gi];
                }
                t.adopt(d[k], owner);
                move += " " + c_.siteLabel(t.site(d[k]).type) + "->" + std::to_string(owner);
            }
            push(child(n, std::move(t), move));
            return;
        }
        const Site& x = n.t.site(d[i]);
        const int agentType = c_.siteType(x.type).owner;
        const int slot = c_.siteType(x.type).slot;
        auto taken = [&](int owner) {
            for (std::size_t k = 0; k < i; ++k)
                if (target[k] == owner && n.t.site(d[k]).type == x.type) return true;
            return false;
        };
        for (int v = 0; v < n.t.agentCount(); ++v) {
            if (n.t.agent(v).type != agentType || n.t.agent(v).slots[slot] != kNone || taken(v)) continue;
            target.push_back(v);
            assignDangling(n, d, i + 1, target, groups);
            target.pop_back();
        }
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            int id = -static_cast<int>(gi) - 1;
            if (groups[gi] != agentType || taken(id)) continue;
            target.push_back(id);
            assignDangling(n, d, i + 1, target, groups);
            target.pop_back();
        }
        groups.push_back(agentType);
        target.push_back(-static_cast<int>(groups.size()));
        assignDangling(n, d, i + 1, target, groups);
    }

    const Rule& g_;
    const std::vector<ContactMap>& patterns_;
    RefineOptions options_;
    const ContactGraph& c_;
    std::vector<char> constrained_;
    std::vector<int> modifiedL_;
    int bound_ = 0;
    std::size_t explored_ = 0;
    std::deque<Node> queue_;
    std::unordered_set<std::string> seen_;
    std::vector<RefinedRule> out_;
};

}  // namespace

std::vector<RefinedRule> enumerateMature(const Rule& g, const std::vector<ContactMap>& patterns,
                                         const RefineOptions& options) {
    for (const ContactMap& p : patterns)
        if (connectedComponents(p).size() != 1) throw InvalidArgument("energy patterns must be connected");
    return Refiner(g, patterns, options).run();
}

std::vector<RefinedRule> mirrorRefinement(const Rule& g, const std::vector<RefinedRule>& refined) {
    std::vector<RefinedRule> out;
    const std::string base = invertedName(g.name());
    for (std::size_t i = 0; i < refined.size(); ++i) {
        const RefinedRule& r = refined[i];
        RefinedRule m;
        m.name = base + "#" + std::to_string(i + 1);
        m.ext = Extension{r.ext.phi, r.ext.tStar, r.ext.t};
        m.rule = m.ext.refined(m.name);
        m.delta = r.delta;
        for (long& x : m.delta) x = -x;
        m.provenance = r.provenance;
        out.push_back(std::move(m));
    }
    return out;
}

namespace {

template <class Visit>
void forEachFactorization(const Embedding& psi, const ContactMap& mixture, const std::vector<RefinedRule>& refined,
                          Visit visit) {
    for (std::size_t i = 0; i < refined.size(); ++i) {
        const Extension& ext = refined[i].ext;
        std::vector<int> fixed(static_cast<std::size_t>(ext.t.agentCount()), kNone);
        for (std::size_t a = 0; a < ext.phi.agents.size(); ++a) fixed[ext.phi.agents[a]] = psi.agents[a];
        forEachEmbedding(ext.t, mixture, [&](const Embedding& rest) {
            for (std::size_t s = 0; s < ext.phi.sites.size(); ++s)
                if (rest.sites[ext.phi.sites[s]] != psi.sites[s]) return true;
            visit(i, rest);
            return true;
        }, fixed);
    }
}

}  // namespace

std::size_t countFactorizations(const Embedding& psi, const ContactMap& mixture,
                                const std::vector<RefinedRule>& refined) {
    std::size_t n = 0;
    forEachFactorization(psi, mixture, refined, [&](std::size_t, const Embedding&) { ++n; });
    return n;
}

Factorization uniqueFactor(const Rule& g, const Embedding& psi, const ContactMap& mixture,
                           const std::vector<RefinedRule>& refined) {
    if (!isEmbedding(psi, g.lhs(), mixture)) throw InvalidArgument("embedding does not target the mixture");
    std::vector<Factorization> found;
    forEachFactorization(psi, mixture, refined, [&](std::size_t i, const Embedding& rest) {
        found.push_back({i, rest});
    });
    if (found.size() != 1)
        throw InvariantViolation("decomposition of an instance of '" + g.name() + "' is " +
                                 (found.empty() ? "absent" : "not unique"));
    return std::move(found.front());
}

}  // namespace thermograph
