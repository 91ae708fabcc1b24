#include "thermograph/errors.hpp"
#include "thermograph/sitegraph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace thermograph {

int ContactMap::addAgent(int agentType) {
    if (agentType < 0 || agentType >= static_cast<int>(graph_->agentTypeCount()))
        throw InvalidArgument("unknown agent type id");
    Agent a;
    a.type = agentType;
    a.slots.assign(graph_->agentType(agentType).sites.size(), kNone);
    agents_.push_back(std::move(a));
    return agentCount() - 1;
}

int ContactMap::addSite(int agent, int siteType, int state) {
    if (agent < 0 || agent >= agentCount()) throw InvalidArgument("unknown agent id");
    const auto& st = graph_->siteType(siteType);
    Agent& a = agents_[agent];
    if (st.owner != a.type)
        throw InvalidArgument("site type " + graph_->siteLabel(siteType) + " does not belong to agent type " +
                              graph_->agentType(a.type).name);
    if (a.slots[st.slot] != kNone)
        throw InvalidArgument("agent already carries site " + graph_->siteLabel(siteType));
    sites_.push_back({siteType, agent, kNone, state});
    a.slots[st.slot] = siteCount() - 1;
    return siteCount() - 1;
}

int ContactMap::addDangling(int siteType, int state) {
    (void)graph_->siteType(siteType);
    sites_.push_back({siteType, kNone, kNone, state});
    return siteCount() - 1;
}

void ContactMap::bind(int siteA, int siteB) {
    if (siteA == siteB) throw InvalidArgument("cannot bind a site to itself");
    Site& a = sites_.at(siteA);
    Site& b = sites_.at(siteB);
    if (a.partner != kNone || b.partner != kNone) throw InvalidArgument("site already bound");
    a.partner = siteB;
    b.partner = siteA;
}

void ContactMap::unbind(int site) {
    Site& a = sites_.at(site);
    if (a.partner == kNone) return;
    sites_[a.partner].partner = kNone;
    a.partner = kNone;
}

void ContactMap::setState(int site, int state) { sites_.at(site).state = state; }

void ContactMap::adopt(int site, int agent) {
    Site& s = sites_.at(site);
    if (s.owner != kNone) throw InvalidArgument("site already owned");
    const auto& st = graph_->siteType(s.type);
    Agent& a = agents_.at(agent);
    if (st.owner != a.type || a.slots[st.slot] != kNone)
        throw InvalidArgument("agent cannot adopt site " + graph_->siteLabel(s.type));
    s.owner = agent;
    a.slots[st.slot] = site;
}

int ContactMap::slotOf(int site) const { return graph_->siteType(site_(site).type).slot; }

int ContactMap::siteAt(int agent, int slot) const {
    return agents_.at(agent).slots.at(static_cast<std::size_t>(slot));
}

SiteGraph ContactMap::siteGraph() const {
    SiteGraph g;
    g.agentCount = agentCount();
    g.siteOwner.reserve(sites_.size());
    for (int s = 0; s < siteCount(); ++s) {
        const Site& x = sites_[s];
        g.siteOwner.push_back(x.owner == kNone ? std::nullopt : std::optional<int>(x.owner));
        if (x.partner > s) g.edges.emplace_back(s, x.partner);
    }
    return g;
}

void ContactMap::validate() const {
    if (!graph_) throw InvalidArgument("contact map has no contact graph");
    for (int s = 0; s < siteCount(); ++s) {
        const Site& x = sites_[s];
        const auto& st = graph_->siteType(x.type);
        if (x.owner != kNone && agents_[x.owner].slots[st.slot] != s)
            throw InvalidArgument("site/agent slot tables disagree");
        if (x.state != kNone && (x.state < 0 || x.state >= static_cast<int>(st.states.size())))
            throw InvalidArgument("invalid state on site " + graph_->siteLabel(x.type));
        if (x.partner != kNone) {
            if (sites_[x.partner].partner != s) throw InvalidArgument("asymmetric edge");
            if (!graph_->canBind(x.type, sites_[x.partner].type))
                throw InvalidArgument("edge " + graph_->siteLabel(x.type) + " -- " +
                                      graph_->siteLabel(sites_[x.partner].type) + " is not in the contact graph");
        }
    }
    auto report = realizability();
    if (!report.isRealizable) {
        const auto& v = report.violations.front();
        throw InvalidArgument(std::string("not realizable: ") + toString(v.kind));
    }
}

bool ContactMap::operator==(const ContactMap& other) const {
    return agents_ == other.agents_ && sites_ == other.sites_;
}

bool isMixture(const ContactMap& h) {
    const ContactGraph& c = h.graph();
    for (const Agent& a : h.agents())
        for (int s : a.slots)
            if (s == kNone) return false;
    for (const Site& s : h.sites()) {
        if (s.owner == kNone) return false;
        if (c.hasStates(s.type) && s.state == kNone) return false;
    }
    return true;
}

std::vector<int> componentIndex(const ContactMap& h) {
    const int n = h.agentCount();
    std::vector<int> comp(static_cast<std::size_t>(n), kNone);
    int next = 0;
    std::vector<int> stack;
    for (int root = 0; root < n; ++root) {
        if (comp[root] != kNone) continue;
        comp[root] = next;
        stack.push_back(root);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int s : h.agent(u).slots) {
                if (s == kNone) continue;
                int p = h.site(s).partner;
                if (p == kNone) continue;
                int v = h.site(p).owner;
                if (v != kNone && comp[v] == kNone) {
                    comp[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    return comp;
}

std::vector<std::vector<int>> connectedComponents(const ContactMap& h) {
    auto comp = componentIndex(h);
    int k = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<std::vector<int>> blocks(static_cast<std::size_t>(k));
    for (int u = 0; u < h.agentCount(); ++u) blocks[comp[u]].push_back(u);
    return blocks;
}

int diameter(const ContactMap& h) {
    const int n = h.agentCount();
    int best = 0;
    std::vector<int> dist;
    std::deque<int> queue;
    for (int root = 0; root < n; ++root) {
        dist.assign(static_cast<std::size_t>(n), -1);
        dist[root] = 0;
        queue.assign(1, root);
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            best = std::max(best, dist[u]);
            for (int s : h.agent(u).slots) {
                if (s == kNone || h.site(s).partner == kNone) continue;
                int v = h.site(h.site(s).partner).owner;
                if (v != kNone && dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    return best;
}

Embedding identityEmbedding(const ContactMap& h) {
    Embedding e;
    e.agents.resize(static_cast<std::size_t>(h.agentCount()));
    e.sites.resize(static_cast<std::size_t>(h.siteCount()));
    std::iota(e.agents.begin(), e.agents.end(), 0);
    std::iota(e.sites.begin(), e.sites.end(), 0);
    return e;
}

Embedding compose(const Embedding& second, const Embedding& first) {
    Embedding e;
    e.agents.reserve(first.agents.size());
    e.sites.reserve(first.sites.size());
    for (int a : first.agents) e.agents.push_back(second.agents.at(a));
    for (int s : first.sites) e.sites.push_back(second.sites.at(s));
    return e;
}

bool isEmbedding(const Embedding& e, const ContactMap& from, const ContactMap& to) {
    if (static_cast<int>(e.agents.size()) != from.agentCount()) return false;
    if (static_cast<int>(e.sites.size()) != from.siteCount()) return false;
    std::vector<char> usedA(static_cast<std::size_t>(to.agentCount()), 0);
    std::vector<char> usedS(static_cast<std::size_t>(to.siteCount()), 0);
    for (int a = 0; a < from.agentCount(); ++a) {
        int b = e.agents[a];
        if (b < 0 || b >= to.agentCount() || usedA[b]) return false;
        usedA[b] = 1;
        if (from.agent(a).type != to.agent(b).type) return false;
    }
    for (int s = 0; s < from.siteCount(); ++s) {
        int t = e.sites[s];
        if (t < 0 || t >= to.siteCount() || usedS[t]) return false;
        usedS[t] = 1;
        const Site& x = from.site(s);
        const Site& y = to.site(t);
        if (x.type != y.type) return false;
        if (x.owner != kNone && (y.owner == kNone || e.agents[x.owner] != y.owner)) return false;
        if (x.state != kNone && x.state != y.state) return false;
        if (x.partner == kNone) {
            if (y.partner != kNone) return false;
        } else if (e.sites[x.partner] != y.partner) {
            return false;
        }
    }
    return true;
}

}  // namespace thermograph
