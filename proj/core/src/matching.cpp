#include "thermograph/errors.hpp"
#include "thermograph/sitegraph.hpp"

namespace thermograph {

namespace {

// Connected pattern agents are reached from a root by following edges, so
// fixing the image of the root determines the whole component. The search
// therefore only branches on root images.
class Matcher {
public:
    Matcher(const ContactMap& p, const ContactMap& t, Embedding& scratch, std::vector<int>& trail,
            std::vector<int>& siteTrail)
        : p_(p), t_(t), visit_(nullptr), e_(scratch), trail_(trail), siteTrail_(siteTrail) {
        trail_.clear();
        siteTrail_.clear();
        e_.agents.assign(static_cast<std::size_t>(p.agentCount()), kNone);
        e_.sites.assign(static_cast<std::size_t>(p.siteCount()), kNone);
    }

    Matcher(const ContactMap& p, const ContactMap& t, const EmbeddingVisitor& visit, std::span<const int> fixed)
        : p_(p), t_(t), visit_(&visit), e_(own_), trail_(ownTrail_), siteTrail_(ownSiteTrail_) {
        if (p.graphPtr() != t.graphPtr() && p.graphPtr() && t.graphPtr() &&
            p.graph().agentTypeCount() != t.graph().agentTypeCount())
            throw InvalidArgument("pattern and target use different contact graphs");
        comps_ = connectedComponents(p);
        e_.agents.assign(static_cast<std::size_t>(p.agentCount()), kNone);
        e_.sites.assign(static_cast<std::size_t>(p.siteCount()), kNone);
        roots_.reserve(comps_.size());
        for (const auto& c : comps_) {
            int root = c.front();
            if (!fixed.empty())
                for (int u : c)
                    if (fixed[u] != kNone) {
                        root = u;
                        break;
                    }
            roots_.push_back(root);
        }
        if (!fixed.empty()) {
            if (static_cast<int>(fixed.size()) != p.agentCount())
                throw InvalidArgument("fixed agent map has the wrong size");
            fixed_.assign(fixed.begin(), fixed.end());
        }
    }

    void run() {
        // Dangling sites with no partner or only dangling partners cannot occur
        // in a realizable pattern; such patterns have no images.
        for (const Site& s : p_.sites())
            if (s.owner == kNone && (s.partner == kNone || p_.site(s.partner).owner == kNone)) return;
        search(0);
    }

    bool single(int root, int image) {
        if (t_.agent(image).type != p_.agent(root).type || !propagate(root, image)) return false;
        return static_cast<int>(trail_.size()) == p_.agentCount();
    }

private:
    bool search(std::size_t ci) {
        if (ci == comps_.size()) return (*visit_)(e_);
        int root = roots_[ci];
        auto tryRoot = [&](int v) {
            if (used(v) || t_.agent(v).type != p_.agent(root).type) return true;
            std::size_t mark = trail_.size();
            std::size_t siteMark = siteTrail_.size();
            bool ok = propagate(root, v);
            bool keepGoing = true;
            if (ok) keepGoing = search(ci + 1);
            undo(mark, siteMark);
            return keepGoing;
        };
        if (!fixed_.empty() && fixed_[root] != kNone) return tryRoot(fixed_[root]);
        if (byType_.empty()) {
            byType_.resize(t_.graph().agentTypeCount());
            for (int v = 0; v < t_.agentCount(); ++v) byType_[t_.agent(v).type].push_back(v);
        }
        for (int v : byType_[p_.agent(root).type])
            if (!tryRoot(v)) return false;
        return true;
    }

    // Patterns are small: injectivity is checked against the partial map.
    bool used(int v) const {
        for (int u : trail_)
            if (e_.agents[u] == v) return true;
        return false;
    }

    void assignAgent(int u, int v) {
        e_.agents[u] = v;
        trail_.push_back(u);
    }

    bool propagate(int root, int image) {
        if (!fixed_.empty() && fixed_[root] != kNone && fixed_[root] != image) return false;
        assignAgent(root, image);
        std::size_t head = trail_.size() - 1;
        while (head < trail_.size()) {
            int u = trail_[head++];
            int v = e_.agents[u];
            const Agent& pa = p_.agent(u);
            const Agent& ta = t_.agent(v);
            for (std::size_t slot = 0; slot < pa.slots.size(); ++slot) {
                int s = pa.slots[slot];
                if (s == kNone) continue;
                int t = ta.slots[slot];
                if (t == kNone) return false;
                const Site& ps = p_.site(s);
                const Site& ts = t_.site(t);
                if (ps.state != kNone && ps.state != ts.state) return false;
                if (!mapSite(s, t)) return false;
                if (ps.partner == kNone) {
                    if (ts.partner != kNone) return false;
                    continue;
                }
                if (ts.partner == kNone) return false;
                const Site& pq = p_.site(ps.partner);
                const Site& tq = t_.site(ts.partner);
                if (pq.type != tq.type) return false;
                if (pq.state != kNone && pq.state != tq.state) return false;
                if (pq.owner == kNone) {
                    if (!mapSite(ps.partner, ts.partner)) return false;
                    continue;
                }
                if (tq.owner == kNone) return false;
                int u2 = pq.owner;
                int v2 = tq.owner;
                if (e_.agents[u2] != kNone) {
                    if (e_.agents[u2] != v2) return false;
                    continue;
                }
                if (used(v2) || t_.agent(v2).type != p_.agent(u2).type) return false;
                if (!fixed_.empty() && fixed_[u2] != kNone && fixed_[u2] != v2) return false;
                assignAgent(u2, v2);
            }
        }
        return true;
    }

    bool mapSite(int s, int t) {
        for (int q : siteTrail_)
            if (e_.sites[q] == t) return false;
        e_.sites[s] = t;
        siteTrail_.push_back(s);
        return true;
    }

    void undo(std::size_t mark, std::size_t siteMark) {
        while (trail_.size() > mark) {
            int u = trail_.back();
            trail_.pop_back();
            e_.agents[u] = kNone;
        }
        while (siteTrail_.size() > siteMark) {
            int s = siteTrail_.back();
            siteTrail_.pop_back();
            e_.sites[s] = kNone;
        }
    }

    const ContactMap& p_;
    const ContactMap& t_;
    const EmbeddingVisitor* visit_;
    std::vector<std::vector<int>> comps_;
    std::vector<int> roots_;
    std::vector<int> fixed_;
    std::vector<std::vector<int>> byType_;
    Embedding own_;
    std::vector<int> ownTrail_, ownSiteTrail_;
    Embedding& e_;
    std::vector<int>& trail_;
    std::vector<int>& siteTrail_;
};

}  // namespace

void forEachEmbedding(const ContactMap& pattern, const ContactMap& target, const EmbeddingVisitor& visit,
                      std::span<const int> fixedAgents) {
    Matcher m(pattern, target, visit, fixedAgents);
    m.run();
}

bool embedAt(const ContactMap& pattern, const ContactMap& target, int u, int v, Embedding& out) {
    thread_local std::vector<int> trail, siteTrail;
    Matcher m(pattern, target, out, trail, siteTrail);
    return m.single(u, v);
}

std::vector<Embedding> enumerateEmbeddings(const ContactMap& pattern, const ContactMap& target,
                                           std::span<const int> fixedAgents) {
    std::vector<Embedding> out;
    forEachEmbedding(pattern, target, [&](const Embedding& e) {
        out.push_back(e);
        return true;
    }, fixedAgents);
    return out;
}

std::size_t countEmbeddings(const ContactMap& pattern, const ContactMap& target) {
    std::size_t n = 0;
    forEachEmbedding(pattern, target, [&](const Embedding&) {
        ++n;
        return true;
    });
    return n;
}

std::size_t countOccurrences(const ContactMap& pattern, const ContactMap& target) {
    std::size_t n = countEmbeddings(pattern, target);
    return n == 0 ? 0 : n / countEmbeddings(pattern, pattern);
}

}  // namespace thermograph
