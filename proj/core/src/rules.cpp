#include "thermograph/rules.hpp"

#include "thermograph/errors.hpp"

#include <algorithm>

namespace thermograph {

Rule::Rule(std::string name, ContactMap lhs, ContactMap rhs)
    : name_(std::move(name)), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {
    if (lhs_.agentCount() != rhs_.agentCount() || lhs_.siteCount() != rhs_.siteCount())
        throw InvalidArgument("rule '" + name_ + "': sides have different agents or sites");
    for (int a = 0; a < lhs_.agentCount(); ++a)
        if (lhs_.agent(a).type != rhs_.agent(a).type)
            throw InvalidArgument("rule '" + name_ + "': agent types differ between sides");
    for (int s = 0; s < lhs_.siteCount(); ++s) {
        const Site& l = lhs_.site(s);
        const Site& r = rhs_.site(s);
        if (l.type != r.type || l.owner != r.owner)
            throw InvalidArgument("rule '" + name_ + "': site typing differs between sides");
        bool edge = l.partner != r.partner;
        bool state = l.state != r.state;
        if (!edge && !state) continue;
        if (edge) {
            for (const ContactMap* side : {&lhs_, &rhs_}) {
                const Site& x = side->site(s);
                if (x.owner == kNone || (x.partner != kNone && side->site(x.partner).owner == kNone))
                    throw InvalidArgument("rule '" + name_ + "': modified edges must join owned sites");
            }
        }
        if (state && (l.state == kNone || r.state == kNone))
            throw InvalidArgument("rule '" + name_ + "': a modified state must be given on both sides");
        modified_.push_back(s);
    }
    auto comp = componentIndex(lhs_);
    components_ = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

bool Rule::isModified(int site) const { return std::binary_search(modified_.begin(), modified_.end(), site); }

std::string invertedName(const std::string& name) {
    if (!name.empty() && name.back() == '*') return name.substr(0, name.size() - 1);
    return name + "*";
}

Rule invert(const Rule& r) { return Rule(invertedName(r.name()), r.rhs(), r.lhs()); }

void applyDelta(const Rule& r, const Embedding& psi, ContactMap& h) {
    const ContactMap& lhs = r.lhs();
    const ContactMap& rhs = r.rhs();
    for (int s : r.modifiedSites())
        if (lhs.site(s).partner != rhs.site(s).partner && lhs.site(s).partner != kNone)
            h.unbind(psi.sites[s]);
    for (int s : r.modifiedSites()) {
        const Site& x = rhs.site(s);
        if (x.partner != lhs.site(s).partner && x.partner != kNone && s < x.partner)
            h.bind(psi.sites[s], psi.sites[x.partner]);
        if (x.state != lhs.site(s).state) h.setState(psi.sites[s], x.state);
    }
}

RewriteResult applyRule(const Rule& r, const Embedding& psi, const ContactMap& h) {
    if (!isMixture(h)) throw InvalidArgument("rule '" + r.name() + "' applied to a non-mixture");
    if (!isEmbedding(psi, r.lhs(), h))
        throw InvalidArgument("rule '" + r.name() + "': embedding does not target the mixture");
    RewriteResult out{h, psi};
    applyDelta(r, psi, out.mixture);
    return out;
}

bool isEpi(const Embedding& phi, const ContactMap& t) {
    auto comp = componentIndex(t);
    std::vector<char> hit(static_cast<std::size_t>(t.agentCount()), 0);
    for (int a : phi.agents) hit[comp[a]] = 1;
    for (int u = 0; u < t.agentCount(); ++u)
        if (!hit[comp[u]]) return false;
    return true;
}

bool isPrefixOfEpi(const Embedding& phi, const ContactMap& t) {
    auto comp = componentIndex(t);
    const int n = t.agentCount();
    std::vector<char> hit(static_cast<std::size_t>(n), 0);
    std::vector<char> open(static_cast<std::size_t>(n), 0);
    for (int a : phi.agents) hit[comp[a]] = 1;
    const ContactGraph& c = t.graph();
    for (int u = 0; u < n; ++u) {
        const Agent& a = t.agent(u);
        for (std::size_t slot = 0; slot < a.slots.size(); ++slot) {
            int s = a.slots[slot];
            if (s == kNone) {
                if (!c.siteType(c.siteTypeAt(a.type, static_cast<int>(slot))).partners.empty()) open[comp[u]] = 1;
            } else if (t.site(s).partner != kNone && t.isDangling(t.site(s).partner)) {
                open[comp[u]] = 1;
            }
        }
    }
    for (int u = 0; u < n; ++u)
        if (!hit[comp[u]] && !open[comp[u]]) return false;
    return true;
}

Extension mirrorExtension(const Rule& r, const Embedding& phi, const ContactMap& t) {
    if (!isEmbedding(phi, r.lhs(), t)) throw InvalidArgument("extension is not an embedding of the rule's lhs");
    if (!isPrefixOfEpi(phi, t)) throw InvalidArgument("extension is not a prefix of an epi");
    Extension ext{phi, t, t};
    applyDelta(r, phi, ext.tStar);
    return ext;
}

}  // namespace thermograph
