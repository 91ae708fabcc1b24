#include "thermograph/sitegraph.hpp"

#include <algorithm>
#include <cstring>

namespace thermograph {

namespace {

void put(std::string& out, int v) {
    out += std::to_string(v);
    out += ',';
}

// Breadth-first traversal from `root` in slot order. Agents are numbered in
// discovery order, so the encoding depends only on the root choice.
std::string traverse(const ContactMap& h, int root, std::span<const int> marks, std::vector<int>& order) {
    order.assign(static_cast<std::size_t>(h.agentCount()), kNone);
    std::vector<int> queue{root};
    order[root] = 0;
    std::string out;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int u = queue[head];
        const Agent& a = h.agent(u);
        out += 'A';
        put(out, a.type);
        if (!marks.empty()) put(out, marks[u]);
        for (int s : a.slots) {
            if (s == kNone) {
                out += '-';
                continue;
            }
            const Site& x = h.site(s);
            out += 's';
            put(out, x.state);
            if (x.partner == kNone) {
                out += 'f';
                continue;
            }
            const Site& y = h.site(x.partner);
            if (y.owner == kNone) {
                out += 'd';
                put(out, y.type);
                put(out, y.state);
                continue;
            }
            if (order[y.owner] == kNone) {
                order[y.owner] = static_cast<int>(queue.size());
                queue.push_back(y.owner);
            }
            out += 'b';
            put(out, order[y.owner]);
            put(out, h.graph().siteType(y.type).slot);
        }
        out += ';';
    }
    return out;
}

struct ComponentCode {
    std::string code;
    std::vector<int> agents;  // traversal order
};

std::vector<ComponentCode> componentCodes(const ContactMap& h, std::span<const int> marks) {
    std::vector<ComponentCode> parts;
    std::vector<int> order;
    for (const auto& comp : connectedComponents(h)) {
        // Only roots of the smallest (type, mark) key can start the minimal code.
        auto key = [&](int u) { return std::pair(h.agent(u).type, marks.empty() ? 0 : marks[u]); };
        auto best = key(comp.front());
        for (int u : comp) best = std::min(best, key(u));
        ComponentCode min;
        bool first = true;
        for (int u : comp) {
            if (key(u) != best) continue;
            std::string code = traverse(h, u, marks, order);
            if (first || code < min.code) {
                min.code = std::move(code);
                min.agents.assign(comp.size(), kNone);
                for (int v : comp) min.agents[order[v]] = v;
            }
            first = false;
        }
        parts.push_back(std::move(min));
    }
    std::stable_sort(parts.begin(), parts.end(),
                     [](const ComponentCode& a, const ComponentCode& b) { return a.code < b.code; });
    return parts;
}

}  // namespace

std::string canonicalForm(const ContactMap& h, std::span<const int> marks) {
    std::string out;
    for (const auto& p : componentCodes(h, marks)) {
        out += p.code;
        out += '|';
    }
    return out;
}

std::vector<std::vector<int>> canonicalComponents(const ContactMap& h) {
    std::vector<std::vector<int>> out;
    for (auto& p : componentCodes(h, {})) out.push_back(std::move(p.agents));
    return out;
}

bool isomorphic(const ContactMap& a, const ContactMap& b) {
    if (a.agentCount() != b.agentCount() || a.siteCount() != b.siteCount()) return false;
    return canonicalForm(a) == canonicalForm(b);
}

std::string configurationKey(const ContactMap& h) {
    std::string out;
    out.resize(h.sites().size() * 2 * sizeof(int));
    char* p = out.data();
    for (const Site& s : h.sites()) {
        std::memcpy(p, &s.partner, sizeof(int));
        p += sizeof(int);
        std::memcpy(p, &s.state, sizeof(int));
        p += sizeof(int);
    }
    return out;
}

}  // namespace thermograph
