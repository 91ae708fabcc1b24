#include "thermograph/notation.hpp"

#include "thermograph/errors.hpp"

#include <cctype>
#include <map>

namespace thermograph {

namespace {

// Owned sites in (agent, slot) order, each dangling partner right after its site.
ContactMap slotOrder(const ContactMap& h) {
    ContactMap out(h.graphPtr());
    std::vector<int> map(static_cast<std::size_t>(h.siteCount()), kNone);
    for (int u = 0; u < h.agentCount(); ++u) out.addAgent(h.agent(u).type);
    for (int u = 0; u < h.agentCount(); ++u)
        for (int s : h.agent(u).slots) {
            if (s == kNone) continue;
            map[s] = out.addSite(u, h.site(s).type, h.site(s).state);
            int p = h.site(s).partner;
            if (p != kNone && h.isDangling(p)) map[p] = out.addDangling(h.site(p).type, h.site(p).state);
        }
    for (int s = 0; s < h.siteCount(); ++s) {
        int p = h.site(s).partner;
        if (p != kNone && s < p) out.bind(map[s], map[p]);
    }
    return out;
}

bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class PatternParser {
public:
    PatternParser(const ContactGraphPtr& graph, std::string_view text) : c_(*graph), text_(text), h_(graph) {}

    ContactMap run() {
        skip();
        if (pos_ == text_.size()) return std::move(h_);
        agent();
        skip();
        while (accept(',')) {
            agent();
            skip();
        }
        if (pos_ != text_.size()) fail("E008", "unexpected '" + std::string(1, text_[pos_]) + "'");
        for (const auto& [label, ends] : bonds_) {
            if (ends.sites.size() != 2)
                fail("E008", "bond label " + label + " must occur exactly twice", ends.column);
            int a = ends.sites[0], b = ends.sites[1];
            if (!c_.canBind(h_.site(a).type, h_.site(b).type))
                fail("E003", "edge " + c_.siteLabel(h_.site(a).type) + " -- " + c_.siteLabel(h_.site(b).type) +
                                 " is not declared", ends.column);
            h_.bind(a, b);
        }
        return slotOrder(h_);
    }

private:
    struct Ends {
        std::vector<int> sites;
        int column = 0;
    };

    [[noreturn]] void fail(const std::string& code, const std::string& msg, int column = -1) const {
        throw ParseError(code, msg, 0, column < 0 ? static_cast<int>(pos_) + 1 : column);
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char ch) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char ch) {
        if (!accept(ch)) fail("E008", std::string("expected '") + ch + "'");
    }

    std::string ident() {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && identChar(text_[pos_])) ++pos_;
        if (start == pos_) fail("E008", "expected a name");
        return std::string(text_.substr(start, pos_ - start));
    }

    void agent() {
        skip();
        int column = static_cast<int>(pos_) + 1;
        std::string name = ident();
        auto type = c_.findAgentType(name);
        if (!type) fail("E002", "unknown agent '" + name + "'", column);
        int u = h_.addAgent(*type);
        expect('(');
        if (accept(')')) return;
        site(u, *type);
        while (accept(',')) site(u, *type);
        expect(')');
    }

    void site(int u, int agentType) {
        skip();
        int column = static_cast<int>(pos_) + 1;
        std::string name = ident();
        auto st = c_.findSiteType(agentType, name);
        if (!st) fail("E003", "agent '" + c_.agentType(agentType).name + "' has no site '" + name + "'", column);
        if (h_.agent(u).slots[c_.siteType(*st).slot] != kNone)
            fail("E008", "site '" + name + "' listed twice", column);
        int state = kNone;
        bool bound = false;
        std::string label;
        int danglingType = kNone;
        for (int round = 0; round < 2; ++round) {
            if (state == kNone && accept('~')) {
                skip();
                int sc = static_cast<int>(pos_) + 1;
                std::string s = ident();
                auto k = c_.findState(*st, s);
                if (!k) fail("E004", "site " + c_.siteLabel(*st) + " has no state '" + s + "'", sc);
                state = *k;
            } else if (!bound && accept('!')) {
                bound = true;
                skip();
                int bc = static_cast<int>(pos_) + 1;
                std::string first = ident();
                if (accept('.')) {
                    std::string agentName = ident();
                    auto at = c_.findAgentType(agentName);
                    if (!at) fail("E002", "unknown agent '" + agentName + "'", bc);
                    auto pt = c_.findSiteType(*at, first);
                    if (!pt) fail("E003", "agent '" + agentName + "' has no site '" + first + "'", bc);
                    if (!c_.canBind(*st, *pt))
                        fail("E003", "edge " + c_.siteLabel(*st) + " -- " + c_.siteLabel(*pt) + " is not declared", bc);
                    danglingType = *pt;
                } else {
                    for (char ch : first)
                        if (!std::isdigit(static_cast<unsigned char>(ch))) fail("E008", "bond label must be a number", bc);
                    label = first;
                    if (bonds_[label].sites.empty()) bonds_[label].column = bc;
                }
            }
        }
        int s = h_.addSite(u, *st, state);
        if (danglingType != kNone) h_.bind(s, h_.addDangling(danglingType));
        if (!label.empty()) bonds_[label].sites.push_back(s);
    }

    const ContactGraph& c_;
    std::string_view text_;
    std::size_t pos_ = 0;
    ContactMap h_;
    std::map<std::string, Ends> bonds_;
};

}  // namespace

ContactMap parsePattern(const ContactGraphPtr& graph, std::string_view text) {
    return PatternParser(graph, text).run();
}

std::string formatPattern(const ContactMap& h, std::span<const int> agents) {
    const ContactGraph& c = h.graph();
    std::vector<int> order(agents.begin(), agents.end());
    if (order.empty())
        for (int u = 0; u < h.agentCount(); ++u) order.push_back(u);
    std::vector<int> label(static_cast<std::size_t>(h.siteCount()), 0);
    int next = 1;
    std::string out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Agent& a = h.agent(order[i]);
        if (i) out += ", ";
        out += c.agentType(a.type).name;
        out += '(';
        bool first = true;
        for (int s : a.slots) {
            if (s == kNone) continue;
            const Site& x = h.site(s);
            if (!first) out += ", ";
            first = false;
            out += c.siteType(x.type).name;
            if (x.state != kNone) out += "~" + c.siteType(x.type).states[x.state];
            if (x.partner == kNone) continue;
            const Site& y = h.site(x.partner);
            if (y.owner == kNone) {
                out += "!" + c.siteType(y.type).name + "." + c.agentType(c.siteType(y.type).owner).name;
                continue;
            }
            if (!label[s]) label[s] = label[x.partner] = next++;
            out += "!" + std::to_string(label[s]);
        }
        out += ')';
    }
    return out;
}

std::string snapshot(const ContactMap& h) {
    std::string out;
    for (const auto& comp : canonicalComponents(h)) {
        out += formatPattern(h, comp);
        out += '\n';
    }
    return out;
}

ContactMap parseSnapshot(const ContactGraphPtr& graph, std::string_view text) {
    ContactMap h(graph);
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        ContactMap part = parsePattern(graph, line);
        int base = h.agentCount();
        for (const Agent& a : part.agents()) h.addAgent(a.type);
        std::vector<int> map(static_cast<std::size_t>(part.siteCount()), kNone);
        for (int s = 0; s < part.siteCount(); ++s) {
            const Site& x = part.site(s);
            map[s] = x.owner == kNone ? h.addDangling(x.type, x.state) : h.addSite(base + x.owner, x.type, x.state);
        }
        for (int s = 0; s < part.siteCount(); ++s) {
            int p = part.site(s).partner;
            if (p != kNone && s < p) h.bind(map[s], map[p]);
        }
    }
    return h;
}

}  // namespace thermograph
