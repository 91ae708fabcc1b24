#include "thermograph/model_file.hpp"

#include "thermograph/errors.hpp"
#include "thermograph/notation.hpp"
#include "thermograph/rules.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace thermograph {

namespace {

// One statement after joining `\` continuations and dropping comments.
struct Line {
    std::string text;
    std::vector<std::pair<int, int>> pos;  // source (line, column) of each character
    std::pair<int, int> end{1, 1};
};

[[noreturn]] void fail(const Line& l, std::size_t offset, const std::string& code, const std::string& msg) {
    auto [line, col] = offset < l.pos.size() ? l.pos[offset] : l.end;
    throw ParseError(code, msg, line, col);
}

std::vector<Line> splitLines(std::string_view text) {
    std::vector<Line> out;
    Line cur;
    bool open = false;
    int lineNo = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view raw = text.substr(start, nl - start);
        ++lineNo;
        bool quoted = false;
        std::size_t cut = raw.size();
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] == '\'') quoted = !quoted;
            if (raw[i] == '#' && !quoted) {
                cut = i;
                break;
            }
        }
        std::string_view body = raw.substr(0, cut);
        while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
        bool more = !body.empty() && body.back() == '\\';
        if (more) body.remove_suffix(1);
        if (!open) {
            cur = Line{};
            open = true;
        } else {
            cur.text += ' ';
            cur.pos.emplace_back(lineNo, 1);
        }
        for (std::size_t i = 0; i < body.size(); ++i) {
            cur.text += body[i];
            cur.pos.emplace_back(lineNo, static_cast<int>(i) + 1);
        }
        cur.end = {lineNo, static_cast<int>(body.size()) + 1};
        if (!more || nl == text.size()) {
            if (cur.text.find_first_not_of(" \t\r") != std::string::npos) out.push_back(std::move(cur));
            open = false;
        }
        start = nl + 1;
    }
    return out;
}

bool isSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool isIdent(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Cursor over one statement.
class Cursor {
public:
    Cursor(const Line& line, std::size_t pos = 0) : line_(line), pos_(pos) {}

    const Line& line() const { return line_; }
    std::size_t pos() const { return pos_; }
    void seek(std::size_t p) { pos_ = p; }
    bool atEnd() {
        skip();
        return pos_ >= line_.text.size();
    }
    [[noreturn]] void fail(const std::string& code, const std::string& msg) const {
        thermograph::fail(line_, pos_, code, msg);
    }

    void skip() {
        while (pos_ < line_.text.size() && isSpace(line_.text[pos_])) ++pos_;
    }
    bool accept(std::string_view tok) {
        skip();
        if (std::string_view(line_.text).substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view tok) {
        if (!accept(tok)) fail("E008", "expected '" + std::string(tok) + "'");
    }
    std::string ident() {
        skip();
        std::size_t s = pos_;
        while (pos_ < line_.text.size() && isIdent(line_.text[pos_])) ++pos_;
        if (s == pos_) fail("E008", "expected a name");
        return line_.text.substr(s, pos_ - s);
    }
    std::string quoted() {
        skip();
        if (pos_ >= line_.text.size() || line_.text[pos_] != '\'') fail("E008", "expected a quoted name");
        std::size_t end = line_.text.find('\'', pos_ + 1);
        if (end == std::string::npos) fail("E008", "unterminated name");
        if (end == pos_ + 1) fail("E008", "empty name");
        std::string name = line_.text.substr(pos_ + 1, end - pos_ - 1);
        pos_ = end + 1;
        return name;
    }
    std::string word() {
        skip();
        std::size_t s = pos_;
        while (pos_ < line_.text.size() && !isSpace(line_.text[pos_])) ++pos_;
        if (s == pos_) fail("E008", "unexpected end of line");
        return line_.text.substr(s, pos_ - s);
    }
    std::string_view rest(std::size_t end = std::string::npos) const {
        return std::string_view(line_.text).substr(pos_, end == std::string::npos ? end : end - pos_);
    }

private:
    const Line& line_;
    std::size_t pos_;
};

// First occurrence of `tok` outside quotes, parentheses and |..| counts.
std::size_t findTopLevel(const std::string& s, std::string_view tok, std::size_t from = 0) {
    int depth = 0;
    bool quoted = false, count = false;
    for (std::size_t i = from; i < s.size(); ++i) {
        char c = s[i];
        if (c == '\'') quoted = !quoted;
        if (quoted) continue;
        if (c == '|') count = !count;
        if (count) continue;
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth == 0 && std::string_view(s).substr(i, tok.size()) == tok) return i;
    }
    return std::string::npos;
}

bool validName(const std::string& name) { return std::all_of(name.begin(), name.end(), isIdent); }

template <class F>
auto located(const Line& l, std::size_t base, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError& e) {
        fail(l, base + static_cast<std::size_t>(std::max(e.column(), 1)) - 1, e.code(), e.what());
    }
}

ContactMap patternAt(const ContactGraphPtr& g, const Line& l, std::size_t from, std::size_t to) {
    std::string_view text = std::string_view(l.text).substr(from, to - from);
    return located(l, from, [&] { return parsePattern(g, text); });
}

Expr exprAt(const ContactGraphPtr& g, const Line& l, std::size_t from, std::size_t to = std::string::npos) {
    std::string_view text = std::string_view(l.text).substr(from, to == std::string::npos ? to : to - from);
    if (text.find_first_not_of(" \t") == std::string_view::npos) fail(l, from, "E008", "expected an expression");
    return located(l, from, [&] { return parseExpr(g, text); });
}

double numberAt(Cursor& c) {
    c.skip();
    std::string w = c.word();
    double v = 0.0;
    auto res = std::from_chars(w.data(), w.data() + w.size(), v);
    if (res.ec != std::errc() || res.ptr != w.data() + w.size() || !std::isfinite(v)) {
        c.seek(c.pos() - w.size());
        c.fail("E008", "expected a number");
    }
    return v;
}

AgentDecl parseAgentDecl(Cursor& c) {
    AgentDecl a;
    a.name = c.ident();
    c.expect("(");
    std::set<std::string> seen;
    if (!c.accept(")")) {
        do {
            c.skip();
            std::size_t at = c.pos();
            SiteDecl s;
            s.name = c.ident();
            if (c.accept("{")) {
                while (!c.accept("}")) s.states.push_back(c.ident());
            } else {
                while (c.accept("~")) s.states.push_back(c.ident());
            }
            if (!seen.insert(s.name).second) {
                c.seek(at);
                c.fail("E008", "site '" + s.name + "' declared twice");
            }
            std::set<std::string> st(s.states.begin(), s.states.end());
            if (st.size() != s.states.size()) {
                c.seek(at);
                c.fail("E008", "site '" + s.name + "' repeats a state");
            }
            a.sites.push_back(std::move(s));
        } while (c.accept(","));
        c.expect(")");
    }
    if (!c.atEnd()) c.fail("E008", "unexpected text after agent declaration");
    return a;
}

std::pair<std::string, std::string> siteRef(Cursor& c) {
    std::string agent = c.ident();
    c.expect(".");
    return {agent, c.ident()};
}

struct Statement {
    std::string keyword;  // empty for rule lines
    std::size_t body = 0;
    const Line* line = nullptr;
};

void collectEdges(const ContactMap& h, std::set<std::pair<int, int>>& out) {
    for (const Site& s : h.sites())
        if (s.partner != kNone) {
            int a = s.type, b = h.site(s.partner).type;
            out.emplace(std::min(a, b), std::max(a, b));
        }
}

void collectEdges(const Expr& e, std::set<std::pair<int, int>>& out) {
    if (e.empty()) return;
    if (e.kind() == Expr::Kind::Count) collectEdges(e.pattern(), out);
    for (const Expr& a : e.args()) collectEdges(a, out);
}

class ModelParser {
public:
    explicit ModelParser(std::string_view text) : lines_(splitLines(text)) {}

    ModelFile run() {
        std::vector<Statement> body;
        for (const Line& l : lines_) {
            Statement st;
            st.line = &l;
            std::size_t p = l.text.find_first_not_of(" \t");
            if (l.text[p] == '%') {
                std::size_t colon = l.text.find(':', p);
                std::size_t stop = p + 1;
                while (stop < l.text.size() && (isIdent(l.text[stop]))) ++stop;
                if (colon == std::string::npos || l.text.find_first_not_of(" \t", stop) != colon)
                    fail(l, stop, "E008", "expected ':' after section keyword");
                st.keyword = l.text.substr(p + 1, stop - p - 1);
                st.body = colon + 1;
                static const std::set<std::string> known{"agent", "bond", "param", "var",  "energy",
                                                         "gen",   "policy", "init", "obs", "intervention"};
                if (!known.count(st.keyword)) fail(l, p, "E008", "unknown section '%" + st.keyword + "'");
            }
            if (st.keyword == "agent") {
                Cursor c(l, st.body);
                std::size_t at = (c.skip(), c.pos());
                AgentDecl a = parseAgentDecl(c);
                for (const auto& other : model_.agents)
                    if (other.name == a.name) fail(l, at, "E008", "agent '" + a.name + "' declared twice");
                model_.agents.push_back(std::move(a));
            } else if (st.keyword == "bond") {
                bondLines_.push_back(&l);
                Cursor c(l, st.body);
                BondDecl b;
                std::tie(b.agentA, b.siteA) = siteRef(c);
                c.accept("--");
                std::tie(b.agentB, b.siteB) = siteRef(c);
                if (!c.atEnd()) c.fail("E008", "unexpected text after bond declaration");
                model_.bonds.push_back(std::move(b));
            } else {
                body.push_back(st);
            }
        }
        if (model_.agents.empty())
            throw ParseError("E001", "missing %agent section", lines_.empty() ? 1 : lines_.front().pos.front().first, 1);

        if (model_.bonds.empty()) {
            auto open = permissiveGraph();
            parseBody(body, open);
            std::set<std::pair<int, int>> edges;
            for (const auto& e : model_.energies) collectEdges(e.pattern, edges);
            for (const auto& g : model_.generators) {
                collectEdges(g.lhs, edges);
                collectEdges(g.rhs, edges);
            }
            for (const auto& r : model_.rules) {
                collectEdges(r.lhs, edges);
                collectEdges(r.rhs, edges);
                collectEdges(r.rate, edges);
                collectEdges(r.reverseRate, edges);
            }
            for (const auto& i : model_.inits) collectEdges(i.complex, edges);
            for (const auto& o : model_.observables) collectEdges(o.value, edges);
            for (const auto& p : model_.params) collectEdges(p.value, edges);
            for (const auto& e : model_.energies) collectEdges(e.cost, edges);
            for (auto [a, b] : edges) {
                const auto& sa = open->siteType(a);
                const auto& sb = open->siteType(b);
                model_.bonds.push_back(
                    {open->agentType(sa.owner).name, sa.name, open->agentType(sb.owner).name, sb.name});
            }
            model_.inferredBonds = true;
        }
        model_.graph = graphOrFail();
        parseBody(body, model_.graph);
        return std::move(model_);
    }

private:
    ContactGraphPtr permissiveGraph() {
        auto g = std::make_shared<ContactGraph>();
        addAgents(*g);
        for (std::size_t a = 0; a < g->siteTypeCount(); ++a)
            for (std::size_t b = a; b < g->siteTypeCount(); ++b) g->addEdgeType(static_cast<int>(a), static_cast<int>(b));
        return g;
    }

    void addAgents(ContactGraph& g) {
        for (const auto& a : model_.agents) {
            int t = g.addAgentType(a.name);
            for (const auto& s : a.sites) g.addSiteType(t, s.name, s.states);
        }
    }

    ContactGraphPtr graphOrFail() {
        try {
            return buildContactGraph(model_.agents, model_.bonds);
        } catch (const ParseError& e) {
            std::size_t i = static_cast<std::size_t>(e.line());
            if (i < bondLines_.size()) fail(*bondLines_[i], 0, e.code(), e.what());
            throw;
        }
    }

    void parseBody(const std::vector<Statement>& body, const ContactGraphPtr& g) {
        model_.params.clear();
        model_.energies.clear();
        model_.generators.clear();
        model_.policy.reset();
        model_.rules.clear();
        model_.inits.clear();
        model_.observables.clear();
        model_.interventions.clear();
        declared_.clear();
        const Line* policyLine = nullptr;
        for (const Statement& st : body) {
            const Line& l = *st.line;
            Cursor c(l, st.body);
            if (st.keyword.empty()) {
                model_.rules.push_back(rule(g, c));
            } else if (st.keyword == "param" || st.keyword == "var") {
                ParamDecl p;
                c.skip();
                std::size_t at = c.pos();
                p.name = c.quoted();
                if (declared_.count(p.name)) fail(l, at, "E008", "parameter '" + p.name + "' declared twice");
                p.value = exprAt(g, l, c.pos());
                checkParams(l, p.value);
                if (p.value.usesCounts()) fail(l, at, "E008", "parameters cannot depend on pattern counts");
                declared_.insert(p.name);
                model_.params.push_back(std::move(p));
            } else if (st.keyword == "energy") {
                EnergyDecl e;
                c.skip();
                std::size_t at = c.pos();
                e.name = c.quoted();
                if (!validName(e.name)) fail(l, at, "E008", "energy pattern names use letters, digits and '_'");
                for (const auto& other : model_.energies)
                    if (other.name == e.name) fail(l, at, "E008", "energy pattern '" + e.name + "' declared twice");
                std::size_t atSign = findTopLevel(l.text, "@", c.pos());
                if (atSign == std::string::npos) fail(l, l.text.size(), "E008", "expected '@ cost'");
                c.skip();
                std::size_t pat = c.pos();
                e.pattern = patternAt(g, l, pat, atSign);
                if (e.pattern.agentCount() == 0 || connectedComponents(e.pattern).size() != 1)
                    fail(l, pat, "E006", "energy pattern '" + e.name + "' is not connected");
                e.cost = exprAt(g, l, atSign + 1);
                checkParams(l, e.cost);
                if (e.cost.usesCounts()) fail(l, atSign, "E008", "costs cannot depend on pattern counts");
                model_.energies.push_back(std::move(e));
            } else if (st.keyword == "gen") {
                model_.generators.push_back(generator(g, c));
            } else if (st.keyword == "policy") {
                if (model_.policy) fail(l, 0, "E008", "%policy given twice");
                PolicyDecl p;
                p.kind = c.word();
                static const std::set<std::string> kinds{"metropolis", "symmetric", "log-affine", "nonlinear"};
                if (!kinds.count(p.kind)) {
                    c.seek(c.pos() - p.kind.size());
                    c.fail("E009", "unknown policy '" + p.kind + "'");
                }
                while (!c.atEnd()) {
                    std::size_t at = c.pos();
                    std::string w = c.word();
                    std::size_t eq = w.find('=');
                    double v = 0.0;
                    auto res = eq == std::string::npos ? std::from_chars_result{w.data(), std::errc::invalid_argument}
                                                       : std::from_chars(w.data() + eq + 1, w.data() + w.size(), v);
                    if (res.ec != std::errc() || res.ptr != w.data() + w.size() || !std::isfinite(v))
                        fail(l, at, "E008", "expected key=number");
                    p.options.emplace_back(w.substr(0, eq), v);
                }
                model_.policy = std::move(p);
                policyLine = &l;
            } else if (st.keyword == "init") {
                InitDecl i;
                c.skip();
                std::size_t at = c.pos();
                std::string w = c.word();
                auto res = std::from_chars(w.data(), w.data() + w.size(), i.count);
                if (res.ec != std::errc() || res.ptr != w.data() + w.size() || i.count < 0)
                    fail(l, at, "E008", "expected a nonnegative agent count");
                c.skip();
                i.complex = patternAt(g, l, c.pos(), l.text.size());
                for (const Site& s : i.complex.sites())
                    if (s.owner == kNone) fail(l, c.pos(), "E008", "initial complexes cannot use binding types");
                model_.inits.push_back(std::move(i));
            } else if (st.keyword == "obs") {
                ObsDecl o;
                o.name = c.quoted();
                o.value = exprAt(g, l, c.pos());
                checkParams(l, o.value);
                model_.observables.push_back(std::move(o));
            } else if (st.keyword == "intervention") {
                InterventionDecl iv;
                iv.time = numberAt(c);
                if (iv.time < 0) c.fail("E008", "intervention time must be nonnegative");
                c.skip();
                std::size_t at = c.pos();
                std::tie(iv.agent, iv.site) = siteRef(c);
                c.expect("~");
                iv.state = c.ident();
                if (!c.atEnd()) {
                    if (c.word() != "release") c.fail("E008", "expected 'release' or end of line");
                    iv.release = true;
                }
                if (!c.atEnd()) c.fail("E008", "unexpected text after intervention");
                auto at_ = g->findAgentType(iv.agent);
                if (!at_) fail(l, at, "E002", "unknown agent '" + iv.agent + "'");
                auto site = g->findSiteType(*at_, iv.site);
                if (!site) fail(l, at, "E003", "agent '" + iv.agent + "' has no site '" + iv.site + "'");
                if (!g->findState(*site, iv.state))
                    fail(l, at, "E004", "site " + g->siteLabel(*site) + " has no state '" + iv.state + "'");
                model_.interventions.push_back(std::move(iv));
            }
        }
        if (model_.policy) checkPolicy(*policyLine);
    }

    void checkParams(const Line& l, const Expr& e) {
        std::set<std::string> used;
        e.collectParams(used);
        for (const auto& name : used)
            if (!declared_.count(name)) {
                std::size_t at = l.text.find("'" + name + "'");
                fail(l, at == std::string::npos ? 0 : at, "E007", "undefined parameter '" + name + "'");
            }
    }

    // Splits `lhs <-> rhs` / `lhs -> rhs`; returns the arrow offset.
    std::pair<std::size_t, bool> arrow(const Line& l, std::size_t from) {
        std::size_t both = findTopLevel(l.text, "<->", from);
        if (both != std::string::npos) return {both, true};
        std::size_t one = findTopLevel(l.text, "->", from);
        if (one == std::string::npos) fail(l, from, "E008", "expected '->' or '<->'");
        return {one, false};
    }

    GeneratorDecl generator(const ContactGraphPtr& g, Cursor& c) {
        const Line& l = c.line();
        GeneratorDecl d;
        c.skip();
        std::size_t at = c.pos();
        d.name = c.quoted();
        if (!validName(d.name)) fail(l, at, "E008", "generator names use letters, digits and '_'");
        for (const auto& other : model_.generators)
            if (other.name == d.name) fail(l, at, "E008", "generator '" + d.name + "' declared twice");
        auto [arr, both] = arrow(l, c.pos());
        if (!both) fail(l, arr, "E005", "generator '" + d.name + "' must be reversible ('<->')");
        if (findTopLevel(l.text, "@", c.pos()) != std::string::npos)
            fail(l, findTopLevel(l.text, "@", c.pos()), "E008", "generators take no rate; rates come from %policy");
        d.lhs = patternAt(g, l, c.pos(), arr);
        d.rhs = patternAt(g, l, arr + 3, l.text.size());
        try {
            Rule r(d.name, d.lhs, d.rhs);
            if (r.modifiedSites().empty()) fail(l, arr, "E005", "generator '" + d.name + "' changes nothing");
        } catch (const InvalidArgument& e) {
            fail(l, arr, "E005", std::string(e.what()) + " (generators must be agent-preserving)");
        }
        return d;
    }

    RuleDecl rule(const ContactGraphPtr& g, Cursor& c) {
        const Line& l = c.line();
        RuleDecl d;
        c.skip();
        if (c.rest().substr(0, 1) == "'") d.name = c.quoted();
        auto [arr, both] = arrow(l, c.pos());
        std::size_t atSign = findTopLevel(l.text, "@", arr);
        if (atSign == std::string::npos) fail(l, l.text.size(), "E008", "expected '@ rate'");
        d.bidirectional = both;
        d.lhs = patternAt(g, l, c.pos(), arr);
        d.rhs = patternAt(g, l, arr + (both ? 3 : 2), atSign);
        if (both) {
            std::size_t comma = findTopLevel(l.text, ",", atSign + 1);
            if (comma == std::string::npos) fail(l, l.text.size(), "E008", "'<->' needs two rates");
            d.rate = exprAt(g, l, atSign + 1, comma);
            d.reverseRate = exprAt(g, l, comma + 1);
            checkParams(l, d.reverseRate);
        } else {
            d.rate = exprAt(g, l, atSign + 1);
        }
        checkParams(l, d.rate);
        if (d.rate.usesCounts() || (both && d.reverseRate.usesCounts()))
            fail(l, atSign, "E008", "rates cannot depend on pattern counts");
        try {
            Rule r(d.name.empty() ? "rule" : d.name, d.lhs, d.rhs);
        } catch (const InvalidArgument& e) {
            fail(l, arr, "E005", std::string(e.what()) + " (rules must be agent-preserving)");
        }
        return d;
    }

    void checkPolicy(const Line& l) {
        const PolicyDecl& p = *model_.policy;
        auto hasGen = [&](const std::string& n) {
            return std::any_of(model_.generators.begin(), model_.generators.end(),
                               [&](const GeneratorDecl& d) { return d.name == n; });
        };
        auto hasEnergy = [&](const std::string& n) {
            return std::any_of(model_.energies.begin(), model_.energies.end(),
                               [&](const EnergyDecl& d) { return d.name == n; });
        };
        for (const auto& [key, value] : p.options) {
            std::size_t at = l.text.find(key);
            auto bad = [&](const std::string& msg) { fail(l, at, "E009", msg); };
            std::vector<std::string> parts;
            std::size_t s = 0;
            while (true) {
                std::size_t d = key.find('.', s);
                parts.push_back(key.substr(s, d == std::string::npos ? d : d - s));
                if (d == std::string::npos) break;
                s = d + 1;
            }
            const std::string& head = parts[0];
            if (p.kind == "symmetric" && head == "C" && parts.size() == 2) {
                if (!hasGen(parts[1])) bad("unknown generator '" + parts[1] + "'");
                if (!(value > 0)) bad("time scale must be positive");
            } else if (p.kind == "log-affine" && head == "c" && parts.size() == 2) {
                if (!hasGen(parts[1])) bad("unknown generator '" + parts[1] + "'");
            } else if (p.kind == "log-affine" && head == "A" && parts.size() == 4) {
                if (!hasGen(parts[1])) bad("unknown generator '" + parts[1] + "'");
                if (!hasEnergy(parts[2]) || !hasEnergy(parts[3])) bad("unknown energy pattern in '" + key + "'");
            } else if (p.kind == "nonlinear" && (head == "alpha" || head == "beta") && parts.size() == 2) {
                if (!hasGen(parts[1])) bad("unknown generator '" + parts[1] + "'");
            } else if (p.kind == "nonlinear" && head == "quadratic" && parts.size() == 2) {
                if (!hasEnergy(parts[1])) bad("unknown energy pattern '" + parts[1] + "'");
            } else {
                bad("option '" + key + "' does not apply to the " + p.kind + " policy");
            }
        }
    }

    std::vector<Line> lines_;
    std::vector<const Line*> bondLines_;
    std::set<std::string> declared_;
    ModelFile model_;
};

std::string printAgent(const AgentDecl& a) {
    std::string out = a.name + "(";
    for (std::size_t i = 0; i < a.sites.size(); ++i) {
        if (i) out += ", ";
        out += a.sites[i].name;
        for (const auto& s : a.sites[i].states) out += "~" + s;
    }
    return out + ")";
}

}  // namespace

ContactGraphPtr buildContactGraph(const std::vector<AgentDecl>& agents, const std::vector<BondDecl>& bonds) {
    auto g = std::make_shared<ContactGraph>();
    for (const auto& a : agents) {
        int t = g->addAgentType(a.name);
        for (const auto& s : a.sites) g->addSiteType(t, s.name, s.states);
    }
    // The line of a ParseError raised here is the index of the offending bond.
    for (std::size_t i = 0; i < bonds.size(); ++i) {
        const BondDecl& b = bonds[i];
        int ends[2];
        const std::string* names[2][2] = {{&b.agentA, &b.siteA}, {&b.agentB, &b.siteB}};
        for (int k = 0; k < 2; ++k) {
            auto at = g->findAgentType(*names[k][0]);
            if (!at) throw ParseError("E002", "unknown agent '" + *names[k][0] + "'", static_cast<int>(i), 0);
            auto st = g->findSiteType(*at, *names[k][1]);
            if (!st)
                throw ParseError("E003", "agent '" + *names[k][0] + "' has no site '" + *names[k][1] + "'",
                                 static_cast<int>(i), 0);
            ends[k] = *st;
        }
        g->addEdgeType(ends[0], ends[1]);
    }
    return g;
}

ModelFile parseModel(std::string_view text) { return ModelParser(text).run(); }

bool ModelFile::operator==(const ModelFile& o) const {
    return agents == o.agents && bonds == o.bonds && inferredBonds == o.inferredBonds && params == o.params &&
           energies == o.energies && generators == o.generators && policy == o.policy && rules == o.rules &&
           inits == o.inits && observables == o.observables && interventions == o.interventions;
}

std::string ModelFile::print() const {
    std::string out;
    for (const auto& a : agents) out += "%agent: " + printAgent(a) + "\n";
    if (!inferredBonds)
        for (const auto& b : bonds) out += "%bond: " + b.agentA + "." + b.siteA + " " + b.agentB + "." + b.siteB + "\n";
    for (const auto& p : params) out += "%param: '" + p.name + "' " + p.value.print() + "\n";
    for (const auto& e : energies)
        out += "%energy: '" + e.name + "' " + formatPattern(e.pattern) + " @ " + e.cost.print() + "\n";
    for (const auto& g : generators)
        out += "%gen: '" + g.name + "' " + formatPattern(g.lhs) + " <-> " + formatPattern(g.rhs) + "\n";
    if (policy) {
        out += "%policy: " + policy->kind;
        for (const auto& [k, v] : policy->options) out += " " + k + "=" + formatNumber(v);
        out += "\n";
    }
    for (const auto& r : rules) {
        if (!r.name.empty()) out += "'" + r.name + "' ";
        out += formatPattern(r.lhs) + (r.bidirectional ? " <-> " : " -> ") + formatPattern(r.rhs) + " @ " +
               r.rate.print();
        if (r.bidirectional) out += ", " + r.reverseRate.print();
        out += "\n";
    }
    for (const auto& i : inits) out += "%init: " + std::to_string(i.count) + " " + formatPattern(i.complex) + "\n";
    for (const auto& o : observables) out += "%obs: '" + o.name + "' " + o.value.print() + "\n";
    for (const auto& iv : interventions)
        out += "%intervention: " + formatNumber(iv.time) + " " + iv.agent + "." + iv.site + "~" + iv.state +
               (iv.release ? " release" : "") + "\n";
    return out;
}

}  // namespace thermograph
