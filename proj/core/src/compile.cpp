#include "thermograph/compile.hpp"

#include "thermograph/errors.hpp"

#include <cmath>

namespace thermograph {

std::vector<std::size_t> CompiledModel::membersOf(const std::string& generator) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rules.size(); ++i)
        if (rules[i].generator == generator && !rules[i].inverse) out.push_back(i);
    return out;
}

ModelFile withPolicy(const ModelFile& model, const std::string& policyBody) {
    ModelFile m = model;
    m.policy.reset();
    return parseModel(m.print() + "%policy: " + policyBody + "\n");
}

ContactMap initialMixture(const ContactGraphPtr& graph, const std::vector<InitDecl>& inits) {
    const ContactGraph& c = *graph;
    ContactMap x(graph);
    for (const InitDecl& init : inits) {
        const ContactMap& h = init.complex;
        for (long k = 0; k < init.count; ++k) {
            std::vector<int> map(static_cast<std::size_t>(h.siteCount()), kNone);
            for (int u = 0; u < h.agentCount(); ++u) {
                int a = x.addAgent(h.agent(u).type);
                const auto& slots = h.agent(u).slots;
                for (std::size_t slot = 0; slot < slots.size(); ++slot) {
                    int type = c.siteTypeAt(h.agent(u).type, static_cast<int>(slot));
                    int state = c.hasStates(type) ? 0 : kNone;
                    if (slots[slot] != kNone && h.site(slots[slot]).state != kNone) state = h.site(slots[slot]).state;
                    int s = x.addSite(a, type, state);
                    if (slots[slot] != kNone) map[slots[slot]] = s;
                }
            }
            for (int s = 0; s < h.siteCount(); ++s) {
                int p = h.site(s).partner;
                if (p != kNone && s < p) x.bind(map[s], map[p]);
            }
        }
    }
    return x;
}

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) { throw ParseError(code, msg, 0, 0); }

RatePolicy buildPolicy(const PolicyDecl& decl, EnergyModel& energy) {
    auto split = [](const std::string& key) {
        std::vector<std::string> parts;
        std::size_t s = 0;
        while (true) {
            std::size_t d = key.find('.', s);
            parts.push_back(key.substr(s, d == std::string::npos ? d : d - s));
            if (d == std::string::npos) return parts;
            s = d + 1;
        }
    };
    auto patternIndex = [&](const std::string& name) {
        for (std::size_t i = 0; i < energy.names.size(); ++i)
            if (energy.names[i] == name) return i;
        fail("E009", "unknown energy pattern '" + name + "'");
    };
    if (decl.kind == "metropolis") return RatePolicy::metropolis();
    if (decl.kind == "symmetric") {
        std::map<std::string, double> scales;
        for (const auto& [key, v] : decl.options) scales[split(key)[1]] = v;
        return RatePolicy::symmetric(std::move(scales));
    }
    if (decl.kind == "log-affine") {
        std::size_t n = energy.size();
        std::map<std::string, AffineParams> params;
        auto entry = [&](const std::string& g) -> AffineParams& {
            auto it = params.find(g);
            if (it != params.end()) return it->second;
            AffineParams p;
            p.A.assign(n * n, 0.0);
            for (std::size_t i = 0; i < n; ++i) p.A[i * n + i] = 0.5;
            return params.emplace(g, std::move(p)).first->second;
        };
        for (const auto& [key, v] : decl.options) {
            auto parts = split(key);
            if (parts[0] == "c") entry(parts[1]).c = v;
            else entry(parts[1]).A[patternIndex(parts[2]) * n + patternIndex(parts[3])] = v;
        }
        return RatePolicy::logAffine(std::move(params));
    }
    std::map<std::string, NonlinearParams> params;
    for (const auto& [key, v] : decl.options) {
        auto parts = split(key);
        if (parts[0] == "alpha") params[parts[1]].alpha = v;
        else if (parts[0] == "beta") params[parts[1]].beta = v;
        else {
            if (energy.quadratic.empty()) energy.quadratic.assign(energy.size(), 0.0);
            energy.quadratic[patternIndex(parts[1])] = v;
        }
    }
    return RatePolicy::nonlinear(std::move(params));
}

}  // namespace

CompiledModel compileModel(const ModelFile& input, const CompileOptions& options) {
    CompiledModel out;
    out.source = options.policyOverride ? withPolicy(input, *options.policyOverride) : input;
    const ModelFile& m = out.source;
    out.graph = m.graph;

    for (const auto& p : m.params) out.params[p.name] = p.value.eval(out.params);
    for (const auto& e : m.energies) {
        out.energy.names.push_back(e.name);
        out.energy.patterns.push_back(e.pattern);
        out.energy.costs.push_back(e.cost.eval(out.params));
    }

    if (!m.generators.empty() && !m.rules.empty())
        fail("E008", "a model gives either %gen generators or explicit rule lines, not both");

    if (!m.rules.empty()) {
        out.explicitRules = true;
        if (m.policy) fail("E009", "%policy does not apply to explicit rule lines");
        std::map<std::string, double> logRates;
        struct Member {
            std::string name;
            Rule rule;
            double rate;
            std::size_t partner;
        };
        std::vector<Member> members;
        auto rate = [&](const Expr& e, const std::string& name) {
            double k = e.eval(out.params);
            if (!(k >= 0) || std::isinf(k)) fail("E008", "rule '" + name + "' has rate " + formatNumber(k));
            return k;
        };
        for (std::size_t i = 0; i < m.rules.size(); ++i) {
            const RuleDecl& d = m.rules[i];
            std::string name = d.name.empty() ? "r" + std::to_string(i + 1) : d.name;
            members.push_back({name, Rule(name, d.lhs, d.rhs), rate(d.rate, name), members.size()});
            if (d.bidirectional) {
                std::string back = invertedName(name);
                members.push_back({back, Rule(back, d.rhs, d.lhs), rate(d.reverseRate, back), members.size() - 1});
                members[members.size() - 2].partner = members.size() - 1;
            }
        }
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (logRates.count(members[i].name)) fail("E008", "rule name '" + members[i].name + "' used twice");
            logRates[members[i].name] = std::log(members[i].rate);
        }
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (members[i].partner != i) continue;
            for (std::size_t j = 0; j < members.size(); ++j)
                if (j != i && members[j].partner == j && members[j].rule.lhs() == members[i].rule.rhs() &&
                    members[j].rule.rhs() == members[i].rule.lhs()) {
                    members[i].partner = j;
                    members[j].partner = i;
                    break;
                }
            if (members[i].partner == i) fail("E005", "rule '" + members[i].name + "' has no reverse rule");
        }
        for (std::size_t i = 0; i < members.size(); ++i) {
            const Member& mb = members[i];
            Extension ext{identityEmbedding(mb.rule.lhs()), mb.rule.lhs(), mb.rule.rhs()};
            BalanceVector delta;
            try {
                delta = balanceVector(mb.rule, ext, out.energy.patterns);
            } catch (const InvalidArgument&) {
                fail("E010", "rule '" + mb.name + "' is not balanced against the energy patterns");
            }
            bool inverse = mb.partner < i;
            const std::string& gen = inverse ? members[mb.partner].name : mb.name;
            out.rules.push_back({RefinedRule{mb.name, ext, mb.rule, delta, {}}, gen, inverse, mb.partner});
        }
        out.policy = RatePolicy::table(std::move(logRates));
    } else {
        for (const auto& g : m.generators) {
            out.generators.emplace_back(g.name, g.lhs, g.rhs);
            appendGenerator(out.rules, out.generators.back(),
                            enumerateMature(out.generators.back(), out.energy.patterns, options.refine));
        }
        out.policy = buildPolicy(m.policy ? *m.policy : PolicyDecl{"symmetric", {}}, out.energy);
    }
    out.energy.validate();

    out.initial = initialMixture(out.graph, m.inits);
    for (const auto& o : m.observables) {
        Expr e = o.value;
        auto params = out.params;
        out.observables.push_back({o.name, [e, params](const ContactMap& x) {
                                       return e.eval(params, [&x](const ContactMap& p) {
                                           return static_cast<double>(countEmbeddings(p, x));
                                       });
                                   }});
    }
    for (const auto& iv : m.interventions) {
        int agent = *out.graph->findAgentType(iv.agent);
        int site = *out.graph->findSiteType(agent, iv.site);
        out.interventions.push_back({iv.time, site, *out.graph->findState(site, iv.state), iv.release});
    }
    return out;
}

}  // namespace thermograph
