#include "thermograph/kasim_export.hpp"

#include "thermograph/errors.hpp"
#include "thermograph/notation.hpp"

#include <cmath>
#include <map>

namespace thermograph {

namespace {

// 'ab' + 't' over the nonzero entries of delta
std::string terms(const EnergyModel& energy, const BalanceVector& delta, std::size_t* count) {
    std::string out;
    *count = 0;
    for (std::size_t c = 0; c < delta.size(); ++c) {
        long d = delta[c];
        if (d == 0) continue;
        std::string name = "'" + energy.names[c] + "'";
        long mag = d < 0 ? -d : d;
        std::string term = mag == 1 ? name : std::to_string(mag) + " * " + name;
        if (*count == 0) out += d < 0 ? "-" + term : term;
        else out += (d < 0 ? " - " : " + ") + term;
        ++*count;
    }
    return out;
}

std::string scaled(const std::string& factor, const std::string& sum, std::size_t n) {
    return "(" + factor + " * " + (n == 1 ? sum : "(" + sum + ")") + ")";
}

}  // namespace

std::string kasimRate(const CompiledModel& model, std::size_t i) {
    const RatedRule& r = model.rules.at(i);
    const RatePolicy& policy = model.policy;
    if (policy.kind() == PolicyKind::Nonlinear)
        throw Error("EXPORT", "nonlinear policy is not exportable: its rates depend on the current state");
    if (policy.kind() == PolicyKind::Table) {
        const RuleDecl* decl = nullptr;
        bool reverse = false;
        for (std::size_t k = 0, member = 0; k < model.source.rules.size(); ++k) {
            const RuleDecl& d = model.source.rules[k];
            if (member == i) decl = &d;
            if (d.bidirectional && member + 1 == i) {
                decl = &d;
                reverse = true;
            }
            member += d.bidirectional ? 2 : 1;
        }
        if (!decl) throw InvalidArgument("rule index out of range");
        return (reverse ? decl->reverseRate : decl->rate).print();
    }

    const RatedRule& forward = r.inverse ? model.rules[r.mirror] : r;
    std::size_t n = 0;
    std::string sum = terms(model.energy, forward.refined.delta, &n);
    std::string prefix;
    switch (policy.kind()) {
        case PolicyKind::Metropolis:
            if (n == 0 || r.inverse) return "[exp] (0)";
            return "[exp] " + scaled("-1", sum, n);
        case PolicyKind::Symmetric: {
            if (auto it = policy.timeScales().find(r.generator); it != policy.timeScales().end() && it->second != 1.0)
                prefix = formatNumber(it->second) + " * ";
            if (n == 0) return prefix + "[exp] (0)";
            std::string body = scaled("-1/2", sum, n);
            return prefix + "[exp] " + (r.inverse ? "-" + body : body);
        }
        case PolicyKind::LogAffine: {
            auto it = policy.affine().find(r.generator);
            if (it == policy.affine().end()) {
                if (n == 0) return "[exp] (0)";
                std::string body = scaled("-1/2", sum, n);
                return "[exp] " + (r.inverse ? "-" + body : body);
            }
            const AffineParams& p = it->second;
            std::size_t m = model.energy.size();
            std::string out = "[exp] (" + formatNumber(p.c);
            for (std::size_t j = 0; j < m; ++j) {
                double w = 0.0;
                for (std::size_t k = 0; k < m; ++k) {
                    double a = p.A[k * m + j];
                    if (r.inverse) a = (k == j ? 1.0 : 0.0) - a;
                    w -= static_cast<double>(r.refined.delta[k]) * a;
                }
                if (w == 0.0) continue;
                out += (w < 0 ? " - " : " + ") + formatNumber(std::abs(w)) + " * '" + model.energy.names[j] + "'";
            }
            return out + ")";
        }
        default: break;
    }
    return "[exp] (0)";
}

KasimExport exportKasim(const CompiledModel& model) {
    KasimExport out;
    std::string& t = out.text;
    t += "# Agent signatures\n";
    for (const auto& a : model.source.agents) {
        t += "%agent: " + a.name + "(";
        for (std::size_t i = 0; i < a.sites.size(); ++i) {
            if (i) t += ",";
            t += a.sites[i].name;
            for (const auto& s : a.sites[i].states) t += "~" + s;
        }
        t += ")\n";
    }

    t += "\n# Energy costs\n";
    std::map<std::string, double> vars;
    for (const auto& p : model.source.params) {
        vars[p.name] = model.params.at(p.name);
        t += "%var: '" + p.name + "' " + p.value.print() + "\n";
    }
    if (!model.explicitRules)
        for (std::size_t c = 0; c < model.energy.size(); ++c) {
            const std::string& name = model.energy.names[c];
            if (auto it = vars.find(name); it != vars.end()) {
                if (it->second != model.energy.costs[c])
                    throw Error("EXPORT", "parameter '" + name + "' differs from the cost of the pattern of that name");
                continue;
            }
            t += "%var: '" + name + "' " + formatNumber(model.energy.costs[c]) + "\n";
        }

    t += "\n# Initial state\n";
    std::vector<std::string> order;
    std::map<std::string, long> counts;
    for (const auto& comp : canonicalComponents(model.initial)) {
        std::string s = formatPattern(model.initial, comp);
        if (counts[s]++ == 0) order.push_back(s);
    }
    for (const auto& s : order) t += "%init: " + std::to_string(counts[s]) + " " + s + "\n";

    if (!model.source.observables.empty()) {
        t += "\n# Observables\n";
        for (const auto& o : model.source.observables) t += "%obs: '" + o.name + "' " + o.value.print() + "\n";
    }

    t += "\n# Rules\n";
    std::string group;
    for (std::size_t i = 0; i < model.rules.size(); ++i) {
        const RatedRule& r = model.rules[i];
        if (!model.explicitRules) {
            for (const Rule& g : model.generators) {
                if (g.name() != r.generator) continue;
                std::string header = r.inverse ? formatPattern(g.rhs()) + " -> " + formatPattern(g.lhs())
                                               : formatPattern(g.lhs()) + " -> " + formatPattern(g.rhs());
                if (header != group) {
                    if (!group.empty()) t += "\n";
                    t += "# " + header + " refines into:\n";
                    group = header;
                }
            }
        }
        const Rule& rule = r.refined.rule;
        std::string line = "'" + r.refined.name + "' " + formatPattern(rule.lhs()) + " -> " +
                           formatPattern(rule.rhs()) + " @ " + kasimRate(model, i);
        out.ruleLines.push_back(line);
        t += line + "\n";
    }
    return out;
}

}  // namespace thermograph
