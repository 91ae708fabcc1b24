#include "thermograph/verify.hpp"

#include "thermograph/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace thermograph {

std::size_t StateSpace::find(const ContactMap& x) const {
    auto it = index.find(configurationKey(x));
    return it == index.end() ? size() : it->second;
}

StateSpace enumerateComponent(const ContactMap& initial, const RuleSet& rules, const RatePolicy& policy,
                              const EnergyModel& model, std::size_t cap) {
    if (!isMixture(initial)) throw InvalidArgument("initial state is not a mixture");
    StateSpace space;
    auto add = [&](ContactMap x, std::string key) {
        space.index.emplace(std::move(key), space.size());
        space.counts.push_back(patternCounts(x, model.patterns));
        space.energies.push_back(model.energy(space.counts.back()));
        space.states.push_back(std::move(x));
        space.rates.emplace_back();
        space.events.emplace_back();
    };
    add(initial, configurationKey(initial));
    std::vector<double> fixedRates;
    if (!policy.dependsOnCounts()) fixedRates = policy.logRates(rules, model);
    for (std::size_t head = 0; head < space.size(); ++head) {
        for (std::size_t i = 0; i < rules.size(); ++i) {
            const RatedRule& r = rules[i];
            double logK = fixedRates.empty() ? policy.logRate(r, model, &space.counts[head]) : fixedRates[i];
            double k = std::exp(logK);
            for (const Embedding& e : enumerateEmbeddings(r.refined.rule.lhs(), space.states[head])) {
                ContactMap y = space.states[head];
                applyDelta(r.refined.rule, e, y);
                std::string key = configurationKey(y);
                auto it = space.index.find(key);
                std::size_t to;
                if (it == space.index.end()) {
                    to = space.size();
                    if (to >= cap)
                        throw Error("CAP", "state space exceeds " + std::to_string(cap) + " states (frontier " +
                                               std::to_string(space.size() - head) + ")");
                    add(std::move(y), std::move(key));
                } else {
                    to = it->second;
                }
                for (std::size_t c = 0; c < model.size(); ++c)
                    if (space.counts[to][c] - space.counts[head][c] != r.refined.delta[c]) {
                        ++space.energyViolations;
                        break;
                    }
                if (to == head) continue;
                space.rates[head][to] += k;
                ++space.events[head][to];
            }
        }
    }
    return space;
}

double logPartition(const StateSpace& space) {
    double lo = INFINITY;
    for (double e : space.energies) lo = std::min(lo, e);
    double s = 0.0;
    for (double e : space.energies) s += std::exp(lo - e);
    return -lo + std::log(s);
}

std::vector<double> stationary(const StateSpace& space) {
    double logZ = logPartition(space);
    std::vector<double> pi;
    pi.reserve(space.size());
    for (double e : space.energies) pi.push_back(std::exp(-e - logZ));
    return pi;
}

namespace {

// |a - b| / max(a, b) from log a and log b
double relativeGap(double la, double lb) {
    if (std::isinf(la) && std::isinf(lb)) return 0.0;
    return -std::expm1(-std::abs(la - lb));
}

BalanceReport check(const std::vector<double>& logWeight, const std::vector<std::map<std::size_t, double>>& rates,
                    double threshold) {
    BalanceReport report;
    report.threshold = threshold;
    for (std::size_t x = 0; x < rates.size(); ++x) {
        for (const auto& [y, qxy] : rates[x]) {
            auto back = rates[y].find(x);
            if (back == rates[y].end()) {
                ++report.oneWay;
                report.maxRelativeError = 1.0;
                report.worstFrom = x;
                report.worstTo = y;
                continue;
            }
            if (y < x) continue;
            ++report.pairs;
            double gap = relativeGap(logWeight[x] + std::log(qxy), logWeight[y] + std::log(back->second));
            if (gap > report.maxRelativeError) {
                report.maxRelativeError = gap;
                report.worstFrom = x;
                report.worstTo = y;
            }
        }
    }
    report.pass = report.oneWay == 0 && report.maxRelativeError <= threshold;
    return report;
}

}  // namespace

BalanceReport checkDetailedBalance(const StateSpace& space, double threshold) {
    std::vector<double> logWeight;
    for (double e : space.energies) logWeight.push_back(-e);
    BalanceReport report = check(logWeight, space.rates, threshold);
    report.logZ = logPartition(space);
    for (std::size_t x = 0; x < space.size(); ++x)
        for (const auto& [y, n] : space.events[x]) {
            auto back = space.events[y].find(x);
            if (back == space.events[y].end() || back->second != n) ++report.eventAsymmetries;
        }
    report.energyViolations = space.energyViolations;
    report.pass = report.pass && report.eventAsymmetries == 0;
    return report;
}

BalanceReport checkDetailedBalanceCollapsed(const StateSpace& space, double threshold) {
    std::map<std::string, std::size_t> classOf;
    std::vector<std::size_t> cls(space.size());
    std::vector<std::size_t> representative;
    for (std::size_t x = 0; x < space.size(); ++x) {
        auto [it, fresh] = classOf.emplace(canonicalForm(space.states[x]), classOf.size());
        cls[x] = it->second;
        if (fresh) representative.push_back(x);
    }
    std::size_t n = representative.size();
    std::vector<double> lo(n, INFINITY);
    for (std::size_t x = 0; x < space.size(); ++x) lo[cls[x]] = std::min(lo[cls[x]], space.energies[x]);
    std::vector<double> sum(n, 0.0);
    for (std::size_t x = 0; x < space.size(); ++x) sum[cls[x]] += std::exp(lo[cls[x]] - space.energies[x]);
    std::vector<double> logWeight(n);
    for (std::size_t c = 0; c < n; ++c) logWeight[c] = -lo[c] + std::log(sum[c]);
    std::vector<std::map<std::size_t, double>> rates(n);
    for (std::size_t c = 0; c < n; ++c)
        for (const auto& [y, q] : space.rates[representative[c]])
            if (cls[y] != c) rates[c][cls[y]] += q;
    BalanceReport report = check(logWeight, rates, threshold);
    report.logZ = logPartition(space);
    report.energyViolations = space.energyViolations;
    return report;
}

double stationaryExpectation(const StateSpace& space, const StateFunction& f) {
    auto pi = stationary(space);
    double s = 0.0;
    for (std::size_t x = 0; x < space.size(); ++x) s += pi[x] * f(space.states[x], space.counts[x]);
    return s;
}

std::string BalanceReport::toText() const {
    std::ostringstream out;
    out << "detailed balance: " << (pass ? "PASS" : "FAIL") << "\n"
        << "  pairs checked: " << pairs << "\n"
        << "  max relative error: " << maxRelativeError << " (threshold " << threshold << ")\n"
        << "  worst pair: " << worstFrom << " <-> " << worstTo << "\n"
        << "  log Z: " << logZ << "\n";
    if (oneWay) out << "  one-way transitions: " << oneWay << "\n";
    if (eventAsymmetries) out << "  event-count asymmetries: " << eventAsymmetries << "\n";
    if (energyViolations) out << "  transitions off their balance vector: " << energyViolations << "\n";
    return out.str();
}

std::string BalanceReport::toJson() const {
    nlohmann::json j{{"pass", pass},
                     {"pairs", pairs},
                     {"maxRelativeError", maxRelativeError},
                     {"threshold", threshold},
                     {"worstPair", {worstFrom, worstTo}},
                     {"logZ", logZ},
                     {"oneWay", oneWay},
                     {"eventAsymmetries", eventAsymmetries},
                     {"energyViolations", energyViolations}};
    return j.dump(2);
}

Occupancy recordOccupancy(Simulator& sim, std::size_t events) {
    Occupancy occ;
    for (std::size_t i = 0; i < events; ++i) {
        std::string key = configurationKey(sim.mixture());
        double t0 = sim.time();
        if (sim.step() != StepStatus::Fired) break;
        double dwell = sim.time() - t0;
        occ.time[key] += dwell;
        occ.total += dwell;
        ++occ.events;
    }
    return occ;
}

EmpiricalReport compareEmpirical(const Occupancy& occupancy, const StateSpace& space, double tolerance) {
    return compareEmpirical(occupancy, space, stationary(space), tolerance);
}

EmpiricalReport compareEmpirical(const Occupancy& occupancy, const StateSpace& space, const std::vector<double>& pi,
                                 double tolerance) {
    EmpiricalReport report;
    if (occupancy.total <= 0.0) {
        report.warnings.push_back("no time recorded");
        return report;
    }
    std::unordered_set<std::string> known;
    for (std::size_t x = 0; x < space.size(); ++x) {
        std::string key = configurationKey(space.states[x]);
        double t = 0.0;
        if (auto it = occupancy.time.find(key); it != occupancy.time.end()) t = it->second;
        known.insert(std::move(key));
        double p = t / occupancy.total;
        double d = std::abs(p - pi[x]);
        if (d > report.maxAbsDiff) {
            report.maxAbsDiff = d;
            report.worstState = x;
        }
        if (pi[x] > 0) report.chiSquare += (p - pi[x]) * (p - pi[x]) / pi[x];
    }
    for (const auto& [key, t] : occupancy.time)
        if (!known.count(key)) report.unmatchedTime += t / occupancy.total;
    if (occupancy.events < 100 * space.size())
        report.warnings.push_back("only " + std::to_string(occupancy.events) + " events for " +
                                  std::to_string(space.size()) + " states");
    report.pass = report.maxAbsDiff <= tolerance && report.unmatchedTime <= 1e-12;
    return report;
}

std::string EmpiricalReport::toText() const {
    std::ostringstream out;
    out << "empirical occupancy: " << (pass ? "PASS" : "FAIL") << "\n"
        << "  max |p - pi|: " << maxAbsDiff << " (state " << worstState << ")\n"
        << "  chi-square distance: " << chiSquare << "\n";
    if (unmatchedTime > 0) out << "  time outside the enumerated space: " << unmatchedTime << "\n";
    for (const auto& w : warnings) out << "  warning: " << w << "\n";
    return out.str();
}

std::string EmpiricalReport::toJson() const {
    nlohmann::json j{{"pass", pass},           {"maxAbsDiff", maxAbsDiff}, {"worstState", worstState},
                     {"chiSquare", chiSquare}, {"unmatchedTime", unmatchedTime}, {"warnings", warnings}};
    return j.dump(2);
}

}  // namespace thermograph
