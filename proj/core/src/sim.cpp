#include "thermograph/sim.hpp"

#include "thermograph/errors.hpp"
#include "thermograph/notation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <unordered_map>

namespace thermograph {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

namespace {

// One connected component of a rule's left-hand side, as a pattern of its own.
struct Component {
    ContactMap pattern;
    std::vector<int> agents;  // pattern agent -> lhs agent
    std::vector<int> sites;   // pattern site -> lhs site
};

std::vector<Component> splitComponents(const ContactMap& lhs) {
    std::vector<Component> out;
    for (const auto& block : connectedComponents(lhs)) {
        Component c{ContactMap(lhs.graphPtr()), block, {}};
        std::vector<int> site(static_cast<std::size_t>(lhs.siteCount()), kNone);
        std::vector<int> agent(static_cast<std::size_t>(lhs.agentCount()), kNone);
        for (int u : block) agent[u] = c.pattern.addAgent(lhs.agent(u).type);
        for (int s = 0; s < lhs.siteCount(); ++s) {
            const Site& x = lhs.site(s);
            if (x.owner != kNone && agent[x.owner] != kNone) site[s] = c.pattern.addSite(agent[x.owner], x.type, x.state);
        }
        for (int s = 0; s < lhs.siteCount(); ++s) {
            const Site& x = lhs.site(s);
            if (x.owner == kNone && x.partner != kNone && site[x.partner] != kNone)
                site[s] = c.pattern.addDangling(x.type, x.state);
        }
        c.sites.resize(static_cast<std::size_t>(c.pattern.siteCount()));
        for (int s = 0; s < lhs.siteCount(); ++s) {
            if (site[s] == kNone) continue;
            c.sites[site[s]] = s;
            int p = lhs.site(s).partner;
            if (p != kNone && s < p) c.pattern.bind(site[s], site[p]);
        }
        out.push_back(std::move(c));
    }
    return out;
}

bool touches(const Embedding& e, const std::vector<int>& agents) {
    for (int a : e.agents)
        if (std::find(agents.begin(), agents.end(), a) != agents.end()) return true;
    return false;
}

}  // namespace

struct Simulator::Index {
    // Distinct component patterns (up to isomorphism) and their embeddings.
    std::vector<ContactMap> patterns;
    std::vector<std::vector<Embedding>> sets;
    // Per rule, per component: the shared pattern and where its agents and
    // sites sit in the rule's left-hand side.
    struct Use {
        std::size_t pattern;
        std::vector<int> agents, sites;
    };
    std::vector<std::vector<Use>> uses;

    explicit Index(const RuleSet& rules) {
        std::unordered_map<std::string, std::size_t> known;
        for (const auto& r : rules) {
            uses.emplace_back();
            for (auto& c : splitComponents(r.refined.rule.lhs())) {
                auto [it, fresh] = known.try_emplace(canonicalForm(c.pattern), patterns.size());
                if (fresh) {
                    patterns.push_back(c.pattern);
                    uses.back().push_back({it->second, std::move(c.agents), std::move(c.sites)});
                    continue;
                }
                // Route through an isomorphism from the shared pattern.
                auto iso = enumerateEmbeddings(patterns[it->second], c.pattern).front();
                Use u{it->second, {}, {}};
                for (int v : iso.agents) u.agents.push_back(c.agents[v]);
                for (int s : iso.sites) u.sites.push_back(c.sites[s]);
                uses.back().push_back(std::move(u));
            }
        }
    }

    void rebuild(const ContactMap& x) {
        sets.clear();
        for (const auto& p : patterns) sets.push_back(enumerateEmbeddings(p, x));
    }

    /// Drops embeddings that involve `agents`, then adds the ones that do now.
    void update(const ContactMap& x, const std::vector<int>& agents) {
        for (std::size_t k = 0; k < patterns.size(); ++k) {
            auto& set = sets[k];
            for (std::size_t i = 0; i < set.size();) {
                if (touches(set[i], agents)) {
                    set[i] = std::move(set.back());
                    set.pop_back();
                } else {
                    ++i;
                }
            }
            const ContactMap& p = patterns[k];
            Embedding e;
            for (int u = 0; u < p.agentCount(); ++u)
                for (int a : agents) {
                    if (x.agent(a).type != p.agent(u).type || !embedAt(p, x, u, a, e)) continue;
                    // Keep each new embedding once: found from its first touched agent.
                    bool earlier = false;
                    for (int v = 0; v < u && !earlier; ++v)
                        earlier = std::find(agents.begin(), agents.end(), e.agents[v]) != agents.end();
                    if (!earlier) set.push_back(e);
                }
        }
    }

    double bound(std::size_t r) const {
        double n = 1.0;
        for (const auto& u : uses[r]) n *= static_cast<double>(sets[u.pattern].size());
        return n;
    }

    /// Assembles a left-hand side embedding from one pick per component;
    /// false when two picks share an agent.
    bool assemble(std::size_t r, const ContactMap& lhs, std::mt19937_64& rng, Embedding& out) const {
        out.agents.assign(static_cast<std::size_t>(lhs.agentCount()), kNone);
        out.sites.assign(static_cast<std::size_t>(lhs.siteCount()), kNone);
        for (const auto& u : uses[r]) {
            const auto& set = sets[u.pattern];
            auto idx = std::min(static_cast<std::size_t>(uniform01(rng) * static_cast<double>(set.size())), set.size() - 1);
            const Embedding& e = set[idx];
            for (std::size_t v = 0; v < u.agents.size(); ++v) out.agents[u.agents[v]] = e.agents[v];
            for (std::size_t s = 0; s < u.sites.size(); ++s) out.sites[u.sites[s]] = e.sites[s];
        }
        std::vector<int> seen = out.agents;
        std::sort(seen.begin(), seen.end());
        return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
    }
};

Simulator::Simulator(const RuleSet& rules, const RatePolicy& policy, const EnergyModel& model, ContactMap initial,
                     std::uint64_t seed)
    : rules_(&rules), policy_(&policy), model_(&model), mixture_(std::move(initial)), rng_(seed),
      index_(std::make_unique<Index>(rules)) {
    if (!isMixture(mixture_)) throw InvalidArgument("initial state is not a mixture");
    counts_ = patternCounts(mixture_, model.patterns);
    index_->rebuild(mixture_);
    refreshRates();
}

Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

void Simulator::refreshRates() {
    rates_.resize(rules_->size());
    const PatternCounts* counts = policy_->dependsOnCounts() ? &counts_ : nullptr;
    for (std::size_t i = 0; i < rules_->size(); ++i) rates_[i] = std::exp(policy_->logRate((*rules_)[i], *model_, counts));
}

double Simulator::totalActivity() {
    if (policy_->dependsOnCounts()) refreshRates();
    auto n = embeddingCounts();
    double total = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) total += rates_[i] * static_cast<double>(n[i]);
    return total;
}

std::vector<std::size_t> Simulator::embeddingCounts() {
    std::vector<std::size_t> out;
    for (const auto& r : *rules_) out.push_back(countEmbeddings(r.refined.rule.lhs(), mixture_));
    return out;
}

void Simulator::fire(std::size_t rule, Embedding e, Event* fired) {
    const RatedRule& r = (*rules_)[rule];
    std::vector<int> touched;
    auto touch = [&](int a) {
        if (a != kNone && std::find(touched.begin(), touched.end(), a) == touched.end()) touched.push_back(a);
    };
    for (int s : r.refined.rule.modifiedSites()) {
        const Site& x = mixture_.site(e.sites[s]);
        touch(x.owner);
        if (x.partner != kNone) touch(mixture_.site(x.partner).owner);
    }
    applyDelta(r.refined.rule, e, mixture_);
    // Neighbours too, for embeddings that see a touched agent only through a
    // dangling site.
    for (std::size_t i = 0, n = touched.size(); i < n; ++i)
        for (int s : mixture_.agent(touched[i]).slots)
            if (s != kNone && mixture_.site(s).partner != kNone) touch(mixture_.site(mixture_.site(s).partner).owner);
    index_->update(mixture_, touched);
    for (std::size_t c = 0; c < counts_.size(); ++c) counts_[c] += r.refined.delta[c];
    ++events_;
    if (recountEvery_ && events_ % recountEvery_ == 0) verifyCounts();
    if (fired) *fired = {time_, rule, std::move(e)};
}

// Direct method on the exact embedding sets, used after a run of clashes.
bool Simulator::exactStep(double until, Event* fired, StepStatus& status) {
    std::vector<std::vector<Embedding>> all;
    double total = 0.0;
    for (std::size_t r = 0; r < rules_->size(); ++r) {
        all.push_back(index_->bound(r) > 0 ? enumerateEmbeddings((*rules_)[r].refined.rule.lhs(), mixture_)
                                            : std::vector<Embedding>{});
        total += rates_[r] * static_cast<double>(all.back().size());
    }
    if (total <= 0.0) {
        if (std::isfinite(until)) time_ = std::max(time_, until);
        status = StepStatus::Quiescent;
        return true;
    }
    double wait = -std::log(1.0 - uniform01(rng_)) / total;
    if (time_ + wait > until) {
        time_ = until;
        status = StepStatus::Horizon;
        return true;
    }
    time_ += wait;
    double x = uniform01(rng_) * total;
    std::size_t pick = all.size();
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (all[i].empty()) continue;
        pick = i;
        x -= rates_[i] * static_cast<double>(all[i].size());
        if (x < 0.0) break;
    }
    auto idx = std::min(static_cast<std::size_t>(uniform01(rng_) * static_cast<double>(all[pick].size())),
                        all[pick].size() - 1);
    fire(pick, all[pick][idx], fired);
    status = StepStatus::Fired;
    return true;
}

StepStatus Simulator::step(double until, Event* fired) {
    if (policy_->dependsOnCounts()) refreshRates();
    std::vector<double> activity(rules_->size());
    double total = 0.0;
    for (std::size_t r = 0; r < rules_->size(); ++r) total += activity[r] = rates_[r] * index_->bound(r);
    Embedding e;
    for (int clashes = 0;; ++clashes) {
        if (total <= 0.0) {
            if (std::isfinite(until)) time_ = std::max(time_, until);
            return StepStatus::Quiescent;
        }
        if (clashes == 64) {
            StepStatus status;
            exactStep(until, fired, status);
            return status;
        }
        double wait = -std::log(1.0 - uniform01(rng_)) / total;
        if (time_ + wait > until) {
            time_ = until;
            return StepStatus::Horizon;
        }
        time_ += wait;
        double x = uniform01(rng_) * total;
        std::size_t pick = activity.size();
        for (std::size_t i = 0; i < activity.size(); ++i) {
            if (activity[i] <= 0.0) continue;
            pick = i;
            x -= activity[i];
            if (x < 0.0) break;
        }
        if (!index_->assemble(pick, (*rules_)[pick].refined.rule.lhs(), rng_, e)) continue;
        fire(pick, std::move(e), fired);
        return StepStatus::Fired;
    }
}

void Simulator::apply(const Intervention& intervention) {
    for (int s = 0; s < mixture_.siteCount(); ++s) {
        const Site& x = mixture_.site(s);
        if (x.type != intervention.siteType || x.owner == kNone) continue;
        if (intervention.release && x.partner != kNone) mixture_.unbind(s);
        if (intervention.state != kNone) mixture_.setState(s, intervention.state);
    }
    counts_ = patternCounts(mixture_, model_->patterns);
    index_->rebuild(mixture_);
}

void Simulator::verifyCounts() {
    PatternCounts fresh = patternCounts(mixture_, model_->patterns);
    if (fresh != counts_)
        throw InvariantViolation("running pattern counts diverged from a full recount after " +
                                 std::to_string(events_) + " events");
}

void Simulator::verifyIndex() {
    Index fresh(*rules_);
    fresh.rebuild(mixture_);
    for (std::size_t k = 0; k < fresh.sets.size(); ++k) {
        auto a = fresh.sets[k], b = index_->sets[k];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b)
            throw InvariantViolation("embedding index of " + formatPattern(fresh.patterns[k]) + " diverged after " +
                                     std::to_string(events_) + " events");
    }
}

std::string fingerprint(const Embedding& e) {
    std::string out;
    for (std::size_t i = 0; i < e.agents.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(e.agents[i]);
    }
    return out.empty() ? "-" : out;
}

void Trajectory::writeCsv(std::ostream& out) const {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    out << std::setprecision(10);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

Trajectory run(Simulator& sim, const std::vector<Observable>& observables, const RunOptions& options) {
    if (!(options.horizon >= 0.0)) throw InvalidArgument("horizon must be nonnegative");
    if (!(options.sampleEvery > 0.0)) throw InvalidArgument("sampling step must be positive");
    Trajectory traj;
    traj.columns.push_back("time");
    for (const auto& o : observables) traj.columns.push_back(o.name);

    std::vector<Intervention> pending = options.interventions;
    std::stable_sort(pending.begin(), pending.end(),
                     [](const Intervention& a, const Intervention& b) { return a.time < b.time; });
    for (const auto& i : pending)
        if (i.time > options.horizon)
            traj.warnings.push_back("intervention at t=" + std::to_string(i.time) + " is after the horizon");

    auto sample = [&](double t) {
        std::vector<double> row{t};
        for (const auto& o : observables) row.push_back(o.eval(sim.mixture()));
        traj.rows.push_back(std::move(row));
    };

    const double eps = 1e-9 * std::max(1.0, options.horizon);
    std::size_t k = 0, next = 0;
    double start = sim.time();
    Event ev;
    if (options.eventLog) *options.eventLog << std::setprecision(17);
    while (true) {
        double ts = start + static_cast<double>(k) * options.sampleEvery;
        bool moreSamples = ts <= start + options.horizon + eps;
        double ti = next < pending.size() && pending[next].time <= options.horizon ? start + pending[next].time : INFINITY;
        if (!moreSamples && !std::isfinite(ti)) break;
        double stop = std::min(moreSamples ? ts : INFINITY, ti);
        if (sim.eventCount() >= options.maxEvents) {
            traj.warnings.push_back("event limit reached at t=" + std::to_string(sim.time()));
            break;
        }
        StepStatus status = sim.step(stop, &ev);
        if (status == StepStatus::Fired) {
            if (options.eventLog)
                *options.eventLog << ev.time << ' ' << sim.rules()[ev.rule].refined.name << ' ' << fingerprint(ev.embedding)
                                  << '\n';
            continue;
        }
        if (moreSamples && stop == ts) {
            sample(ts - start);
            ++k;
        }
        if (stop == ti) sim.apply(pending[next++]);
    }
    return traj;
}

}  // namespace thermograph
