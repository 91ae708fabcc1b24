#pragma once

// Continuous-time Markov chain simulation of a rule set (Gillespie direct method
// over per-component embedding sets, with rejection of clashing picks).

#include "thermograph/energy.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace thermograph {

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng);

struct Event {
    double time = 0.0;
    std::size_t rule = 0;
    Embedding embedding;  // left-hand side of the rule into the mixture before the event
};

/// Sets every site of one type to a state at a given time; `release` also
/// unbinds those sites first.
struct Intervention {
    double time = 0.0;
    int siteType = kNone;
    int state = kNone;
    bool release = false;
};

enum class StepStatus { Fired, Quiescent, Horizon };

class Simulator {
public:
    Simulator(const RuleSet& rules, const RatePolicy& policy, const EnergyModel& model, ContactMap initial,
              std::uint64_t seed);

    double time() const { return time_; }
    const ContactMap& mixture() const { return mixture_; }
    const PatternCounts& counts() const { return counts_; }
    std::size_t eventCount() const { return events_; }
    const RuleSet& rules() const { return *rules_; }

    /// Total activity sum_rho k_rho |embeddings of rho_L| at the current mixture.
    double totalActivity();
    /// Number of embeddings of each rule's left-hand side at the current mixture.
    std::vector<std::size_t> embeddingCounts();

    /// Fires one event unless the next one would happen after `until`, in
    /// which case time advances to `until`.
    StepStatus step(double until = std::numeric_limits<double>::infinity(), Event* fired = nullptr);

    void apply(const Intervention& intervention);
    /// Recomputes the counts from scratch; throws InvariantViolation when
    /// they differ from the running counts.
    void verifyCounts();
    /// Rebuilds the per-component embedding index and compares it with the
    /// maintained one; throws InvariantViolation on any difference.
    void verifyIndex();
    void setRecountInterval(std::size_t events) { recountEvery_ = events; }

    ~Simulator();
    Simulator(Simulator&&) noexcept;
    Simulator& operator=(Simulator&&) noexcept;

private:
    struct Index;

    void refreshRates();
    bool exactStep(double until, Event* fired, StepStatus& status);
    void fire(std::size_t rule, Embedding e, Event* fired);

    const RuleSet* rules_;
    const RatePolicy* policy_;
    const EnergyModel* model_;
    ContactMap mixture_;
    PatternCounts counts_;
    std::vector<double> rates_;
    std::mt19937_64 rng_;
    double time_ = 0.0;
    std::size_t events_ = 0;
    std::size_t recountEvery_ = 1000;
    std::unique_ptr<Index> index_;
};

struct Observable {
    std::string name;
    std::function<double(const ContactMap&)> eval;
};

struct Trajectory {
    std::vector<std::string> columns;        // "time" first
    std::vector<std::vector<double>> rows;
    std::vector<std::string> warnings;

    void writeCsv(std::ostream& out) const;
};

struct RunOptions {
    double horizon = 0.0;
    double sampleEvery = 1.0;
    std::vector<Intervention> interventions;
    std::ostream* eventLog = nullptr;  // `t <rule-name> <embedding-fingerprint>`
    std::size_t maxEvents = std::numeric_limits<std::size_t>::max();
};

/// Samples the observables on the grid 0, dt, 2dt, .. <= horizon. Throws
/// InvalidArgument for a negative horizon or a nonpositive sampling step;
/// interventions after the horizon are skipped with a warning.
Trajectory run(Simulator& sim, const std::vector<Observable>& observables, const RunOptions& options);

std::string fingerprint(const Embedding& e);

}  // namespace thermograph
