#pragma once

// Brute-force certification over small reachable state spaces.

#include "thermograph/energy.hpp"
#include "thermograph/sim.hpp"

#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace thermograph {

struct StateSpace {
    std::vector<ContactMap> states;
    std::vector<PatternCounts> counts;
    std::vector<double> energies;
    std::vector<std::map<std::size_t, double>> rates;         // q(x, y), x != y
    std::vector<std::map<std::size_t, std::size_t>> events;   // number of events x -> y
    std::unordered_map<std::string, std::size_t> index;       // configurationKey -> state
    /// Transitions whose count change differs from the fired rule's balance vector.
    std::size_t energyViolations = 0;

    std::size_t size() const { return states.size(); }
    std::size_t find(const ContactMap& x) const;  // size() when absent
};

/// Breadth-first closure of `initial` under every event. Throws Error("CAP")
/// when more than `cap` states are reached.
StateSpace enumerateComponent(const ContactMap& initial, const RuleSet& rules, const RatePolicy& policy,
                              const EnergyModel& model, std::size_t cap = 100000);

/// Boltzmann distribution over the enumerated states.
std::vector<double> stationary(const StateSpace& space);
double logPartition(const StateSpace& space);

struct BalanceReport {
    double maxRelativeError = 0.0;
    std::size_t worstFrom = 0, worstTo = 0;
    std::size_t pairs = 0;
    double logZ = 0.0;
    /// Ordered pairs with q(x, y) > 0 but q(y, x) = 0.
    std::size_t oneWay = 0;
    /// Ordered pairs whose event counts differ from the reverse direction.
    std::size_t eventAsymmetries = 0;
    std::size_t energyViolations = 0;
    bool pass = false;
    double threshold = 1e-10;

    std::string toText() const;
    std::string toJson() const;
};

BalanceReport checkDetailedBalance(const StateSpace& space, double threshold = 1e-10);
/// The same check on the chain lumped by isomorphism class.
BalanceReport checkDetailedBalanceCollapsed(const StateSpace& space, double threshold = 1e-10);

using StateFunction = std::function<double(const ContactMap&, const PatternCounts&)>;
double stationaryExpectation(const StateSpace& space, const StateFunction& f);

/// Time spent in each configuration (keyed by configurationKey).
struct Occupancy {
    std::unordered_map<std::string, double> time;
    double total = 0.0;
    std::size_t events = 0;
};

/// Runs `sim` for `events` events (or until quiescent) and records dwell times.
Occupancy recordOccupancy(Simulator& sim, std::size_t events);

struct EmpiricalReport {
    double maxAbsDiff = 0.0;
    std::size_t worstState = 0;
    double chiSquare = 0.0;      // sum (p - pi)^2 / pi
    double unmatchedTime = 0.0;  // fraction of time outside the enumerated space
    bool pass = false;
    std::vector<std::string> warnings;

    std::string toText() const;
    std::string toJson() const;
};

EmpiricalReport compareEmpirical(const Occupancy& occupancy, const StateSpace& space, double tolerance);
EmpiricalReport compareEmpirical(const Occupancy& occupancy, const StateSpace& space, const std::vector<double>& pi,
                                 double tolerance);

}  // namespace thermograph
