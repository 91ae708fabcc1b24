#pragma once

// Energy patterns, costs, and rate policies.

#include "thermograph/refine.hpp"
#include "thermograph/sitegraph.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace thermograph {

using PatternCounts = std::vector<long>;

struct EnergyModel {
    std::vector<std::string> names;
    std::vector<ContactMap> patterns;
    std::vector<double> costs;
    /// Optional per-pattern quadratic coefficients; empty means linear.
    std::vector<double> quadratic;

    std::size_t size() const { return patterns.size(); }
    bool isLinear() const;
    /// Throws InvalidArgument on size mismatches or disconnected patterns.
    void validate() const;
    /// E = sum_c costs[c] n_c + quadratic[c] n_c^2
    double energy(const PatternCounts& counts) const;
};

PatternCounts patternCounts(const ContactMap& x, const std::vector<ContactMap>& patterns);
double energy(const ContactMap& x, const EnergyModel& model);

/// A refined rule of a generator or of its inverse.
struct RatedRule {
    RefinedRule refined;
    std::string generator;  // name of the generator as declared
    bool inverse = false;   // member of the inverse generator
    std::size_t mirror = 0; // index of the inverse member in the rule set
};

using RuleSet = std::vector<RatedRule>;

/// Appends the refinement of `g` and its mirror, linking each pair.
void appendGenerator(RuleSet& set, const Rule& g, const std::vector<RefinedRule>& refined);

enum class PolicyKind { Metropolis, Symmetric, LogAffine, Nonlinear, Table };
const char* toString(PolicyKind kind);

/// Log-affine parameters of one generator: log k = c - (A eps) . delta for
/// the generator and c - ((I - A) eps) . delta for its inverse.
struct AffineParams {
    double c = 0.0;
    std::vector<double> A;  // row-major |P| x |P|
};

/// Nonlinear parameters: log k = alpha - beta psi for the generator and
/// alpha - (1 - beta) psi for its inverse.
struct NonlinearParams {
    double alpha = 0.0;
    double beta = 0.5;
};

class RatePolicy {
public:
    static RatePolicy metropolis();
    /// Scales C_g per generator; unlisted generators use 1.
    static RatePolicy symmetric(std::map<std::string, double> timeScales = {});
    /// Unlisted generators use c = 0 and A = I/2.
    static RatePolicy logAffine(std::map<std::string, AffineParams> params);
    /// Validates A_g + A_g* = I and c_g = c_g* to 1e-12 before storing A_g.
    static RatePolicy logAffine(const std::string& generator, AffineParams forward, const AffineParams& inverse,
                                std::map<std::string, AffineParams> others = {});
    static RatePolicy nonlinear(std::map<std::string, NonlinearParams> params = {});
    /// Fixed log rates keyed by refined rule name.
    static RatePolicy table(std::map<std::string, double> logRates);

    PolicyKind kind() const { return kind_; }
    bool dependsOnCounts() const { return kind_ == PolicyKind::Nonlinear; }

    /// Log rate of one rule. `counts` is required for nonlinear policies.
    double logRate(const RatedRule& r, const EnergyModel& model, const PatternCounts* counts = nullptr) const;
    /// Log rates of every rule; throws for nonlinear policies.
    std::vector<double> logRates(const RuleSet& set, const EnergyModel& model) const;

    const std::map<std::string, double>& timeScales() const { return scales_; }
    const std::map<std::string, AffineParams>& affine() const { return affine_; }
    const std::map<std::string, NonlinearParams>& nonlinearParams() const { return nonlinear_; }
    const std::map<std::string, double>& table() const { return table_; }

private:
    PolicyKind kind_ = PolicyKind::Symmetric;
    std::map<std::string, double> scales_;
    std::map<std::string, AffineParams> affine_;
    std::map<std::string, NonlinearParams> nonlinear_;
    std::map<std::string, double> table_;
};

/// psi_g(n) = v(n + delta) - v(n)
double psi(const EnergyModel& model, const PatternCounts& counts, const BalanceVector& delta);

struct CompatViolation {
    std::string rule;
    std::string mirror;
    double expected = 0.0;  // eps . delta (or psi)
    double observed = 0.0;  // log k(mirror) - log k(rule)
};

struct CompatReport {
    bool ok = true;
    std::size_t pairs = 0;
    std::vector<CompatViolation> violations;
};

/// Checks log k(g*) - log k(g) = eps . delta for every forward member, with
/// relative tolerance `tol`.
CompatReport checkCompat(const RuleSet& set, std::span<const double> logRates, const EnergyModel& model,
                         double tol = 1e-12);
/// For nonlinear policies the identity is checked at every count vector with
/// entries in {0, .., 3} (capped at 4096 vectors).
CompatReport checkCompat(const RuleSet& set, const RatePolicy& policy, const EnergyModel& model, double tol = 1e-12);

/// Exact rank of the balance vectors.
int balanceRank(const std::vector<BalanceVector>& rows);
int balanceRank(const RuleSet& set);

}  // namespace thermograph
