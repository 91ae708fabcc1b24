#pragma once

// Rule refinement under the absorb-or-avoid growth policy.

#include "thermograph/gluing.hpp"
#include "thermograph/rules.hpp"
#include "thermograph/sitegraph.hpp"

#include <string>
#include <vector>

namespace thermograph {

/// Requested slots per agent of an extension codomain.
struct SiteRequestMap {
    std::vector<std::vector<char>> requested;  // [agent][slot]

    bool isRequested(int agent, int slot) const { return requested[agent][slot] != 0; }
    bool operator==(const SiteRequestMap&) const = default;
};

enum class Maturity { Immature, Mature, Overgrown };
const char* toString(Maturity m);

struct MaturityStatus {
    Maturity kind = Maturity::Immature;
    std::vector<std::pair<int, int>> witnesses;  // (agent, slot): missing or unrequested
};

using BalanceVector = std::vector<long>;

struct RefinedRule {
    std::string name;
    Extension ext;
    Rule rule;               // (t, tStar)
    BalanceVector delta;     // pattern counts of tStar minus those of t
    std::vector<std::string> provenance;  // growth moves from the generator
};

struct RefineOptions {
    /// Resolve dangling sites of mature but unbalanced extensions. Without it
    /// such extensions raise an error.
    bool resolveDangling = true;
    /// Upper bound on explored extensions before giving up.
    std::size_t maxExtensions = 20000;
};

/// Requests of the combined policy at extension `phi: g.lhs() -> t`.
SiteRequestMap computeRequests(const Rule& g, const Embedding& phi, const ContactMap& t,
                               const std::vector<ContactMap>& patterns);

MaturityStatus classify(const Embedding& phi, const ContactMap& t, const SiteRequestMap& requests);

/// True iff every gluing of every pattern with `t` that is relevant to the
/// `modified` sites is absorbed (`t` leg is an isomorphism).
bool isBalanced(const ContactMap& t, const std::vector<int>& modified, const std::vector<ContactMap>& patterns);

/// Pattern counts of tStar minus those of t; throws unless both sides balanced.
BalanceVector balanceVector(const Rule& g, const Extension& ext, const std::vector<ContactMap>& patterns);

/// All mature, balanced extensions of the generator, one per isomorphism
/// class, in deterministic breadth-first order. Rules are named `<g>#<i>`.
std::vector<RefinedRule> enumerateMature(const Rule& g, const std::vector<ContactMap>& patterns,
                                         const RefineOptions& options = {});

/// The refinement of g* obtained by swapping the sides of every member.
std::vector<RefinedRule> mirrorRefinement(const Rule& g, const std::vector<RefinedRule>& refined);

struct Factorization {
    std::size_t index = 0;
    Embedding residual;  // t_index -> mixture
};

/// The unique member through which `psi` factors; throws InvariantViolation
/// when no member or more than one member admits a factorization.
Factorization uniqueFactor(const Rule& g, const Embedding& psi, const ContactMap& mixture,
                           const std::vector<RefinedRule>& refined);

/// Number of (member, residual) pairs through which `psi` factors.
std::size_t countFactorizations(const Embedding& psi, const ContactMap& mixture,
                                const std::vector<RefinedRule>& refined);

}  // namespace thermograph
