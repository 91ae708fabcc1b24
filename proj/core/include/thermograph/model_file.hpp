#pragma once

// Model files: a line-oriented text format whose rule lines follow KaSim 4.
// See docs/format.md for the grammar.

#include "thermograph/expr.hpp"
#include "thermograph/sitegraph.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace thermograph {

struct SiteDecl {
    std::string name;
    std::vector<std::string> states;
    bool operator==(const SiteDecl&) const = default;
};

struct AgentDecl {
    std::string name;
    std::vector<SiteDecl> sites;
    bool operator==(const AgentDecl&) const = default;
};

struct BondDecl {
    std::string agentA, siteA, agentB, siteB;
    bool operator==(const BondDecl&) const = default;
};

struct ParamDecl {
    std::string name;
    Expr value;
    bool operator==(const ParamDecl&) const = default;
};

struct EnergyDecl {
    std::string name;
    ContactMap pattern;
    Expr cost;
    bool operator==(const EnergyDecl&) const = default;
};

struct GeneratorDecl {
    std::string name;
    ContactMap lhs, rhs;
    bool operator==(const GeneratorDecl&) const = default;
};

/// `lhs -> rhs @ rate` or `lhs <-> rhs @ rate, reverseRate`.
struct RuleDecl {
    std::string name;  // may be empty
    ContactMap lhs, rhs;
    Expr rate;
    bool bidirectional = false;
    Expr reverseRate;
    bool operator==(const RuleDecl&) const = default;
};

struct PolicyDecl {
    std::string kind;  // metropolis | symmetric | log-affine | nonlinear
    std::vector<std::pair<std::string, double>> options;
    bool operator==(const PolicyDecl&) const = default;
};

struct InitDecl {
    long count = 0;
    ContactMap complex;  // unlisted sites are completed free, in their first state
    bool operator==(const InitDecl&) const = default;
};

struct ObsDecl {
    std::string name;
    Expr value;
    bool operator==(const ObsDecl&) const = default;
};

/// At `time`, every site `agent.site` is put in `state` (and unbound first
/// when `release` is set).
struct InterventionDecl {
    double time = 0.0;
    std::string agent, site, state;
    bool release = false;
    bool operator==(const InterventionDecl&) const = default;
};

struct ModelFile {
    ContactGraphPtr graph;
    std::vector<AgentDecl> agents;
    /// Declared with %bond, or inferred from every bond written in the file.
    std::vector<BondDecl> bonds;
    bool inferredBonds = false;
    std::vector<ParamDecl> params;
    std::vector<EnergyDecl> energies;
    std::vector<GeneratorDecl> generators;
    std::optional<PolicyDecl> policy;
    std::vector<RuleDecl> rules;
    std::vector<InitDecl> inits;
    std::vector<ObsDecl> observables;
    std::vector<InterventionDecl> interventions;

    /// Text that parses back to an equal ModelFile.
    std::string print() const;
    bool operator==(const ModelFile& other) const;
};

/// Throws ParseError with a 1-based line and column. Codes:
/// E001 missing %agent section, E002 unknown agent, E003 unknown site or
/// undeclared bond, E004 unknown state, E005 generator not reversible or not
/// agent-preserving, E006 energy pattern not connected, E007 undefined
/// parameter, E008 syntax, E009 invalid policy option. Compilation adds E010
/// (explicit rule not balanced against the energy patterns).
ModelFile parseModel(std::string_view text);

/// Contact graph of agent and bond declarations (E002/E003 on bad bonds).
ContactGraphPtr buildContactGraph(const std::vector<AgentDecl>& agents, const std::vector<BondDecl>& bonds);

}  // namespace thermograph
