#pragma once

// From a parsed model file to a simulable rule set.

#include "thermograph/energy.hpp"
#include "thermograph/model_file.hpp"
#include "thermograph/refine.hpp"
#include "thermograph/sim.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace thermograph {

struct CompileOptions {
    RefineOptions refine;
    /// Body of a %policy line replacing the model's own, e.g. "metropolis".
    std::optional<std::string> policyOverride;
};

struct CompiledModel {
    ModelFile source;
    ContactGraphPtr graph;
    std::map<std::string, double> params;
    EnergyModel energy;
    std::vector<Rule> generators;
    RuleSet rules;
    RatePolicy policy;
    /// The rules were written out with their rates instead of refined from %gen.
    bool explicitRules = false;
    ContactMap initial;
    std::vector<Observable> observables;
    std::vector<Intervention> interventions;

    /// Forward members of a generator, in refinement order.
    std::vector<std::size_t> membersOf(const std::string& generator) const;
};

/// Throws ParseError for model-level errors (E005 unpaired or non
/// agent-preserving rule lines, E008 mixed %gen and rule lines, E009 bad
/// policy, E010 unbalanced rule line) and Error for refinement failures.
CompiledModel compileModel(const ModelFile& model, const CompileOptions& options = {});

/// The model with its %policy replaced by `policyBody`.
ModelFile withPolicy(const ModelFile& model, const std::string& policyBody);

/// Mixture of every %init complex, unlisted sites free and in their first state.
ContactMap initialMixture(const ContactGraphPtr& graph, const std::vector<InitDecl>& inits);

}  // namespace thermograph
