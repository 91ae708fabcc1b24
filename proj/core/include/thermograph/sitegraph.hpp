#pragma once

// Site graphs, contact graphs, contact maps and embeddings.
//
// Identifiers for agents and sites are plain indices into the owning
// container. A ContactMap stores its typing inline: every agent carries an
// agent type of the ContactGraph and every site a site type. Local
// injectivity is structural: an agent holds at most one site per slot of its
// type, so owned sites are addressed as (agent, slot).

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace thermograph {

inline constexpr int kNone = -1;

// ---------------------------------------------------------------------------
// Contact graph

class ContactGraph {
public:
    struct AgentType {
        std::string name;
        std::vector<int> sites;  // site type ids, in slot order
    };
    struct SiteType {
        std::string name;
        int owner = kNone;  // agent type
        int slot = kNone;   // position within the owner's site list
        std::vector<std::string> states;
        std::vector<int> partners;  // site types this one may bind
    };

    int addAgentType(std::string name);
    int addSiteType(int agentType, std::string name, std::vector<std::string> states = {});
    void addEdgeType(int siteA, int siteB);

    std::size_t agentTypeCount() const { return agents_.size(); }
    std::size_t siteTypeCount() const { return sites_.size(); }
    const AgentType& agentType(int id) const { return agents_.at(static_cast<std::size_t>(id)); }
    const SiteType& siteType(int id) const { return sites_.at(static_cast<std::size_t>(id)); }

    std::optional<int> findAgentType(std::string_view name) const;
    std::optional<int> findSiteType(int agentType, std::string_view name) const;
    std::optional<int> findState(int siteType, std::string_view label) const;
    int siteTypeAt(int agentType, int slot) const { return agentType_(agentType).sites.at(static_cast<std::size_t>(slot)); }
    bool canBind(int siteA, int siteB) const;
    bool hasStates(int siteType) const { return !siteType_(siteType).states.empty(); }

    /// "Agent.site" label for diagnostics and notation.
    std::string siteLabel(int siteType) const;

private:
    const AgentType& agentType_(int id) const { return agents_.at(static_cast<std::size_t>(id)); }
    const SiteType& siteType_(int id) const { return sites_.at(static_cast<std::size_t>(id)); }

    std::vector<AgentType> agents_;
    std::vector<SiteType> sites_;
};

using ContactGraphPtr = std::shared_ptr<const ContactGraph>;

// ---------------------------------------------------------------------------
// Untyped site graphs and realizability

struct SiteGraph {
    int agentCount = 0;
    std::vector<std::optional<int>> siteOwner;  // one entry per site
    std::vector<std::pair<int, int>> edges;     // unordered pairs; stored once

    int siteCount() const { return static_cast<int>(siteOwner.size()); }
};

struct RealizabilityViolation {
    enum class Kind { MultiEdgeSite, FreeDangling, TwoDanglingEndpoints };
    Kind kind;
    std::vector<int> sites;
};

struct RealizabilityReport {
    bool isRealizable = true;
    std::vector<RealizabilityViolation> violations;
};

RealizabilityReport checkRealizable(const SiteGraph& g);
const char* toString(RealizabilityViolation::Kind kind);

// ---------------------------------------------------------------------------
// Contact maps

struct Site {
    int type = kNone;     // site type in the contact graph
    int owner = kNone;    // agent, or kNone for a dangling site
    int partner = kNone;  // bound site, or kNone when free
    int state = kNone;    // index into the site type's states, or kNone
    bool operator==(const Site&) const = default;
};

struct Agent {
    int type = kNone;
    std::vector<int> slots;  // site id per slot of the agent type, kNone if absent
    bool operator==(const Agent&) const = default;
};

/// A realizable site graph typed over a ContactGraph. The builder methods do
/// not enforce realizability; call `validate()` (or `checkRealizable`) once
/// construction is complete.
class ContactMap {
public:
    ContactMap() = default;
    explicit ContactMap(ContactGraphPtr graph) : graph_(std::move(graph)) {}

    const ContactGraphPtr& graphPtr() const { return graph_; }
    const ContactGraph& graph() const { return *graph_; }

    int addAgent(int agentType);
    /// Adds an owned site at the slot given by `siteType`; throws if occupied.
    int addSite(int agent, int siteType, int state = kNone);
    int addDangling(int siteType, int state = kNone);
    void bind(int siteA, int siteB);
    void unbind(int site);
    void setState(int site, int state);
    /// Gives a dangling site an owner (the site keeps its id and edge).
    void adopt(int site, int agent);

    int agentCount() const { return static_cast<int>(agents_.size()); }
    int siteCount() const { return static_cast<int>(sites_.size()); }
    const Agent& agent(int id) const { return agents_[static_cast<std::size_t>(id)]; }
    const Site& site(int id) const { return sites_[static_cast<std::size_t>(id)]; }
    std::span<const Agent> agents() const { return agents_; }
    std::span<const Site> sites() const { return sites_; }

    int slotOf(int site) const;
    int siteAt(int agent, int slot) const;
    bool isDangling(int site) const { return site_(site).owner == kNone; }
    bool isFree(int site) const { return site_(site).partner == kNone; }

    SiteGraph siteGraph() const;
    RealizabilityReport realizability() const { return checkRealizable(siteGraph()); }
    /// Throws InvalidArgument unless realizable with valid typing and states.
    void validate() const;

    bool operator==(const ContactMap& other) const;

private:
    const Site& site_(int id) const { return sites_.at(static_cast<std::size_t>(id)); }

    ContactGraphPtr graph_;
    std::vector<Agent> agents_;
    std::vector<Site> sites_;
};

/// Fully specified contact map: no dangling sites, every agent has every site
/// of its type, and every stateful site carries a state.
bool isMixture(const ContactMap& h);

/// Agent partition into connected components, each block sorted, blocks
/// ordered by smallest member.
std::vector<std::vector<int>> connectedComponents(const ContactMap& h);
/// Component index per agent (same numbering as `connectedComponents`).
std::vector<int> componentIndex(const ContactMap& h);

/// Largest finite shortest-path distance between two agents (0 if <= 1 agent).
int diameter(const ContactMap& h);

// ---------------------------------------------------------------------------
// Embeddings

struct Embedding {
    std::vector<int> agents;  // image of each source agent
    std::vector<int> sites;   // image of each source site
    bool operator==(const Embedding&) const = default;
    bool operator<(const Embedding& o) const {
        return std::tie(agents, sites) < std::tie(o.agents, o.sites);
    }
};

Embedding identityEmbedding(const ContactMap& h);
Embedding compose(const Embedding& second, const Embedding& first);  // second ∘ first

/// Checks every defining condition of an embedding between typed site graphs.
bool isEmbedding(const Embedding& e, const ContactMap& from, const ContactMap& to);

/// Callback returns false to stop the enumeration early.
using EmbeddingVisitor = std::function<bool(const Embedding&)>;

/// Enumerates every embedding from `pattern` into `target`. When `fixedAgents`
/// is given (size = pattern agent count), entries other than kNone pin the
/// image of that pattern agent.
void forEachEmbedding(const ContactMap& pattern, const ContactMap& target,
                      const EmbeddingVisitor& visit,
                      std::span<const int> fixedAgents = {});
std::vector<Embedding> enumerateEmbeddings(const ContactMap& pattern, const ContactMap& target,
                                           std::span<const int> fixedAgents = {});
std::size_t countEmbeddings(const ContactMap& pattern, const ContactMap& target);
/// The embedding of a connected `pattern` that sends agent `u` to `v`, if any.
/// `out` is overwritten either way.
bool embedAt(const ContactMap& pattern, const ContactMap& target, int u, int v, Embedding& out);
/// Copies of `pattern` in `target`: embeddings up to automorphisms of the pattern.
std::size_t countOccurrences(const ContactMap& pattern, const ContactMap& target);

// ---------------------------------------------------------------------------
// Canonical forms

/// Identifier-independent encoding of `h`. Optional per-agent marks (e.g. the
/// image of a rule's left-hand side) become part of the encoding, so two
/// marked graphs share a form iff an isomorphism preserves the marks.
std::string canonicalForm(const ContactMap& h, std::span<const int> marks = {});
bool isomorphic(const ContactMap& a, const ContactMap& b);

/// Agents of each component in canonical traversal order; components sorted
/// by their canonical code.
std::vector<std::vector<int>> canonicalComponents(const ContactMap& h);

/// Encoding of the labelled configuration (ids kept). Two mixtures over the
/// same agents and sites compare equal iff their edges and states are equal.
std::string configurationKey(const ContactMap& h);

}  // namespace thermograph
