#pragma once

// Reversible rules over contact maps, rule application and extensions.

#include "thermograph/sitegraph.hpp"

#include <string>
#include <vector>

namespace thermograph {

/// A rule is a pair of contact maps over the same agents and sites, with the
/// same owners and typing. The two sides differ only in edges and states.
class Rule {
public:
    Rule() = default;
    Rule(std::string name, ContactMap lhs, ContactMap rhs);

    const std::string& name() const { return name_; }
    const ContactMap& lhs() const { return lhs_; }
    const ContactMap& rhs() const { return rhs_; }
    /// Number of connected components of the left-hand side.
    int componentCount() const { return components_; }
    /// Sites whose edge or state differs between the two sides.
    const std::vector<int>& modifiedSites() const { return modified_; }
    bool isModified(int site) const;

private:
    std::string name_;
    ContactMap lhs_;
    ContactMap rhs_;
    int components_ = 0;
    std::vector<int> modified_;
};

/// Swaps the sides; "g" becomes "g*" and "g*" becomes "g".
Rule invert(const Rule& r);
std::string invertedName(const std::string& name);

struct RewriteResult {
    ContactMap mixture;
    Embedding embedding;  // image of the right-hand side in `mixture`
};

/// Replays the edge and state delta of `r` through `psi` inside `h`. Works on
/// any contact map (mixtures and extension codomains alike).
void applyDelta(const Rule& r, const Embedding& psi, ContactMap& h);

/// Rewrites a mixture; rejects non-mixtures and embeddings not into `h`.
RewriteResult applyRule(const Rule& r, const Embedding& psi, const ContactMap& h);

// ---------------------------------------------------------------------------
// Extensions

struct Extension {
    Embedding phi;       // lhs -> t
    ContactMap t;
    ContactMap tStar;    // t with the rule delta replayed; phiStar has the maps of phi
    const Embedding& phiStar() const { return phi; }

    /// Refined rule (t, tStar).
    Rule refined(const std::string& name) const { return Rule(name, t, tStar); }
};

/// True iff every component of `t` meets the image of `phi`.
bool isEpi(const Embedding& phi, const ContactMap& t);
/// True iff `phi` extends to an epi: every untouched component can still be
/// connected to the image through an absent or dangling site.
bool isPrefixOfEpi(const Embedding& phi, const ContactMap& t);

/// Builds the mirrored extension; throws unless `phi` is a prefix of an epi.
Extension mirrorExtension(const Rule& r, const Embedding& phi, const ContactMap& t);

}  // namespace thermograph
