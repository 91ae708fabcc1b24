#pragma once

// Pullbacks, pushouts and minimal gluings (multi-sums) of contact maps.

#include "thermograph/rules.hpp"
#include "thermograph/sitegraph.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace thermograph {

struct Span {
    ContactMap apex;
    Embedding left;   // apex -> a
    Embedding right;  // apex -> b
};

struct Cospan {
    ContactMap glued;
    Embedding fromA;
    Embedding fromB;
};

struct MinimalGluing {
    Span overlap;
    Cospan cospan;
    const ContactMap& glued() const { return cospan.glued; }
};

/// Pullback of a -> h <- b. The apex keeps a state only where both sides
/// carry the same one.
Span pullback(const ContactMap& a, const ContactMap& b, const Embedding& fa, const Embedding& fb);

/// Pushout of a <- o -> b, or nullopt when the glued graph is not a
/// realizable, locally injective contact map.
std::optional<Cospan> pushout(const ContactMap& a, const ContactMap& b, const Span& span);

/// Every minimal gluing of `a` and `b`, one per isomorphism class of cospan.
std::vector<MinimalGluing> minimalGluings(const ContactMap& a, const ContactMap& b);

enum class RuleSide { Left, Right };

struct RelevanceTag {
    bool relevant = false;
    std::vector<int> witnessSites;  // sites of the glued graph
};

/// Relevance of a gluing of a pattern (leg a) with a rule side (leg b): the
/// two images share a site the rule modifies.
RelevanceTag classifyRelevance(const MinimalGluing& mg, const Rule& rule, RuleSide side);

/// Minimal gluings of `pattern` with `t` whose overlap contains one of the
/// `modified` sites of `t`. Same members as filtering `minimalGluings`.
std::vector<MinimalGluing> relevantGluings(const ContactMap& pattern, const ContactMap& t,
                                           const std::vector<int>& modified);

}  // namespace thermograph
