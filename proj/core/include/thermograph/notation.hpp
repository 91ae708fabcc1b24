#pragma once

// Kappa-style text for contact maps: `A(l, r!1), B(l!1, r!l.C), P(f~0)`.
//
// A listed site without `!` is free, `!n` pairs it with the other site
// carrying label n, and `!site.Agent` binds it to a dangling site of that
// type. Sites that are not listed are absent.

#include "thermograph/sitegraph.hpp"

#include <span>
#include <string>
#include <string_view>

namespace thermograph {

/// Throws ParseError (E002 unknown agent, E003 unknown site or edge, E004
/// unknown state, E008 syntax) with a 1-based column into `text`.
ContactMap parsePattern(const ContactGraphPtr& graph, std::string_view text);

/// Prints every agent (or the given ones, in that order).
std::string formatPattern(const ContactMap& h, std::span<const int> agents = {});

/// One line per connected component in canonical order; the inverse of
/// `parseSnapshot`.
std::string snapshot(const ContactMap& h);
ContactMap parseSnapshot(const ContactGraphPtr& graph, std::string_view text);

}  // namespace thermograph
