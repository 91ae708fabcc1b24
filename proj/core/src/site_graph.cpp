#include "thermograph/errors.hpp"
#include "thermograph/sitegraph.hpp"

#include <map>

namespace thermograph {

const char* toString(RealizabilityViolation::Kind kind) {
    switch (kind) {
    case RealizabilityViolation::Kind::MultiEdgeSite: return "multi-edge-site";
    case RealizabilityViolation::Kind::FreeDangling: return "free-dangling";
    case RealizabilityViolation::Kind::TwoDanglingEndpoints: return "two-dangling-endpoints";
    }
    return "?";
}

RealizabilityReport checkRealizable(const SiteGraph& g) {
    const int n = g.siteCount();
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    for (auto [a, b] : g.edges) {
        if (a < 0 || b < 0 || a >= n || b >= n)
            throw InvalidArgument("edge references an undeclared site");
        ++degree[a];
        ++degree[b];
    }
    for (const auto& o : g.siteOwner)
        if (o && (*o < 0 || *o >= g.agentCount))
            throw InvalidArgument("site owner is not a declared agent");

    RealizabilityReport report;
    using Kind = RealizabilityViolation::Kind;
    for (int s = 0; s < n; ++s)
        if (degree[s] > 1) report.violations.push_back({Kind::MultiEdgeSite, {s}});
    for (int s = 0; s < n; ++s)
        if (!g.siteOwner[s] && degree[s] == 0) report.violations.push_back({Kind::FreeDangling, {s}});
    for (auto [a, b] : g.edges)
        if (!g.siteOwner[a] && !g.siteOwner[b])
            report.violations.push_back({Kind::TwoDanglingEndpoints, {a, b}});
    report.isRealizable = report.violations.empty();
    return report;
}

}  // namespace thermograph
