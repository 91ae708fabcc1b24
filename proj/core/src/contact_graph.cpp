#include "thermograph/errors.hpp"
#include "thermograph/sitegraph.hpp"

#include <algorithm>

namespace thermograph {

int ContactGraph::addAgentType(std::string name) {
    if (findAgentType(name))
        throw InvalidArgument("duplicate agent type '" + name + "'");
    agents_.push_back({std::move(name), {}});
    return static_cast<int>(agents_.size()) - 1;
}

int ContactGraph::addSiteType(int agentType, std::string name, std::vector<std::string> states) {
    if (agentType < 0 || agentType >= static_cast<int>(agents_.size()))
        throw InvalidArgument("unknown agent type id");
    if (findSiteType(agentType, name))
        throw InvalidArgument("duplicate site '" + name + "' on agent '" + agents_[agentType].name + "'");
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j)
            if (states[i] == states[j])
                throw InvalidArgument("duplicate state '" + states[i] + "' on site '" + name + "'");
    SiteType st;
    st.name = std::move(name);
    st.owner = agentType;
    st.slot = static_cast<int>(agents_[agentType].sites.size());
    st.states = std::move(states);
    sites_.push_back(std::move(st));
    int id = static_cast<int>(sites_.size()) - 1;
    agents_[agentType].sites.push_back(id);
    return id;
}

void ContactGraph::addEdgeType(int siteA, int siteB) {
    if (siteA < 0 || siteB < 0 || siteA >= static_cast<int>(sites_.size()) ||
        siteB >= static_cast<int>(sites_.size()))
        throw InvalidArgument("unknown site type id");
    auto add = [&](int s, int t) {
        auto& p = sites_[s].partners;
        if (std::find(p.begin(), p.end(), t) == p.end()) {
            p.push_back(t);
            std::sort(p.begin(), p.end());
        }
    };
    add(siteA, siteB);
    add(siteB, siteA);
}

std::optional<int> ContactGraph::findAgentType(std::string_view name) const {
    for (std::size_t i = 0; i < agents_.size(); ++i)
        if (agents_[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

std::optional<int> ContactGraph::findSiteType(int agentType, std::string_view name) const {
    for (int s : agentType_(agentType).sites)
        if (sites_[s].name == name) return s;
    return std::nullopt;
}

std::optional<int> ContactGraph::findState(int siteType, std::string_view label) const {
    const auto& states = siteType_(siteType).states;
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == label) return static_cast<int>(i);
    return std::nullopt;
}

bool ContactGraph::canBind(int siteA, int siteB) const {
    const auto& p = siteType_(siteA).partners;
    return std::binary_search(p.begin(), p.end(), siteB);
}

std::string ContactGraph::siteLabel(int siteType) const {
    const auto& st = siteType_(siteType);
    return agents_[st.owner].name + "." + st.name;
}

}  // namespace thermograph
