#include "thermograph/energy.hpp"

#include "thermograph/errors.hpp"

#include <cmath>
#include <cstdlib>

namespace thermograph {

bool EnergyModel::isLinear() const {
    for (double q : quadratic)
        if (q != 0.0) return false;
    return true;
}

void EnergyModel::validate() const {
    if (names.size() != patterns.size() || costs.size() != patterns.size())
        throw InvalidArgument("energy model: names, patterns and costs differ in size");
    if (!quadratic.empty() && quadratic.size() != patterns.size())
        throw InvalidArgument("energy model: quadratic coefficients differ in size");
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        if (patterns[i].agentCount() == 0 || connectedComponents(patterns[i]).size() != 1)
            throw InvalidArgument("energy pattern '" + names[i] + "' is not connected");
        if (!patterns[i].realizability().isRealizable)
            throw InvalidArgument("energy pattern '" + names[i] + "' is not realizable");
    }
}

double EnergyModel::energy(const PatternCounts& counts) const {
    double e = 0.0;
    for (std::size_t c = 0; c < costs.size(); ++c) {
        double n = static_cast<double>(counts[c]);
        e += costs[c] * n;
        if (!quadratic.empty()) e += quadratic[c] * n * n;
    }
    return e;
}

PatternCounts patternCounts(const ContactMap& x, const std::vector<ContactMap>& patterns) {
    PatternCounts out;
    out.reserve(patterns.size());
    for (const auto& p : patterns) out.push_back(static_cast<long>(countOccurrences(p, x)));
    return out;
}

double energy(const ContactMap& x, const EnergyModel& model) {
    return model.energy(patternCounts(x, model.patterns));
}

void appendGenerator(RuleSet& set, const Rule& g, const std::vector<RefinedRule>& refined) {
    auto mirrors = mirrorRefinement(g, refined);
    std::size_t base = set.size(), n = refined.size();
    for (std::size_t i = 0; i < n; ++i) set.push_back({refined[i], g.name(), false, base + n + i});
    for (std::size_t i = 0; i < n; ++i) set.push_back({std::move(mirrors[i]), g.name(), true, base + i});
}

const char* toString(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Metropolis: return "metropolis";
        case PolicyKind::Symmetric: return "symmetric";
        case PolicyKind::LogAffine: return "log-affine";
        case PolicyKind::Nonlinear: return "nonlinear";
        case PolicyKind::Table: return "table";
    }
    return "?";
}

RatePolicy RatePolicy::metropolis() {
    RatePolicy p;
    p.kind_ = PolicyKind::Metropolis;
    return p;
}

RatePolicy RatePolicy::symmetric(std::map<std::string, double> timeScales) {
    for (const auto& [g, s] : timeScales)
        if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("time scale of '" + g + "' must be positive");
    RatePolicy p;
    p.kind_ = PolicyKind::Symmetric;
    p.scales_ = std::move(timeScales);
    return p;
}

RatePolicy RatePolicy::logAffine(std::map<std::string, AffineParams> params) {
    RatePolicy p;
    p.kind_ = PolicyKind::LogAffine;
    p.affine_ = std::move(params);
    return p;
}

RatePolicy RatePolicy::logAffine(const std::string& generator, AffineParams forward, const AffineParams& inverse,
                                 std::map<std::string, AffineParams> others) {
    if (forward.A.size() != inverse.A.size()) throw InvalidArgument("A_g and A_g* differ in size");
    auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(forward.A.size()))));
    if (n * n != forward.A.size()) throw InvalidArgument("A_g is not square");
    if (std::abs(forward.c - inverse.c) > 1e-12) throw InvalidArgument("c_g and c_g* differ");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double sum = forward.A[i * n + j] + inverse.A[i * n + j];
            if (std::abs(sum - (i == j ? 1.0 : 0.0)) > 1e-12)
                throw InvalidArgument("A_g + A_g* is not the identity for '" + generator + "'");
        }
    others[generator] = std::move(forward);
    return logAffine(std::move(others));
}

RatePolicy RatePolicy::nonlinear(std::map<std::string, NonlinearParams> params) {
    RatePolicy p;
    p.kind_ = PolicyKind::Nonlinear;
    p.nonlinear_ = std::move(params);
    return p;
}

RatePolicy RatePolicy::table(std::map<std::string, double> logRates) {
    RatePolicy p;
    p.kind_ = PolicyKind::Table;
    p.table_ = std::move(logRates);
    return p;
}

namespace {

double dot(const std::vector<double>& a, const BalanceVector& d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) s += a[i] * static_cast<double>(d[i]);
    return s;
}

}  // namespace

double psi(const EnergyModel& model, const PatternCounts& counts, const BalanceVector& delta) {
    PatternCounts next = counts;
    for (std::size_t i = 0; i < next.size(); ++i) next[i] += delta[i];
    return model.energy(next) - model.energy(counts);
}

double RatePolicy::logRate(const RatedRule& r, const EnergyModel& model, const PatternCounts* counts) const {
    const BalanceVector& delta = r.refined.delta;
    if (delta.size() != model.size()) throw InvalidArgument("balance vector size does not match the energy model");
    if (kind_ == PolicyKind::Nonlinear) {
        if (!counts) throw InvalidArgument("nonlinear rates need pattern counts");
        NonlinearParams p;
        if (auto it = nonlinear_.find(r.generator); it != nonlinear_.end()) p = it->second;
        double beta = r.inverse ? 1.0 - p.beta : p.beta;
        return p.alpha - beta * psi(model, *counts, delta);
    }
    if (kind_ == PolicyKind::Table) {
        auto it = table_.find(r.refined.name);
        if (it == table_.end()) throw InvalidArgument("no rate for rule '" + r.refined.name + "'");
        return it->second;
    }
    if (!model.isLinear()) throw InvalidArgument(std::string(toString(kind_)) + " rates need a linear energy");
    double e = dot(model.costs, delta);  // eps . delta of this member
    switch (kind_) {
        case PolicyKind::Metropolis:
            return r.inverse ? 0.0 : -e;
        case PolicyKind::Symmetric: {
            double scale = 1.0;
            if (auto it = scales_.find(r.generator); it != scales_.end()) scale = it->second;
            return std::log(scale) - e / 2;
        }
        case PolicyKind::LogAffine: {
            auto it = affine_.find(r.generator);
            if (it == affine_.end()) return -e / 2;
            const AffineParams& p = it->second;
            std::size_t n = model.size();
            if (p.A.size() != n * n) throw InvalidArgument("A_g of '" + r.generator + "' has the wrong size");
            // (A eps) . delta, with I - A for the inverse member
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    double a = p.A[i * n + j];
                    if (r.inverse) a = (i == j ? 1.0 : 0.0) - a;
                    row += a * model.costs[j];
                }
                s += row * static_cast<double>(delta[i]);
            }
            return p.c - s;
        }
        case PolicyKind::Nonlinear:
        case PolicyKind::Table: break;
    }
    return 0.0;
}

std::vector<double> RatePolicy::logRates(const RuleSet& set, const EnergyModel& model) const {
    if (kind_ == PolicyKind::Nonlinear) throw InvalidArgument("nonlinear rates depend on the state");
    std::vector<double> out;
    out.reserve(set.size());
    for (const auto& r : set) out.push_back(logRate(r, model));
    return out;
}

namespace {

bool close(double observed, double expected, double tol) {
    return std::abs(observed - expected) <= tol * std::max(1.0, std::abs(expected));
}

}  // namespace

CompatReport checkCompat(const RuleSet& set, std::span<const double> logRates, const EnergyModel& model,
                         double tol) {
    if (logRates.size() != set.size()) throw InvalidArgument("one rate per rule expected");
    CompatReport report;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const RatedRule& r = set[i];
        if (r.inverse) continue;
        ++report.pairs;
        double expected = dot(model.costs, r.refined.delta);
        double observed = logRates[r.mirror] - logRates[i];
        if (!close(observed, expected, tol)) {
            report.ok = false;
            report.violations.push_back({r.refined.name, set[r.mirror].refined.name, expected, observed});
        }
    }
    return report;
}

CompatReport checkCompat(const RuleSet& set, const RatePolicy& policy, const EnergyModel& model, double tol) {
    if (!policy.dependsOnCounts()) return checkCompat(set, policy.logRates(set, model), model, tol);
    std::size_t n = model.size();
    std::vector<PatternCounts> grid{PatternCounts(n, 0)};
    while (grid.size() < 4096) {
        // odometer over {0..3}^n
        PatternCounts v = grid.back();
        std::size_t k = 0;
        while (k < n && v[k] == 3) v[k++] = 0;
        if (k == n) break;
        ++v[k];
        grid.push_back(v);
    }
    CompatReport report;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const RatedRule& r = set[i];
        if (r.inverse) continue;
        ++report.pairs;
        const RatedRule& m = set[r.mirror];
        for (const auto& counts : grid) {
            PatternCounts after = counts;
            for (std::size_t c = 0; c < n; ++c) after[c] += r.refined.delta[c];
            double expected = psi(model, counts, r.refined.delta);
            double observed = policy.logRate(m, model, &after) - policy.logRate(r, model, &counts);
            if (!close(observed, expected, tol)) {
                report.ok = false;
                report.violations.push_back({r.refined.name, m.refined.name, expected, observed});
                break;
            }
        }
    }
    return report;
}

int balanceRank(const std::vector<BalanceVector>& rows) {
    if (rows.empty()) return 0;
    std::size_t cols = rows.front().size();
    std::vector<std::vector<__int128>> m;
    for (const auto& r : rows) {
        if (r.size() != cols) throw InvalidArgument("balance vectors differ in length");
        m.emplace_back(r.begin(), r.end());
    }
    // Bareiss fraction-free elimination
    int rank = 0;
    __int128 prev = 1;
    for (std::size_t col = 0; col < cols && rank < static_cast<int>(m.size()); ++col) {
        std::size_t pivot = static_cast<std::size_t>(rank);
        while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[pivot], m[static_cast<std::size_t>(rank)]);
        auto& p = m[static_cast<std::size_t>(rank)];
        for (std::size_t i = static_cast<std::size_t>(rank) + 1; i < m.size(); ++i) {
            for (std::size_t j = col + 1; j < cols; ++j) m[i][j] = (p[col] * m[i][j] - m[i][col] * p[j]) / prev;
            m[i][col] = 0;
        }
        prev = p[col];
        ++rank;
    }
    return rank;
}

int balanceRank(const RuleSet& set) {
    std::vector<BalanceVector> rows;
    for (const auto& r : set) rows.push_back(r.refined.delta);
    return balanceRank(rows);
}

}  // namespace thermograph
