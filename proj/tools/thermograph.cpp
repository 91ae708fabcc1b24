// thermograph: compile, simulate, verify and inspect energy-based models.

#include "thermograph/compile.hpp"
#include "thermograph/errors.hpp"
#include "thermograph/gluing.hpp"
#include "thermograph/kasim_export.hpp"
#include "thermograph/notation.hpp"
#include "thermograph/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace thermograph;
using nlohmann::json;

namespace {

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IO", "cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void writeFile(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IO", "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("IO", "failed writing '" + path.string() + "'");
}

struct Common {
    std::string model;
    std::string policy;
    std::string out;
    bool json = false;
};

CompiledModel load(const Common& c) {
    ModelFile m;
    try {
        m = parseModel(readFile(c.model));
    } catch (const ParseError& e) {
        throw ParseError(e.code(), c.model + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                                       ": " + e.what(),
                         e.line(), e.column());
    }
    CompileOptions opts;
    if (!c.policy.empty()) opts.policyOverride = c.policy;
    return compileModel(m, opts);
}

std::string deltaText(const CompiledModel& m, const BalanceVector& d) {
    std::string out;
    for (std::size_t c = 0; c < d.size(); ++c) {
        if (d[c] == 0) continue;
        if (!out.empty()) out += d[c] > 0 ? " + " : " - ";
        else if (d[c] < 0) out += "-";
        long mag = d[c] < 0 ? -d[c] : d[c];
        if (mag != 1) out += std::to_string(mag) + "*";
        out += m.energy.names[c];
    }
    return out.empty() ? "0" : out;
}

json rulesJson(const CompiledModel& m) {
    json rules = json::array();
    std::vector<double> logRates;
    if (!m.policy.dependsOnCounts()) logRates = m.policy.logRates(m.rules, m.energy);
    for (std::size_t i = 0; i < m.rules.size(); ++i) {
        const RatedRule& r = m.rules[i];
        json delta = json::object();
        for (std::size_t c = 0; c < m.energy.size(); ++c) delta[m.energy.names[c]] = r.refined.delta[c];
        json j{{"name", r.refined.name},
               {"generator", r.generator},
               {"inverse", r.inverse},
               {"mirror", m.rules[r.mirror].refined.name},
               {"lhs", formatPattern(r.refined.rule.lhs())},
               {"rhs", formatPattern(r.refined.rule.rhs())},
               {"balance", delta},
               {"provenance", r.refined.provenance}};
        if (!logRates.empty()) j["logRate"] = logRates[i];
        rules.push_back(std::move(j));
    }
    return json{{"policy", toString(m.policy.kind())},
                {"patterns", m.energy.names},
                {"balanceRank", balanceRank(m.rules)},
                {"rules", rules}};
}

std::string balanceTable(const CompiledModel& m) {
    std::string out = "rule";
    for (const auto& n : m.energy.names) out += "\t" + n;
    out += "\n";
    for (const auto& r : m.rules) {
        out += r.refined.name;
        for (long d : r.refined.delta) out += "\t" + std::to_string(d);
        out += "\n";
    }
    return out;
}

int cmdCompile(const Common& c) {
    CompiledModel m = load(c);
    std::string stem = fs::path(c.model).stem().string();
    std::string kasim;
    std::string kasimError;
    try {
        kasim = exportKasim(m).text;
    } catch (const Error& e) {
        if (e.code() != "EXPORT") throw;
        kasimError = e.what();
    }
    int rank = balanceRank(m.rules);
    if (c.json) {
        std::cout << rulesJson(m).dump(2) << "\n";
    } else {
        if (m.explicitRules) {
            std::cout << m.rules.size() << " explicit rules\n";
        } else {
            for (const Rule& g : m.generators) {
                auto members = m.membersOf(g.name());
                std::cout << g.name() << ": " << members.size() << " refinements (" << members.size()
                          << " in each direction)\n";
                for (std::size_t i : members) {
                    const RatedRule& r = m.rules[i];
                    std::cout << "  " << r.refined.name << "  " << formatPattern(r.refined.rule.lhs()) << "  ["
                              << deltaText(m, r.refined.delta) << "]\n";
                }
            }
        }
        std::cout << "balance rank: " << rank << "\n";
        CompatReport compat = checkCompat(m.rules, m.policy, m.energy);
        std::cout << "rate compatibility (" << toString(m.policy.kind()) << "): " << (compat.ok ? "ok" : "VIOLATED")
                  << " over " << compat.pairs << " pairs\n";
        for (const auto& v : compat.violations)
            std::cout << "  " << v.rule << " / " << v.mirror << ": expected " << v.expected << ", observed "
                      << v.observed << "\n";
    }
    if (!kasimError.empty()) std::cerr << "note: KaSim export skipped: " << kasimError << "\n";
    if (!c.out.empty()) {
        fs::path dir(c.out);
        writeFile(dir / (stem + ".rules.json"), rulesJson(m).dump(2) + "\n");
        writeFile(dir / (stem + ".balance.tsv"), balanceTable(m));
        if (kasimError.empty()) writeFile(dir / (stem + ".ka"), kasim);
        std::cerr << "wrote " << (dir / stem).string() << ".{rules.json,balance.tsv" << (kasimError.empty() ? ",ka" : "")
                  << "}\n";
    }
    return 0;
}

struct SimulateArgs {
    double horizon = 100.0;
    double sampleEvery = 1.0;
    std::uint64_t seed = 1;
    int replicates = 1;
    int jobs = 1;
    std::string eventLog;
    std::string snapshot;
    std::size_t maxEvents = 0;
};

fs::path replicatePath(const std::string& base, int i, int n) {
    if (n == 1) return base;
    fs::path p(base);
    return p.parent_path() / (p.stem().string() + "." + std::to_string(i) + p.extension().string());
}

int cmdSimulate(const Common& c, const SimulateArgs& a) {
    CompiledModel m = load(c);
    if (a.replicates < 1) throw InvalidArgument("--replicates must be at least 1");
    if (a.replicates > 1 && c.out.empty()) throw InvalidArgument("--replicates needs --out");
    RunOptions base;
    base.horizon = a.horizon;
    base.sampleEvery = a.sampleEvery;
    base.interventions = m.interventions;
    if (a.maxEvents) base.maxEvents = a.maxEvents;

    std::vector<std::string> csv(static_cast<std::size_t>(a.replicates));
    std::vector<std::string> errors(csv.size());
    std::vector<int> errorCodes(csv.size(), 0);
    std::atomic<int> next{0};
    std::mutex io;
    auto worker = [&] {
        for (int i = next++; i < a.replicates; i = next++) {
            try {
                Simulator sim(m.rules, m.policy, m.energy, m.initial, a.seed + static_cast<std::uint64_t>(i));
                RunOptions opts = base;
                std::ofstream log;
                if (!a.eventLog.empty()) {
                    log.open(replicatePath(a.eventLog, i, a.replicates));
                    if (!log) throw Error("IO", "cannot write event log");
                    opts.eventLog = &log;
                }
                Trajectory t = run(sim, m.observables, opts);
                std::ostringstream s;
                t.writeCsv(s);
                csv[i] = s.str();
                {
                    std::lock_guard lock(io);
                    for (const auto& w : t.warnings) std::cerr << "warning (seed " << a.seed + i << "): " << w << "\n";
                }
                if (!a.snapshot.empty())
                    writeFile(replicatePath(a.snapshot, i, a.replicates), snapshot(sim.mixture()));
            } catch (const Error& e) {
                errors[i] = e.what();
                errorCodes[i] = e.code() == "INV" ? 2 : 1;
            }
        }
    };
    std::vector<std::thread> pool;
    int jobs = std::max(1, std::min(a.jobs, a.replicates));
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int code = 0;
    for (std::size_t i = 0; i < csv.size(); ++i)
        if (errorCodes[i]) {
            std::cerr << "error (seed " << a.seed + i << "): " << errors[i] << "\n";
            code = std::max(code, errorCodes[i]);
        }
    if (code) return code;
    for (std::size_t i = 0; i < csv.size(); ++i) {
        if (c.out.empty()) std::cout << csv[i];
        else writeFile(replicatePath(c.out, static_cast<int>(i), a.replicates), csv[i]);
    }
    return 0;
}

struct VerifyArgs {
    std::size_t cap = 100000;
    double threshold = 1e-10;
    std::size_t events = 0;
    double tolerance = 0.02;
    std::uint64_t seed = 1;
};

int cmdVerify(const Common& c, const VerifyArgs& a) {
    CompiledModel m = load(c);
    CompatReport compat = checkCompat(m.rules, m.policy, m.energy);
    StateSpace space = enumerateComponent(m.initial, m.rules, m.policy, m.energy, a.cap);
    BalanceReport report = checkDetailedBalance(space, a.threshold);
    std::optional<EmpiricalReport> empirical;
    if (a.events) {
        Simulator sim(m.rules, m.policy, m.energy, m.initial, a.seed);
        empirical = compareEmpirical(recordOccupancy(sim, a.events), space, a.tolerance);
    }
    bool pass = compat.ok && report.pass && report.energyViolations == 0 && (!empirical || empirical->pass);
    if (c.json) {
        json j{{"states", space.size()},
               {"compatible", compat.ok},
               {"detailedBalance", json::parse(report.toJson())},
               {"pass", pass}};
        if (empirical) j["empirical"] = json::parse(empirical->toJson());
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "states: " << space.size() << "\n"
                  << "rate compatibility: " << (compat.ok ? "ok" : "VIOLATED") << "\n"
                  << report.toText();
        if (empirical) std::cout << empirical->toText();
        std::cout << (pass ? "PASS" : "FAIL") << "\n";
    }
    return pass ? 0 : 1;
}

struct InspectArgs {
    std::string subject;
    std::string left, right, generator;
};

int cmdInspect(const Common& c, const InspectArgs& a) {
    CompiledModel m = load(c);
    auto generator = [&]() -> const Rule& {
        for (const Rule& g : m.generators)
            if (g.name() == a.generator) return g;
        throw InvalidArgument("unknown generator '" + a.generator + "'");
    };
    if (a.subject == "balance") {
        std::cout << balanceTable(m) << "rank: " << balanceRank(m.rules) << "\n";
        return 0;
    }
    if (a.subject == "requests") {
        const Rule& g = generator();
        for (std::size_t i : m.membersOf(g.name())) {
            const RatedRule& r = m.rules[i];
            const Extension& ext = r.refined.ext;
            SiteRequestMap req = computeRequests(g, ext.phi, ext.t, m.energy.patterns);
            std::cout << r.refined.name << "  " << formatPattern(ext.t) << "\n";
            for (int u = 0; u < ext.t.agentCount(); ++u) {
                const auto& type = m.graph->agentType(ext.t.agent(u).type);
                std::cout << "  " << type.name << "#" << u << ":";
                for (std::size_t s = 0; s < type.sites.size(); ++s)
                    if (req.isRequested(u, static_cast<int>(s))) std::cout << " " << m.graph->siteType(type.sites[s]).name;
                std::cout << "\n";
            }
        }
        return 0;
    }
    if (a.subject == "gluings") {
        if (a.left.empty()) throw InvalidArgument("inspect gluings needs --left");
        ContactMap left = parsePattern(m.graph, a.left);
        const Rule* g = a.generator.empty() ? nullptr : &generator();
        if (a.right.empty() && !g) throw InvalidArgument("inspect gluings needs --right or --generator");
        ContactMap right = a.right.empty() ? g->lhs() : parsePattern(m.graph, a.right);
        auto gluings = minimalGluings(left, right);
        std::cout << gluings.size() << " minimal gluings\n";
        for (std::size_t i = 0; i < gluings.size(); ++i) {
            const auto& mg = gluings[i];
            std::cout << "  [" << i + 1 << "] overlap: "
                      << (mg.overlap.apex.agentCount() ? formatPattern(mg.overlap.apex) : std::string("(empty)"))
                      << "\n      glued: " << formatPattern(mg.glued());
            if (g && a.right.empty())
                std::cout << (classifyRelevance(mg, *g, RuleSide::Left).relevant ? "  (relevant)" : "");
            std::cout << "\n";
        }
        return 0;
    }
    throw InvalidArgument("unknown inspect subject '" + a.subject + "' (gluings, requests, balance)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compile energy-based rule models into thermodynamically consistent rule sets"};
    app.require_subcommand(1);
    Common common;
    auto addCommon = [&](CLI::App* sub) {
        sub->add_option("model", common.model, "Model file")->required()->check(CLI::ExistingFile);
        sub->add_option("--policy-override", common.policy, "Replace the model's %policy, e.g. \"metropolis\"");
        sub->add_flag("--json", common.json, "Machine-readable output");
    };

    auto* compile = app.add_subcommand("compile", "Refine generators and export the rule set");
    addCommon(compile);
    compile->add_option("--out", common.out, "Directory for rules JSON, balance table and KaSim export");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run the stochastic simulation and write a CSV trajectory");
    addCommon(simulate);
    simulate->add_option("--horizon", sim.horizon, "Simulated time")->check(CLI::NonNegativeNumber);
    simulate->add_option("--sample-every", sim.sampleEvery, "Sampling step")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "Seed of the first replicate");
    simulate->add_option("--out", common.out, "CSV path (stdout when omitted)");
    simulate->add_option("--replicates", sim.replicates, "Independent runs with consecutive seeds");
    simulate->add_option("--jobs", sim.jobs, "Parallel workers for replicates");
    simulate->add_option("--event-log", sim.eventLog, "Write `time rule embedding` per event");
    simulate->add_option("--snapshot", sim.snapshot, "Write the final mixture");
    simulate->add_option("--max-events", sim.maxEvents, "Stop after this many events");

    VerifyArgs ver;
    auto* verify = app.add_subcommand("verify", "Certify detailed balance on the reachable state space");
    addCommon(verify);
    verify->add_option("--cap", ver.cap, "Largest state space to enumerate");
    verify->add_option("--threshold", ver.threshold, "Relative detailed-balance tolerance");
    verify->add_option("--events", ver.events, "Also compare a simulation of this many events with the Boltzmann law");
    verify->add_option("--tolerance", ver.tolerance, "Absolute occupancy tolerance");
    verify->add_option("--seed", ver.seed, "Seed of the empirical run");

    InspectArgs ins;
    auto* inspect = app.add_subcommand("inspect", "Print gluings, site requests or balance vectors");
    inspect->add_option("subject", ins.subject, "gluings | requests | balance")->required();
    addCommon(inspect);
    inspect->add_option("--left", ins.left, "Pattern (gluings)");
    inspect->add_option("--right", ins.right, "Pattern (gluings)");
    inspect->add_option("--generator", ins.generator, "Generator name");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*compile) return cmdCompile(common);
        if (*simulate) return cmdSimulate(common, sim);
        if (*verify) return cmdVerify(common, ver);
        if (*inspect) return cmdInspect(common, ins);
    } catch (const ParseError& e) {
        std::cerr << "error " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error " << e.code() << ": " << e.what() << "\n";
        return e.code() == "INV" ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
