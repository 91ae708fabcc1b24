#include "thermograph/compile.hpp"
#include "thermograph/model_file.hpp"
#include "thermograph/notation.hpp"
#include "thermograph/refine.hpp"
#include "thermograph/sim.hpp"

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

using namespace thermograph;

namespace {

ModelFile source(const std::string& name) {
    std::ifstream in(std::string(THERMOGRAPH_MODELS_DIR) + "/" + name);
    std::stringstream buf;
    buf << in.rdbuf();
    return parseModel(buf.str());
}

const CompiledModel& triangles() {
    static const CompiledModel m = compileModel(source("triangles.model"));
    return m;
}

// A triangle mixture after some mixing, so that patterns have many images.
const ContactMap& mixedTriangles() {
    static const ContactMap x = [] {
        const auto& m = triangles();
        Simulator sim(m.rules, m.policy, m.energy, m.initial, 1);
        for (int i = 0; i < 5000; ++i) sim.step();
        return sim.mixture();
    }();
    return x;
}

void BM_CountTriangles(benchmark::State& state) {
    const auto& x = mixedTriangles();
    const auto& t = triangles().energy.patterns[3];
    for (auto _ : state) benchmark::DoNotOptimize(countEmbeddings(t, x));
}
BENCHMARK(BM_CountTriangles);

void BM_CountBonds(benchmark::State& state) {
    const auto& x = mixedTriangles();
    const auto& ab = triangles().energy.patterns[0];
    for (auto _ : state) benchmark::DoNotOptimize(countEmbeddings(ab, x));
}
BENCHMARK(BM_CountBonds);

void BM_CanonicalForm(benchmark::State& state) {
    const auto& m = triangles();
    auto p = parsePattern(m.graph, "C(l!r.B, r!1), A(l!1, r), B(l, r!2), C(l!2, r!l.A)");
    for (auto _ : state) benchmark::DoNotOptimize(canonicalForm(p));
}
BENCHMARK(BM_CanonicalForm);

void BM_RefineTriangleBind(benchmark::State& state) {
    const auto& m = triangles();
    for (auto _ : state) benchmark::DoNotOptimize(enumerateMature(m.generators[0], m.energy.patterns));
}
BENCHMARK(BM_RefineTriangleBind);

void BM_CompileRing(benchmark::State& state) {
    auto src = source("ring.model");
    for (auto _ : state) benchmark::DoNotOptimize(compileModel(src));
}
BENCHMARK(BM_CompileRing)->Unit(benchmark::kMillisecond);

void BM_SimulateTriangles(benchmark::State& state) {
    const auto& m = triangles();
    for (auto _ : state) {
        Simulator sim(m.rules, m.policy, m.energy, m.initial, 7);
        for (int i = 0; i < state.range(0); ++i) sim.step();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateTriangles)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
