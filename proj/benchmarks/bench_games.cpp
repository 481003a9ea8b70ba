#include <benchmark/benchmark.h>

#include "wfresil/asp_codegen.hpp"
#include "wfresil/games.hpp"
#include "wfresil/harness.hpp"
#include "wfresil/reductions.hpp"

using namespace wfresil;

namespace {

std::vector<WorkflowPolicy> sample_policies(std::size_t steps, std::size_t users) {
    std::vector<WorkflowPolicy> out;
    for (std::uint64_t seed = 1; seed <= 32; ++seed) {
        GenParams p;
        p.seed = seed;
        p.steps = {steps, steps};
        p.users = {users, users};
        p.sod = {0, steps};
        out.push_back(random_policy(p));
    }
    return out;
}

void run_decider(benchmark::State& state, Analysis a) {
    auto policies = sample_policies(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    const Budget t{static_cast<std::size_t>(state.range(2))};
    for (auto _ : state)
        for (const auto& p : policies) benchmark::DoNotOptimize(decide(a, p, t).decision);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * policies.size()));
}

void BM_Wsp(benchmark::State& s) { run_decider(s, Analysis::Wsp); }
void BM_Srcp(benchmark::State& s) { run_decider(s, Analysis::Srcp); }
void BM_Orcp(benchmark::State& s) { run_decider(s, Analysis::Orcp); }
void BM_Crcp(benchmark::State& s) { run_decider(s, Analysis::Crcp); }
void BM_Drcp(benchmark::State& s) { run_decider(s, Analysis::Drcp); }

void BM_EmitSrcp(benchmark::State& state) {
    auto policies = sample_policies(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state)
        for (const auto& p : policies) benchmark::DoNotOptimize(emit_srcp_program(p, Budget{1}).text.size());
}

void BM_EmitOrcp(benchmark::State& state) {
    auto policies = sample_policies(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state)
        for (const auto& p : policies) benchmark::DoNotOptimize(emit_orcp_program(p, Budget{1}).text.size());
}

void BM_SuccradOrcp(benchmark::State& state) {
    auto r = succrad_to_orcp(circuit_from_truth_table(static_cast<unsigned>(state.range(0))), 1, 2);
    for (auto _ : state) benchmark::DoNotOptimize(decide_orcp(r.policy, r.budget).decision);
}

} // namespace

BENCHMARK(BM_Wsp)->Args({3, 4, 0})->Args({6, 6, 0})->Args({8, 8, 0});
BENCHMARK(BM_Srcp)->Args({3, 4, 1})->Args({3, 4, 2})->Args({6, 6, 2});
BENCHMARK(BM_Orcp)->Args({3, 4, 1})->Args({3, 4, 2})->Args({5, 5, 1});
BENCHMARK(BM_Crcp)->Args({3, 4, 1})->Args({3, 4, 2});
BENCHMARK(BM_Drcp)->Args({3, 4, 1})->Args({3, 4, 2});
BENCHMARK(BM_EmitSrcp)->Args({3, 4})->Args({8, 8});
BENCHMARK(BM_EmitOrcp)->Args({3, 4})->Args({8, 8});
BENCHMARK(BM_SuccradOrcp)->Arg(0)->Arg(6)->Arg(15);
BENCHMARK_MAIN();
