#include <benchmark/benchmark.h>

#include "lazysem/checks.hpp"
#include "lazysem/denotational.hpp"
#include "lazysem/natural.hpp"
#include "lazysem/parse.hpp"
#include "lazysem/stacked.hpp"

using namespace lazysem;

namespace {

GeneratedCase case_at(std::uint64_t idx, GenMode mode) {
    GenConfig cfg;
    cfg.seed = 42;
    return gen_config(cfg, idx, mode);
}

void BM_enumerate_rank3(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate(3).size());
    }
}
BENCHMARK(BM_enumerate_rank3);

void BM_lub_rank3(benchmark::State& state) {
    const auto& all = enumerate(3);
    std::size_t i = 0;
    for (auto _ : state) {
        const DomElem& a = all[i % all.size()];
        const DomElem& b = all[(i * 7 + 3) % all.size()];
        benchmark::DoNotOptimize(lub(a, b));
        ++i;
    }
}
BENCHMARK(BM_lub_rank3);

void BM_eval_nat(benchmark::State& state) {
    ExprPtr e = parse("let i = \\x. x, k = \\a. \\b. a in k i i (k i i)",
                      ParseOptions{true, nullptr});
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_nat({}, e, {}, 256).outcome);
    }
}
BENCHMARK(BM_eval_nat);

void BM_eval_stacked(benchmark::State& state) {
    ExprPtr e = parse("let i = \\x. x, k = \\a. \\b. a in k i i (k i i)",
                      ParseOptions{true, nullptr});
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_via_stack({}, e, {}, 256).outcome);
    }
}
BENCHMARK(BM_eval_stacked);

void BM_den_expr(benchmark::State& state) {
    int rank = static_cast<int>(state.range(0));
    ExprPtr e = parse("let i = \\x. x in \\a. i a");
    Env bot(rank);
    for (auto _ : state) {
        benchmark::DoNotOptimize(den_expr(e, bot, rank, HeapVariant::Join).rank());
    }
}
BENCHMARK(BM_den_expr)->Arg(2)->Arg(3)->Arg(4);

void BM_den_heap_generated(benchmark::State& state) {
    std::vector<GeneratedCase> cases;
    for (std::uint64_t i = 0; i < 32; ++i) cases.push_back(case_at(i, GenMode::WithEnv));
    std::size_t i = 0;
    for (auto _ : state) {
        const GeneratedCase& c = cases[i++ % cases.size()];
        benchmark::DoNotOptimize(den_heap(c.heap, c.env, 3, HeapVariant::Join).rank());
    }
}
BENCHMARK(BM_den_heap_generated);

void BM_theorem1_case(benchmark::State& state) {
    GenConfig cfg;
    cfg.seed = 42;
    cfg.cases = 1;
    std::uint64_t i = 0;
    for (auto _ : state) {
        auto rs = run_suite("theorem1", cfg, 1);
        benchmark::DoNotOptimize(rs.front().passed);
        cfg.seed = 42 + (++i);
    }
}
BENCHMARK(BM_theorem1_case);

}  // namespace

BENCHMARK_MAIN();
