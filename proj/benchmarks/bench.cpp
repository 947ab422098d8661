#include <benchmark/benchmark.h>

#include <numbers>

#include "mtc/braiding.hpp"
#include "mtc/bulk.hpp"
#include "mtc/dynamics.hpp"
#include "mtc/ed.hpp"
#include "mtc/linalg.hpp"

using namespace mtc;

namespace {

constexpr double pi = std::numbers::pi;

ChainSpec generic(int n) { return ChainSpec::from_products(n, 1.0, 0.3, 3.0, 3.3, 2.9); }

void BM_OnePeriodPropagator(benchmark::State& st)
{
    const ChainSpec s = generic(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(one_period_propagator(s).r.data());
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_OnePeriodPropagator)->RangeMultiplier(2)->Range(25, 200)->Complexity();

void BM_ApplyExpm(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    const MajoranaCoupling h = build_h1_coupling(generic(n));
    const SparseMatrix a = h.a.sparseView();
    Eigen::MatrixXd x = Eigen::MatrixXd::Identity(2 * n, 4);
    for (auto _ : st) {
        apply_expm(a, 0.5, x);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_ApplyExpm)->Arg(100)->Arg(400);

void BM_EdgeModes(benchmark::State& st)
{
    const OrthogonalPropagator r = one_period_propagator(generic(static_cast<int>(st.range(0))));
    for (auto _ : st) benchmark::DoNotOptimize(find_edge_modes(r).zero_modes.size());
}
BENCHMARK(BM_EdgeModes)->Arg(50)->Arg(100)->Arg(200);

void BM_StroboscopicZ(benchmark::State& st)
{
    const ChainSpec s = ChainSpec::from_products(static_cast<int>(st.range(0)), 1.0, 0.1, 3.0, 2.8, 4.2);
    for (auto _ : st) benchmark::DoNotOptimize(stroboscopic_z(s, 200).values.data());
}
BENCHMARK(BM_StroboscopicZ)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_BraidProtocol(benchmark::State& st)
{
    const ChainSpec s = generic(static_cast<int>(st.range(0)));
    const StageSchedule sch = canonical_schedule(s, 50);
    ProtocolOptions o;
    o.record_every = 1000;
    o.instantaneous_leakage = false;
    for (auto _ : st) benchmark::DoNotOptimize(run_protocol(sch, s, o).report.theta);
}
BENCHMARK(BM_BraidProtocol)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_FermionFloquet(benchmark::State& st)
{
    const ChainSpec s = generic(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(fermion_floquet(s).eigenphases.data());
}
BENCHMARK(BM_FermionFloquet)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_BulkGaps(benchmark::State& st)
{
    const BulkParams p = BulkParams::from_products(0.1, pi, 2.8, 2.2);
    for (auto _ : st) benchmark::DoNotOptimize(bulk_gaps(p, static_cast<int>(st.range(0))).zero_gap);
}
BENCHMARK(BM_BulkGaps)->Arg(201)->Arg(2001);

}  // namespace
BENCHMARK_MAIN();
