#include <benchmark/benchmark.h>

#include "fcone/gorenstein.hpp"
#include "fcone/kollar.hpp"
#include "fcone/selftest.hpp"
#include "fcone/toric.hpp"
#include "fcone/volume.hpp"

namespace {

using namespace fcone;

ToricCone a1_line_cone() {
    return ToricCone(Cone(3, {QVec{Rat(0), Rat(0), Rat(1)}, QVec{Rat(0), Rat(2), Rat(1)},
                              QVec{Rat(1), Rat(0), Rat(0)}}),
                     Lattice::standard(3));
}

void DualCone(benchmark::State& state) {
    selftest::Rng rng(42);
    std::vector<Cone> cones;
    for (int i = 0; i < 64; ++i) {
        std::vector<QVec> gens;
        for (int k = 0; k < 4; ++k) {
            QVec g(3);
            for (int j = 0; j < 3; ++j) g[j] = Rat(static_cast<long>(rng.below(7)) - 3);
            if (!is_zero(g)) gens.push_back(g);
        }
        cones.emplace_back(3, gens);
    }
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cones[i % cones.size()].dual());
        ++i;
    }
}
BENCHMARK(DualCone);

void TruncationVolume(benchmark::State& state) {
    ToricCone t = a1_line_cone();
    QVec xi{Rat(3, 2), Rat(5, 2), Rat(7, 3)};
    for (auto _ : state) benchmark::DoNotOptimize(volume_xi(t, xi));
}
BENCHMARK(TruncationVolume);

void MinimizeNvolNumeric(benchmark::State& state) {
    ToricCone t = a1_line_cone();
    Rat tol(1, 1 << state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(minimize_nvol_numeric(t, tol));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(MinimizeNvolNumeric)->Arg(10)->Arg(20)->Arg(30);

void MldWitness(benchmark::State& state) {
    selftest::Rng rng(7);
    auto inst = selftest::random_proper_klt(rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(mld_bound_witness(inst.divisor, inst.boundary));
}
BENCHMARK(MldWitness);

void GorensteinSolve(benchmark::State& state) {
    selftest::Rng rng(11);
    auto inst = selftest::random_proper_klt(rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_gorenstein(inst.divisor, inst.boundary));
}
BENCHMARK(GorensteinSolve);

}  // namespace

BENCHMARK_MAIN();
