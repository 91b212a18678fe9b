#include <benchmark/benchmark.h>

#include <random>

#include "kummod/decomposition.hpp"

using namespace kummod;

namespace {

// Howell form of a random square matrix over Z/p^k.
void BM_Howell(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    Zpk R(3, 4);
    std::mt19937_64 rng(1);
    Mat A(n, Vec(n));
    for (auto& row : A)
        for (auto& c : row) c = rng() % R.q;
    for (auto _ : state) {
        HowellBasis H(R, n, A);
        benchmark::DoNotOptimize(H.log_order());
    }
}
BENCHMARK(BM_Howell)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_Dlog(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    Tower T(FieldSpec::cyclotomic(3, 1), m);
    KummerModule J = kummer_module(T, m);
    std::mt19937_64 rng(2);
    std::vector<FieldUnit> xs;
    for (int k = 0; k < 16; ++k) {
        Elem e = T.zero();
        for (auto& c : e) c = rng() % T.coeffs().q;
        e[0] = T.coeffs().from(1 + 3 * static_cast<i64>(rng() % 9));
        xs.push_back(T.to_unit(e));
    }
    std::size_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(J.dlog(xs[k++ % xs.size()]));
}
BENCHMARK(BM_Dlog)->Arg(1)->Arg(2)->Arg(3);

void BM_Decompose(benchmark::State& state, FieldSpec spec) {
    const int m = static_cast<int>(state.range(0));
    Tower T(spec, m);
    for (auto _ : state) benchmark::DoNotOptimize(decompose(T, m).log_order);
}
BENCHMARK_CAPTURE(BM_Decompose, unramified_3_1, FieldSpec::unramified(3, 1))->Arg(1)->Arg(2)->Arg(3);
BENCHMARK_CAPTURE(BM_Decompose, quadratic2_m1, FieldSpec::quadratic2(-1))->Arg(1)->Arg(2)->Arg(3);
BENCHMARK_CAPTURE(BM_Decompose, cyclotomic_3_1, FieldSpec::cyclotomic(3, 1))->Arg(1)->Arg(2)->Arg(3);

void BM_BruteIndecomposable(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    NormVector a{NormEntry{0}, NormEntry{2}};
    a.resize(static_cast<std::size_t>(m));
    XModule X = construct_X(3, 2, a, 1, m);
    for (auto _ : state) benchmark::DoNotOptimize(brute_indecomposable(X.M).verdict);
}
BENCHMARK(BM_BruteIndecomposable)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
