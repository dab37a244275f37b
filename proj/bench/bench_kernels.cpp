// Serial reference kernels against their OpenMP versions.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "qmd/builders.hpp"
#include "qmd/kernels.hpp"
#include "qmd/multdom.hpp"

namespace {

std::vector<qmd::CMatrix> kraus_list(Eigen::Index d, std::size_t k) {
    return qmd::random_unitary_mixture(d, k, 42).kraus();
}

template <auto Fn>
void superop_bench(benchmark::State& state) {
    const auto ks = kraus_list(state.range(0), 8);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(ks));
    state.SetComplexityN(state.range(0));
}

template <auto Fn>
void commutator_bench(benchmark::State& state) {
    const Eigen::Index d = state.range(0);
    const auto ks = kraus_list(d, 4);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(ks, d));
}

template <auto Fn>
void products_bench(benchmark::State& state) {
    const auto ks = kraus_list(state.range(0), 16);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(ks, ks));
}

void mult_chain_bench(benchmark::State& state) {
    const auto ch = qmd::rotated_dephasing(state.range(0), 3, 7);
    for (auto _ : state) benchmark::DoNotOptimize(qmd::mult_chain(ch).kappa);
}

}  // namespace

BENCHMARK(superop_bench<qmd::kernels::serial::superop>)->Name("superop/serial")->RangeMultiplier(2)->Range(4, 32);
BENCHMARK(superop_bench<qmd::kernels::omp::superop>)->Name("superop/omp")->RangeMultiplier(2)->Range(4, 32);
BENCHMARK(superop_bench<qmd::kernels::serial::choi>)->Name("choi/serial")->RangeMultiplier(2)->Range(4, 32);
BENCHMARK(superop_bench<qmd::kernels::omp::choi>)->Name("choi/omp")->RangeMultiplier(2)->Range(4, 32);
BENCHMARK(commutator_bench<qmd::kernels::serial::commutator_system>)->Name("commutator/serial")->DenseRange(4, 12, 4);
BENCHMARK(commutator_bench<qmd::kernels::omp::commutator_system>)->Name("commutator/omp")->DenseRange(4, 12, 4);
BENCHMARK(products_bench<qmd::kernels::serial::pairwise_products>)->Name("products/serial")->RangeMultiplier(2)->Range(4, 16);
BENCHMARK(products_bench<qmd::kernels::omp::pairwise_products>)->Name("products/omp")->RangeMultiplier(2)->Range(4, 16);
BENCHMARK(mult_chain_bench)->Name("mult_chain/rotated_dephasing")->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
