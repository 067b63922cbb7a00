#include "avgdyn/dynamics.hpp"
#include "avgdyn/generators.hpp"
#include "avgdyn/rng.hpp"
#include "avgdyn/steady_state.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace avgdyn;

StochasticMatrix random_stochastic(int n, std::uint64_t seed) {
    Rng rng(seed);
    MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            m(i, j) = rng.uniform();
            sum += m(i, j);
        }
        m.row(i) /= sum;
    }
    return StochasticMatrix::row_stochastic(std::move(m));
}

void BM_StepAffine(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const StochasticMatrix a = random_stochastic(n, 1);
    const Bounds bounds = Bounds::symmetric(1, 1.0);
    const VectorXd lambda = VectorXd::Constant(n, 0.3);
    const StateMatrix b(MatrixXd::Zero(n, 1), bounds);
    StateMatrix x(MatrixXd::Constant(n, 1, 0.5), bounds);
    for (auto _ : state) {
        x = step_affine(a, lambda, b, x);
        benchmark::DoNotOptimize(x.values().data());
    }
}
BENCHMARK(BM_StepAffine)->Arg(100)->Arg(500)->Arg(1000);

void BM_FundamentalMatrix(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const StochasticMatrix a = random_stochastic(n, 2);
    const VectorXd lambda = VectorXd::Constant(n, 0.3);
    for (auto _ : state) {
        MatrixXd f = fundamental_matrix(a, lambda);
        benchmark::DoNotOptimize(f.data());
    }
}
BENCHMARK(BM_FundamentalMatrix)->Arg(50)->Arg(200)->Arg(500);

void BM_SccDecompose(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    GraphSpec spec;
    spec.family = GraphFamily::small_world_rewired;
    spec.n = n;
    spec.radius = 2;
    spec.p = 0.1;
    spec.seed = 3;
    const Graph g = generate(spec).graph;
    for (auto _ : state) {
        auto topo = scc_decompose(g.out);
        benchmark::DoNotOptimize(topo.scc_ids.data());
    }
}
BENCHMARK(BM_SccDecompose)->Arg(100)->Arg(400)->Arg(900);

void BM_Transitivity(benchmark::State& state) {
    GraphSpec spec;
    spec.family = GraphFamily::lattice2d_radius;
    spec.n = static_cast<int>(state.range(0));
    spec.radius = 2;
    const Graph g = generate(spec).graph;
    for (auto _ : state) {
        benchmark::DoNotOptimize(transitivity(g));
    }
}
BENCHMARK(BM_Transitivity)->Arg(100)->Arg(400)->Arg(900);

}  // namespace

BENCHMARK_MAIN();
