#include "tccm/metrics.hpp"
#include "tccm/model.hpp"
#include "tccm/robustness.hpp"
#include "tccm/trainer.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace tccm;

namespace {

Matrix gaussian_rows(Eigen::Index n, int d, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) m(i, j) = rng.normal();
    }
    return m;
}

void BM_Velocity(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const ModelParams p = init_params(d, TimeEmbeddingConfig{}, 0);
    const Matrix z = gaussian_rows(512, d, 1);
    for (auto _ : state) benchmark::DoNotOptimize(velocity(p, z, 0.5));
    state.SetItemsProcessed(state.iterations() * z.rows());
}
BENCHMARK(BM_Velocity)->Arg(2)->Arg(30)->Arg(200);

void BM_TrainStep(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    ModelParams p = init_params(d, TimeEmbeddingConfig{}, 0);
    const Matrix batch = gaussian_rows(512, d, 2);
    Rng rng(3);
    std::vector<double> t(512);
    for (auto& v : t) v = rng.uniform();
    TrainConfig cfg;
    AdamState adam = AdamState::for_params(p);
    for (auto _ : state) {
        const LossAndGradient lg = loss_and_gradient(p, batch, t, cfg);
        adam_step(p, lg.gradient, adam, cfg.learning_rate);
    }
    state.SetItemsProcessed(state.iterations() * batch.rows());
}
BENCHMARK(BM_TrainStep)->Arg(2)->Arg(30)->Arg(200);

void BM_Score(benchmark::State& state) {
    const ModelParams p = init_params(30, TimeEmbeddingConfig{}, 0);
    const Matrix z = gaussian_rows(4096, 30, 4);
    for (auto _ : state) benchmark::DoNotOptimize(score(p, z));
    state.SetItemsProcessed(state.iterations() * z.rows());
}
BENCHMARK(BM_Score);

void BM_PgdAttack(benchmark::State& state) {
    const ModelParams p = init_params(2, TimeEmbeddingConfig{}, 0);
    const Matrix z = gaussian_rows(1000, 2, 5);
    for (auto _ : state) benchmark::DoNotOptimize(pgd_attack(p, z, 0.1, AttackMode::FalseNegative));
}
BENCHMARK(BM_PgdAttack)->Unit(benchmark::kMillisecond);

void BM_Auroc(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(6);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = rng.uniform() < 0.1 ? 1 : 0;
        s[i] = rng.normal() + y[i];
    }
    y[0] = 1;
    y[1] = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(auroc(s, y));
        benchmark::DoNotOptimize(auprc(s, y));
    }
}
BENCHMARK(BM_Auroc)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
