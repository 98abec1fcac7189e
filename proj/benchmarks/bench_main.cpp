// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "risbeam/experiments.hpp"

namespace {

using namespace risbeam;

SystemConfig bench_config(int nt_w, int nt_h, int nris_w, int nris_h) {
    SystemConfig cfg;
    cfg.nt_w = nt_w;
    cfg.nt_h = nt_h;
    cfg.nris_w = nris_w;
    cfg.nris_h = nris_h;
    cfg.n_rf = 4;
    return cfg;
}

void BM_channel_draw(benchmark::State& state) {
    const SystemConfig cfg = bench_config(8, 8, 8, 8);
    Rng rng(1);
    for (auto _ : state) {
        ChannelRealization chan = draw_channel(cfg, rng);
        benchmark::DoNotOptimize(chan.bs_ris.memptr());
    }
}
BENCHMARK(BM_channel_draw);

void BM_greedy_subarray(benchmark::State& state) {
    const arma::uword m = static_cast<arma::uword>(state.range(0));
    Rng rng(2);
    arma::cx_mat a(m, m);
    for (arma::uword i = 0; i < m * m; ++i)
        a(i) = rng.complex_normal();
    const arma::cx_mat block = a.t() * a;
    const QuantizerSet qh(4), ql(1);
    for (auto _ : state) {
        SubArrayDesign d = greedy_subarray(block, qh, ql, 1.0, 1.0, 1, {m / 2, m / 2});
        benchmark::DoNotOptimize(d.weights.memptr());
    }
}
BENCHMARK(BM_greedy_subarray)->Arg(8)->Arg(16)->Arg(32);

void BM_ccm_optimize(benchmark::State& state) {
    const arma::uword n = static_cast<arma::uword>(state.range(0));
    Rng rng(3);
    arma::cx_mat a(n, n);
    for (arma::uword i = 0; i < n * n; ++i)
        a(i) = rng.complex_normal();
    const arma::cx_mat r = a.t() * a;
    PassivePhaseVector phi0 = random_phases(n, rng);
    const CcmSettings settings;
    for (auto _ : state) {
        PassivePhaseVector out = optimize_phases(phi0, r, 1.0, 1.0, 1, settings);
        benchmark::DoNotOptimize(out.phi.memptr());
    }
}
BENCHMARK(BM_ccm_optimize)->Arg(16)->Arg(64);

void BM_joint_design(benchmark::State& state) {
    const SystemConfig cfg = bench_config(8, 8, 8, 8);
    Rng rng(4);
    const ChannelRealization chan = draw_channel(cfg, rng);
    for (auto _ : state) {
        Rng design_rng(child_seed(cfg.seed, 0));
        DesignOutput out = joint_design(chan, cfg, ccm_settings_from(cfg), design_rng);
        benchmark::DoNotOptimize(out.beamformer.f_bb.memptr());
    }
}
BENCHMARK(BM_joint_design);

} // namespace

BENCHMARK_MAIN();
