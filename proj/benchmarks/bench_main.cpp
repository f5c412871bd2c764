#include <benchmark/benchmark.h>

#include "dimerwave/linear.hpp"
#include "dimerwave/rng.hpp"
#include "dimerwave/solver.hpp"
#include "dimerwave/wave_operator.hpp"

namespace dw = dimerwave;

namespace {

dw::PeriodicField random_field(dw::Rng& rng, int n) {
    dw::PeriodicField f(n);
    f.set_coeff(0, dw::Vec2c(dw::Complex(rng.normal(), 0.0), dw::Complex(rng.normal(), 0.0)));
    for (int k = 1; k <= n; ++k) {
        double w = std::exp(-0.2 * k);
        f.set_coeff(k, dw::Vec2c(dw::Complex(w * rng.normal(), w * rng.normal()),
                                 dw::Complex(w * rng.normal(), w * rng.normal())));
    }
    return f;
}

void BM_grid_roundtrip(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    dw::Rng rng(7);
    dw::PeriodicField f = random_field(rng, n);
    for (auto _ : state) {
        dw::GridData g = dw::to_grid(f, 4 * n);
        benchmark::DoNotOptimize(dw::from_grid(g, n));
    }
}
BENCHMARK(BM_grid_roundtrip)->Arg(32)->Arg(64)->Arg(128);

void BM_phi_op(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    dw::Material mat = dw::Material::dimer(1.0, 2.0);
    dw::WaveProblem p = dw::WaveProblem::make(mat, std::sqrt(2.0), n);
    dw::Rng rng(7);
    dw::PeriodicField f = random_field(rng, n);
    for (auto _ : state) benchmark::DoNotOptimize(dw::phi_op(p, f, 1.4));
}
BENCHMARK(BM_phi_op)->Arg(32)->Arg(64)->Arg(128);

void BM_coercive_solve(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    dw::Material mat = dw::Material::dimer(1.0, 2.0);
    dw::LinearData d = dw::kernel_basis(mat, std::sqrt(2.0), n);
    dw::Rng rng(7);
    dw::PeriodicField eta = dw::project_complement(d, random_field(rng, n));
    for (auto _ : state) benchmark::DoNotOptimize(dw::coercive_solve(d, eta));
}
BENCHMARK(BM_coercive_solve)->Arg(32)->Arg(64)->Arg(128);

void BM_solve_point(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    dw::Material mat = dw::Material::dimer(1.0, 2.0);
    dw::WaveProblem p = dw::WaveProblem::make(mat, std::sqrt(2.0), n);
    dw::LinearData d = dw::kernel_basis(mat, std::sqrt(2.0), n);
    dw::SolverConfig cfg;
    cfg.truncation = n;
    for (auto _ : state) benchmark::DoNotOptimize(dw::solve_point(p, d, 1e-3, cfg));
}
BENCHMARK(BM_solve_point)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
