#include <benchmark/benchmark.h>

#include <random>

#include "gfq/cases.hpp"
#include "gfq/dec.hpp"
#include "gfq/tensor.hpp"

namespace {

using namespace gfq;

StateField random_state(const Grid2D& g, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    StateField q{Field(g.nx(), g.ny()), Field(g.nx(), g.ny()), Field(g.nx(), g.ny())};
    for (Field* c : {&q.u, &q.v, &q.p})
        for (Eigen::Index k = 0; k < c->size(); ++k) c->data()[k] = U(gen);
    return q;
}

// args: K, N
void BM_apply_tensor(benchmark::State& st) {
    const Grid2D g(st.range(1), st.range(1), st.range(0), Boundary::periodic);
    const LineOperators ox = LineOperators::build(g.x), oy = LineOperators::build(g.y);
    const Field f = random_state(g, 1).u;
    for (auto _ : st) benchmark::DoNotOptimize(apply_tensor(*ox.D, *oy.DI, f));
    st.SetItemsProcessed(st.iterations() * f.size());
}

// args: scheme, K, N
void BM_apply_E(benchmark::State& st) {
    const auto kind = static_cast<SchemeKind>(st.range(0));
    const Grid2D g(st.range(2), st.range(2), st.range(1), Boundary::periodic);
    const SchemeOps ops = build_scheme({kind, 0.1, g});
    const StateField q = random_state(g, 2);
    for (auto _ : st) benchmark::DoNotOptimize(ops.apply_E(q));
    st.SetLabel(scheme_name(kind));
    st.SetItemsProcessed(st.iterations() * 3 * q.u.size());
}

// args: scheme, K, N
void BM_dec_step(benchmark::State& st) {
    const auto kind = static_cast<SchemeKind>(st.range(0));
    const int K = static_cast<int>(st.range(1));
    const Grid2D g(st.range(2), st.range(2), K, Boundary::periodic);
    const SchemeOps ops = build_scheme({kind, 0.1, g});
    const StateField q0 = sample_nodal(make_case("oblique").at(0.0), g);
    DeCStepper stepper(ops, default_subtimesteps(K), default_iterations(K));
    const double dt = time_step(g, 0.1);
    StateField q = q0;
    long n = 0;
    for (auto _ : st) {
        q = stepper.step(q, n * dt, dt, n);
        ++n;
    }
    st.SetLabel(scheme_name(kind));
}

constexpr int supg = static_cast<int>(SchemeKind::supg);
constexpr int supg_gfq = static_cast<int>(SchemeKind::supg_gfq);
constexpr int oss_gfq = static_cast<int>(SchemeKind::oss_gfq);

}  // namespace

BENCHMARK(BM_apply_tensor)->ArgsProduct({{1, 2, 4}, {20, 80}});
BENCHMARK(BM_apply_E)->ArgsProduct({{supg, supg_gfq, oss_gfq}, {1, 2, 4}, {20, 40}});
BENCHMARK(BM_dec_step)->ArgsProduct({{supg, supg_gfq}, {1, 2, 3}, {20, 40}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
