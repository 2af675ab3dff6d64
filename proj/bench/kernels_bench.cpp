#include "heatflow/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace heatflow::kernels;

namespace {

HeightParams params()
{
    return {{{0, 1}, {0, -1}, {1.5, 0.2}}, {0.5, 0.25, 0.25}, {0.3, 0.7}, 2.0};
}

std::vector<double> axis(int n, double R)
{
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = -R + 2 * R * i / (n - 1);
    return v;
}

template <void (*F)(const HeightParams&, const std::vector<double>&, const std::vector<double>&, std::vector<double>&)>
void BM_height(benchmark::State& st)
{
    auto p = params();
    auto xs = axis(st.range(0), 8), ys = axis(st.range(0), 8);
    std::vector<double> out;
    for (auto _ : st) {
        F(p, xs, ys, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * xs.size() * ys.size());
}

template <void (*F)(const std::vector<cplx>&, double, std::vector<cplx>&)>
void BM_velocity(benchmark::State& st)
{
    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    std::vector<cplx> z(st.range(0));
    for (auto& x : z) x = {g(rng), g(rng)};
    std::vector<cplx> out;
    for (auto _ : st) {
        F(z, static_cast<double>(z.size()), out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * z.size() * z.size());
}

}  // namespace

BENCHMARK(BM_height<height_field_serial>)->Arg(256)->Arg(1024);
BENCHMARK(BM_height<height_field>)->Arg(256)->Arg(1024);
BENCHMARK(BM_velocity<zero_velocity_serial>)->Arg(128)->Arg(1024);
BENCHMARK(BM_velocity<zero_velocity>)->Arg(128)->Arg(1024);

BENCHMARK_MAIN();
