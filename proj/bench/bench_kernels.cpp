// Parallel kernels against their serial reference on identical inputs.
//
//   bench_kernels --benchmark_filter=certificate_table
//
// Thread count follows OMP_NUM_THREADS.

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "pclab/kernels.hpp"
#include "pclab/rng.hpp"

namespace {

using namespace pclab;

constexpr std::uint64_t kSeed = 20240;

const NormedSpace& space() {
    static const NormedSpace s = NormedSpace::p_norm(6, 3.0);
    return s;
}

const Mapping& contraction() {
    static const Mapping T = Mapping::scaled_rotation(6, 0.7, 0.8);
    return T;
}

ParamSequences params() {
    ParamSequences p;
    p.alpha = SequenceSpec{GeometricSeq{0.64, 0.1, 0.5}};
    p.beta = SequenceRule::constant(0.1);
    return p;
}

std::vector<PointPair> pairs(std::size_t count) {
    const ConvexSet box = ConvexSet::box(Point::zeros(6) - Point{1, 1, 1, 1, 1, 1}, Point{1, 1, 1, 1, 1, 1});
    std::vector<PointPair> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        CounterRng rx(kSeed, 2 * i), ry(kSeed, 2 * i + 1);
        out.push_back({sample_member(box, rx), sample_member(box, ry)});
    }
    return out;
}

std::vector<Point> starts(std::size_t count) {
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        CounterRng rng(kSeed, i);
        Point p = Point::zeros(6);
        for (std::size_t k = 0; k < 6; ++k) p[k] = rng.uniform(-100.0, 100.0);
        out.push_back(std::move(p));
    }
    return out;
}

template <auto Fn>
void certificate_table(benchmark::State& state) {
    const auto P = pairs(static_cast<std::size_t>(state.range(0)));
    const ParamSequences prm = params();
    for (auto _ : state) benchmark::DoNotOptimize(Fn(space(), contraction(), prm, P, 64, 0.0));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 64);
}

template <auto Fn>
void tail_profile(benchmark::State& state) {
    const auto P = pairs(static_cast<std::size_t>(state.range(0)));
    const ParamSequences prm = params();
    for (auto _ : state) benchmark::DoNotOptimize(Fn(space(), contraction(), prm, P, 64, 0.0));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 64);
}

template <auto Fn>
void batch_fixed_points(benchmark::State& state) {
    const auto S = starts(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Fn(space(), contraction(), S, 1e-9, 10000));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(certificate_table<&kernels::certificate_table>)->Name("kernels/certificate_table")->Arg(256)->Arg(2048);
BENCHMARK(certificate_table<&reference::certificate_table>)->Name("reference/certificate_table")->Arg(256)->Arg(2048);
BENCHMARK(tail_profile<&kernels::tail_profile>)->Name("kernels/tail_profile")->Arg(256)->Arg(2048);
BENCHMARK(tail_profile<&reference::tail_profile>)->Name("reference/tail_profile")->Arg(256)->Arg(2048);
BENCHMARK(batch_fixed_points<&kernels::batch_fixed_points>)->Name("kernels/batch_fixed_points")->Arg(256)->Arg(2048);
BENCHMARK(batch_fixed_points<&reference::batch_fixed_points>)->Name("reference/batch_fixed_points")->Arg(256)->Arg(2048);

BENCHMARK_MAIN();
