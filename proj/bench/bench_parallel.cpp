// Serial reference vs OpenMP kernels for candidate certification and for the
// distinctness distance computation.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "kcert/certify.hpp"
#include "kcert/distinct.hpp"

namespace {

struct ProductFixture {
    kcert::CompiledSystem sys;
    std::vector<kcert::Candidate> candidates;
};

// x_j^2 = j + 2 for j < n, all 2^n sign patterns as candidates
const ProductFixture& product_fixture()
{
    static const ProductFixture fixture = [] {
        const int n = 8;
        std::string text = "variables: ";
        for (int j = 0; j < n; ++j) {
            text += (j ? ", x" : "x") + std::to_string(j);
        }
        for (int j = 0; j < n; ++j) {
            text += "\nx" + std::to_string(j) + "^2 - " + std::to_string(j + 2);
        }
        ProductFixture f{kcert::compile(kcert::parse_system(text)), {}};
        for (std::size_t s = 0; s < (std::size_t{1} << n); ++s) {
            kcert::Candidate c;
            c.index = s;
            for (int j = 0; j < n; ++j) {
                const double sign = (s >> j & 1) ? -1.0 : 1.0;
                c.x.push_back({sign * std::sqrt(j + 2.0) * (1 + 1e-9), 0});
            }
            f.candidates.push_back(std::move(c));
        }
        return f;
    }();
    return fixture;
}

void BM_certify_serial(benchmark::State& state)
{
    const auto& f = product_fixture();
    const auto ladder = kcert::default_ladder();
    for (auto _ : state) {
        benchmark::DoNotOptimize(kcert::certify_all_serial(f.sys, f.candidates, ladder));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.candidates.size()));
}

void BM_certify_parallel(benchmark::State& state)
{
    const auto& f = product_fixture();
    const auto ladder = kcert::default_ladder();
    for (auto _ : state) {
        benchmark::DoNotOptimize(kcert::certify_all(f.sys, f.candidates, ladder, static_cast<int>(state.range(0))));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.candidates.size()));
}

std::vector<kcert::IntervalBox<double>> random_boxes(std::size_t count, std::size_t n)
{
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> coord(-1, 1);
    std::vector<kcert::IntervalBox<double>> out(count);
    for (auto& box : out) {
        for (std::size_t j = 0; j < n; ++j) {
            const double re = coord(gen);
            const double im = coord(gen);
            box.emplace_back(kcert::RealInterval<double>(re, re + 1e-9), kcert::RealInterval<double>(im, im + 1e-9));
        }
    }
    return out;
}

void BM_distances_serial(benchmark::State& state)
{
    const auto boxes = random_boxes(100000, 8);
    const auto q = kcert::random_anchor(8, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kcert::squared_distances_serial(boxes, q));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(boxes.size()));
}

void BM_distances_parallel(benchmark::State& state)
{
    const auto boxes = random_boxes(100000, 8);
    const auto q = kcert::random_anchor(8, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kcert::squared_distances(boxes, q, static_cast<int>(state.range(0))));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(boxes.size()));
}

}  // namespace

BENCHMARK(BM_certify_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_certify_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_distances_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_distances_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
