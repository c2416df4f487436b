#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "lowfat/heap.hpp"
#include "lowfat/runtime.hpp"

using namespace lowfat;

namespace {

std::vector<addr_t> sample_addresses(const Runtime& rt, std::size_t n) {
    std::mt19937_64 rng(42);
    std::vector<addr_t> out(n);
    const auto& t = rt.tables();
    for (auto& a : out) {
        std::uint32_t i = 1 + static_cast<std::uint32_t>(rng() % rt.region_count());
        std::uint64_t s = t.size_of(i);
        std::uint64_t first = round_up(std::uint64_t{i} * t.region_size(), s);
        a = first + rng() % t.promotion_threshold(i);
    }
    return out;
}

void BM_base_magic(benchmark::State& state) {
    const Runtime& rt = Runtime::default_runtime();
    auto addrs = sample_addresses(rt, 4096);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rt.base_magic(addrs[i++ & 4095]));
    }
}
BENCHMARK(BM_base_magic);

void BM_base_div(benchmark::State& state) {
    const Runtime& rt = Runtime::default_runtime();
    auto addrs = sample_addresses(rt, 4096);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rt.base_div(addrs[i++ & 4095]));
    }
}
BENCHMARK(BM_base_div);

void BM_usable_size(benchmark::State& state) {
    const Runtime& rt = Runtime::default_runtime();
    auto addrs = sample_addresses(rt, 4096);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rt.usable_size(addrs[i++ & 4095]));
    }
}
BENCHMARK(BM_usable_size);

void BM_malloc_free(benchmark::State& state) {
    HeapAllocator heap(Runtime::default_runtime());
    const std::uint64_t n = state.range(0);
    for (auto _ : state) {
        addr_t a = heap.malloc(n);
        benchmark::DoNotOptimize(a);
        heap.free(a);
    }
}
BENCHMARK(BM_malloc_free)->Arg(16)->Arg(100)->Arg(4096)->Arg(65536);

void BM_malloc_churn(benchmark::State& state) {
    HeapAllocator heap(Runtime::default_runtime());
    std::mt19937_64 rng(7);
    std::vector<addr_t> live;
    live.reserve(256);
    for (auto _ : state) {
        if (live.size() == 256 || (!live.empty() && rng() % 2)) {
            std::size_t j = rng() % live.size();
            heap.free(live[j]);
            live[j] = live.back();
            live.pop_back();
        } else {
            live.push_back(heap.malloc(1 + rng() % 1024));
        }
    }
    for (addr_t a : live) heap.free(a);
}
BENCHMARK(BM_malloc_churn);

}  // namespace

BENCHMARK_MAIN();
