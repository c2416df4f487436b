// Command-line harness: address inspection, self tests, and the
// microbenchmarks (2-3-4 tree typed pointers, compact vectors, allocator
// churn, collector demo). Results can be appended to a CSV for plotting.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lowfat/bounds.hpp"
#include "lowfat/collector.hpp"
#include "lowfat/heap.hpp"
#include "lowfat/lowfat_vector.hpp"
#include "lowfat/runtime.hpp"
#include "lowfat/selfcheck.hpp"
#include "lowfat/tree234.hpp"

namespace {

using namespace lowfat;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct CsvWriter {
    std::string path;

    void row(const std::string& name, const std::string& mode, std::uint64_t n,
             double seconds, std::uint64_t peak_bytes) {
        if (path.empty()) return;
        bool fresh = !std::filesystem::exists(path) ||
                     std::filesystem::file_size(path) == 0;
        std::ofstream out(path, std::ios::app);
        if (fresh) out << "name,mode,N,seconds,peak_bytes\n";
        out << name << ',' << mode << ',' << n << ',' << seconds << ','
            << peak_bytes << '\n';
    }
};

std::uint64_t parse_addr(const std::string& s) {
    return std::stoull(s, nullptr, 0);  // accepts 0x-prefixed hex or decimal
}

void cmd_inspect(const Runtime& rt, std::uint64_t a) {
    std::printf("address      0x%llx\n", (unsigned long long)a);
    std::printf("index        %llu\n", (unsigned long long)rt.index(a));
    if (rt.size(a) == kNonFatSize)
        std::printf("size         SIZE_MAX (non-fat)\n");
    else
        std::printf("size         %llu\n", (unsigned long long)rt.size(a));
    std::printf("base (div)   0x%llx\n", (unsigned long long)rt.base_div(a));
    std::printf("base (magic) 0x%llx\n", (unsigned long long)rt.base_magic(a));
    std::printf("base (mask)  0x%llx\n", (unsigned long long)rt.base_mask(a));
    std::printf("offset       %llu\n", (unsigned long long)rt.offset(a));
    std::printf("usable_size  %llu\n", (unsigned long long)rt.usable_size(a));
    std::printf("is_ptr=%d heap=%d stack=%d global=%d\n", rt.is_ptr(a),
                rt.is_heap_ptr(a), rt.is_stack_ptr(a), rt.is_global_ptr(a));
}

double bench_tree_one(const Runtime& rt, TreeMode mode, std::uint64_t n,
                      std::uint64_t seed, std::uint64_t& hits,
                      std::uint64_t& peak) {
    HeapAllocator heap(rt);
    Tree234 tree(heap, mode);
    std::vector<std::uint64_t> keys(n);
    std::iota(keys.begin(), keys.end(), 1);
    std::mt19937_64 rng(seed);
    std::shuffle(keys.begin(), keys.end(), rng);
    for (auto k : keys) tree.insert(k);

    auto t0 = Clock::now();
    hits = 0;
    for (auto k : keys)
        if (tree.contains(k)) ++hits;
    double secs = seconds_since(t0);
    peak = heap.peak_bytes();
    return secs;
}

int cmd_bench_tree(const Runtime& rt, const std::string& mode, std::uint64_t n,
                   std::uint64_t seed, CsvWriter& csv) {
    struct Entry { const char* name; TreeMode m; };
    std::vector<Entry> todo;
    if (mode == "tag" || mode == "all") todo.push_back({"tag", TreeMode::classic_tag});
    if (mode == "size" || mode == "all") todo.push_back({"size", TreeMode::size_typed});
    if (mode == "extended" || mode == "all")
        todo.push_back({"extended", TreeMode::extended_tag});
    if (todo.empty()) {
        std::cerr << "unknown tree mode: " << mode << "\n";
        return 1;
    }
    std::vector<double> times;
    for (auto& e : todo) {
        std::uint64_t hits = 0, peak = 0;
        double secs = bench_tree_one(rt, e.m, n, seed, hits, peak);
        times.push_back(secs);
        std::printf("tree-search mode=%-8s N=%llu hits=%llu time=%.4fs peak=%llu\n",
                    e.name, (unsigned long long)n, (unsigned long long)hits,
                    secs, (unsigned long long)peak);
        csv.row("tree-search", e.name, n, secs, peak);
    }
    if (mode == "all" && times[0] > 0)
        std::printf("search time vs tag: size %.2fx, extended %.2fx "
                    "(reference ~0.80x / ~1.27x)\n",
                    times[1] / times[0], times[2] / times[0]);
    return 0;
}

int cmd_bench_vector(const Runtime& rt, const std::string& mode,
                     const std::string& phase, std::uint64_t n,
                     CsvWriter& csv) {
    struct Result { std::string mode; double secs; std::uint64_t sum, peak; };
    std::vector<Result> results;

    auto run = [&](const std::string& m) -> Result {
        HeapAllocator heap(rt);
        std::uint64_t sum = 0, peak = 0;
        double secs = 0;
        if (m == "fat") {
            FatOps ops(heap);
            FatVec v = ops.make();
            auto t0 = Clock::now();
            for (std::uint64_t i = 1; i <= n; ++i) ops.push(v, i);
            double construct = seconds_since(t0);
            t0 = Clock::now();
            sum = ops.sum(v);
            double access = seconds_since(t0);
            secs = phase == "construct" ? construct : access;
        } else {
            VecOps ops(heap, 8, m == "lowfat" ? VecGrowth::next_class
                                              : VecGrowth::next_pow2);
            addr_t v = ops.make();
            auto t0 = Clock::now();
            for (std::uint64_t i = 1; i <= n; ++i) v = ops.push(v, i);
            double construct = seconds_since(t0);
            t0 = Clock::now();
            sum = ops.sum(v);
            double access = seconds_since(t0);
            secs = phase == "construct" ? construct : access;
        }
        peak = heap.peak_bytes();
        return {m, secs, sum, peak};
    };

    std::vector<std::string> modes;
    if (mode == "all") modes = {"fat", "lowfat", "lowfat-pow2"};
    else modes = {mode};
    for (auto& m : modes) {
        if (m != "fat" && m != "lowfat" && m != "lowfat-pow2") {
            std::cerr << "unknown vector mode: " << m << "\n";
            return 1;
        }
        Result r = run(m);
        results.push_back(r);
        std::printf("vector-%s mode=%-11s N=%llu sum=%llu time=%.4fs peak=%llu "
                    "handle_words=%d\n",
                    phase.c_str(), r.mode.c_str(), (unsigned long long)n,
                    (unsigned long long)r.sum, r.secs, (unsigned long long)r.peak,
                    r.mode == "fat" ? 3 : 1);
        csv.row("vector-" + phase, r.mode, n, r.secs, r.peak);
    }
    if (mode == "all") {
        double fat = results[0].secs;
        if (fat > 0)
            std::printf("overhead vs fat: lowfat %.2fx, lowfat-pow2 %.2fx "
                        "(reference: construct ~2x / ~1.33x, access ~1.2x)\n",
                        results[1].secs / fat, results[2].secs / fat);
        bool agree = results[0].sum == results[1].sum && results[1].sum == results[2].sum;
        std::printf("sums %s\n", agree ? "agree" : "DISAGREE");
        if (!agree) return 1;
    }
    return 0;
}

int cmd_bench_alloc(const Runtime& rt, std::uint64_t ops, std::uint64_t seed,
                    CsvWriter& csv) {
    HeapAllocator heap(rt);
    std::mt19937_64 rng(seed);
    std::vector<addr_t> live;
    live.reserve(1024);
    auto t0 = Clock::now();
    for (std::uint64_t i = 0; i < ops; ++i) {
        if (live.size() >= 1024 || (!live.empty() && rng() % 2 == 0)) {
            std::size_t j = rng() % live.size();
            heap.free(live[j]);
            live[j] = live.back();
            live.pop_back();
        } else {
            addr_t a = heap.malloc(1 + rng() % 4096);
            if (a != 0) live.push_back(a);
        }
    }
    for (addr_t a : live) heap.free(a);
    double secs = seconds_since(t0);
    std::printf("alloc-churn ops=%llu time=%.4fs throughput=%.0f ops/s peak=%llu\n",
                (unsigned long long)ops, secs, ops / secs,
                (unsigned long long)heap.peak_bytes());
    csv.row("alloc-churn", "mixed", ops, secs, heap.peak_bytes());
    return 0;
}

int cmd_gc_demo(const Runtime& rt, const std::string& shape) {
    auto dash = shape.rfind('-');
    if (dash == std::string::npos) {
        std::cerr << "shape must look like list-100, tree-100 or cycle-100\n";
        return 1;
    }
    std::string kind = shape.substr(0, dash);
    std::uint64_t n = std::stoull(shape.substr(dash + 1));
    if (kind != "list" && kind != "tree" && kind != "cycle") {
        std::cerr << "unknown shape: " << kind << "\n";
        return 1;
    }

    HeapAllocator heap(rt);
    Collector gc(heap);
    std::vector<std::uint64_t> root_values;

    if (kind == "list" || kind == "cycle") {
        addr_t head = 0, first = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            addr_t node = heap.calloc(1, 16);
            *reinterpret_cast<addr_t*>(node) = head;
            head = node;
            if (first == 0) first = node;
        }
        if (kind == "cycle" && first != 0)
            *reinterpret_cast<addr_t*>(first) = head;  // close the loop
        root_values.push_back(head);
    } else {
        // Complete-ish binary tree with n nodes.
        std::vector<addr_t> nodes(n);
        for (auto& node : nodes) node = heap.calloc(1, 32);
        for (std::uint64_t i = 0; i < n; ++i) {
            auto* w = reinterpret_cast<addr_t*>(nodes[i]);
            if (2 * i + 1 < n) w[0] = nodes[2 * i + 1];
            if (2 * i + 2 < n) w[1] = nodes[2 * i + 2];
        }
        if (n > 0) root_values.push_back(nodes[0]);
    }

    RootSet roots;
    for (auto v : root_values) roots.add_value(v);
    std::uint64_t freed_rooted = gc.collect(roots);
    RootSet empty;
    std::uint64_t freed_dropped = gc.collect(empty);
    std::printf("gc-demo shape=%s nodes=%llu freed_with_root=%llu "
                "freed_after_drop=%llu\n",
                shape.c_str(), (unsigned long long)n,
                (unsigned long long)freed_rooted,
                (unsigned long long)freed_dropped);
    return 0;
}

int cmd_selftest(const Runtime& rt, std::uint64_t seed) {
    bool ok = true;
    for (const auto& r : run_selftest(rt, seed)) {
        std::printf("[%s] %s%s%s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.empty() ? "" : ": ", r.detail.c_str());
        ok = ok && r.passed;
    }
    std::printf("selftest: %s\n", ok ? "all passed" : "FAILURES");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"low-fat pointer allocator runtime"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --config/--csv/--seed follow the subcommand

    std::string config_path, csv_path;
    std::uint64_t seed = 1;
    app.add_option("--config", config_path, "size configuration file");
    app.add_option("--csv", csv_path, "append benchmark rows to this CSV file");
    app.add_option("--seed", seed, "RNG seed for benchmarks");

    std::string addr_str;
    auto* inspect = app.add_subcommand("inspect", "query one address");
    inspect->add_option("address", addr_str, "hex (0x...) or decimal address")
        ->required();

    std::uint64_t tree_n = 100000;
    std::string tree_mode = "all";
    auto* btree = app.add_subcommand("bench-tree", "2-3-4 tree typed-pointer search");
    btree->add_option("--n", tree_n, "number of keys");
    btree->add_option("--mode", tree_mode, "tag|size|extended|all");

    std::uint64_t vec_n = 1000000;
    std::string vec_mode = "all", vec_phase = "construct";
    auto* bvec = app.add_subcommand("bench-vector", "compact vector benchmark");
    bvec->add_option("--n", vec_n, "number of pushes");
    bvec->add_option("--mode", vec_mode, "fat|lowfat|lowfat-pow2|all");
    bvec->add_option("--phase", vec_phase, "construct|access");

    std::uint64_t alloc_ops = 1000000;
    auto* balloc = app.add_subcommand("bench-alloc", "malloc/free churn");
    balloc->add_option("--ops", alloc_ops, "operation count");

    std::string shape = "list-100";
    auto* gcd = app.add_subcommand("gc-demo", "build a graph, drop roots, collect");
    gcd->add_option("--shape", shape, "list-N | tree-N | cycle-N");

    auto* self = app.add_subcommand("selftest", "run the invariant suite");
    (void)self;

    CLI11_PARSE(app, argc, argv);

    try {
        SizeConfig cfg = config_path.empty() ? default_config(Mode::Real)
                                             : load_config(config_path);
        Runtime rt(std::move(cfg));
        CsvWriter csv{csv_path};

        if (inspect->parsed()) {
            cmd_inspect(rt, parse_addr(addr_str));
            return 0;
        }
        if (btree->parsed()) return cmd_bench_tree(rt, tree_mode, tree_n, seed, csv);
        if (bvec->parsed()) {
            if (vec_phase != "construct" && vec_phase != "access") {
                std::cerr << "unknown phase: " << vec_phase << "\n";
                return 1;
            }
            return cmd_bench_vector(rt, vec_mode, vec_phase, vec_n, csv);
        }
        if (balloc->parsed()) return cmd_bench_alloc(rt, alloc_ops, seed, csv);
        if (gcd->parsed()) return cmd_gc_demo(rt, shape);
        if (self->parsed()) return cmd_selftest(rt, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
