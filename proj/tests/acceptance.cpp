// Acceptance gate: one check per top-level requirement, one PASS/FAIL line
// each. Exit status is the number of failed checks.

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lowfat/bounds.hpp"
#include "lowfat/collector.hpp"
#include "lowfat/heap.hpp"
#include "lowfat/lowfat_vector.hpp"
#include "lowfat/meta.hpp"
#include "lowfat/runtime.hpp"
#include "lowfat/stack_global.hpp"
#include "lowfat/tree234.hpp"

using namespace lowfat;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    const char* name;
    bool (*fn)(std::string& why);
};

std::uint64_t div_base(std::uint64_t a, std::uint64_t s) { return a / s * s; }

// --- 1: fixed-point base agrees with true division -------------------------

bool check_fixed_point(std::string& why) {
    // exhaustive sweep of a small configuration
    {
        SizeConfig c;
        c.region_size_bytes = 1 << 20;
        c.sizes = {16, 32, 48, 64, 80, 128, 256};
        c.mode = Mode::Simulated;
        Runtime rt(std::move(c));
        const auto& t = rt.tables();
        for (std::uint32_t i = 1; i <= t.region_count(); ++i) {
            if (t.promotion_threshold(i) != t.size_of(i)) {
                why = "small config expected fully precise classes";
                return false;
            }
            std::uint64_t begin = std::uint64_t{i} << 20, end = begin + (1 << 20);
            for (std::uint64_t a = begin; a < end; ++a) {
                if (rt.base_magic(a) != rt.base_div(a)) {
                    why = "exhaustive mismatch at " + std::to_string(a);
                    return false;
                }
            }
        }
    }

    // default configuration: sampled addresses plus the top kilobyte of each
    // region's precision-safe range
    Runtime rt(default_config(Mode::Simulated));
    const auto& t = rt.tables();
    std::mt19937_64 rng(1);
    std::uint64_t samples = 0;
    for (std::uint32_t i = 1; i <= t.region_count(); ++i) {
        const std::uint64_t s = t.size_of(i);
        const std::uint64_t thr = t.promotion_threshold(i);
        const std::uint64_t begin = std::uint64_t{i} * t.region_size();
        const std::uint64_t first = round_up(begin, s);
        const std::uint64_t top_base = div_base(begin + t.region_size() - s, s);
        const std::uint64_t slots = (top_base - first) / s + 1;

        for (int n = 0; n < 20000; ++n, ++samples) {
            std::uint64_t a = first + (rng() % slots) * s + rng() % thr;
            if (rt.base_magic(a) != rt.base_div(a)) {
                why = "sampled mismatch at " + std::to_string(a);
                return false;
            }
        }
        const std::uint64_t top_safe = top_base + thr;
        for (std::uint64_t a = top_safe - std::min<std::uint64_t>(1024, thr);
             a < top_safe; ++a) {
            if (rt.base_magic(a) != rt.base_div(a)) {
                why = "near-top mismatch at " + std::to_string(a);
                return false;
            }
        }
    }
    if (samples < 1000000) {
        why = "only " + std::to_string(samples) + " samples";
        return false;
    }
    return true;
}

// --- 2: default configuration matches the documented sequence --------------

bool check_default_config(std::string& why) {
    static constexpr std::uint64_t KB = 1024, MB = KB * KB, GB = KB * MB;
    const std::uint64_t expected[] = {
        16,     32,     48,     64,     80,     96,     112,    128,
        144,    160,    192,    224,    256,    272,    320,    384,
        448,    512,    528,    640,    768,    896,    1024,   1040,
        1280,   1536,   1792,   2048,   2064,   2560,   3072,   3584,
        4096,   4112,   5120,   6144,   7168,   8192,   8208,   10240,
        12288,  16 * KB, 32 * KB, 64 * KB, 128 * KB, 256 * KB, 512 * KB,
        1 * MB, 2 * MB, 4 * MB, 8 * MB, 16 * MB, 32 * MB, 64 * MB,
        128 * MB, 256 * MB, 512 * MB, 1 * GB, 2 * GB, 4 * GB, 8 * GB,
    };
    SizeConfig c = default_config(Mode::Simulated);
    if (c.region_size_bytes != (std::uint64_t{1} << 35)) {
        why = "region size is not 2^35";
        return false;
    }
    if (c.sizes.size() != 61) {
        why = "expected 61 classes, got " + std::to_string(c.sizes.size());
        return false;
    }
    for (std::size_t i = 0; i < 61; ++i) {
        if (c.sizes[i] != expected[i]) {
            why = "class " + std::to_string(i + 1) + " is " +
                  std::to_string(c.sizes[i]);
            return false;
        }
    }
    if (!validate_config(c).empty()) {
        why = "default configuration fails validation";
        return false;
    }
    return true;
}

// --- 3: allocator placement properties under churn --------------------------

bool check_alloc_properties(std::string& why) {
    const Runtime& rt = Runtime::default_runtime();
    const auto& t = rt.tables();
    HeapAllocator heap(rt);
    std::mt19937_64 rng(2);
    std::map<addr_t, std::uint64_t> extents;  // shadow: base -> class size

    auto overlaps = [&](addr_t a, std::uint64_t s) {
        auto it = extents.upper_bound(a);
        if (it != extents.end() && it->first < a + s) return true;
        if (it != extents.begin()) {
            --it;
            if (it->first + it->second > a) return true;
        }
        return false;
    };

    for (std::uint32_t i = 1; i <= t.region_count(); ++i) {
        // smallest request that maps to class i (promotion permitting)
        std::uint64_t n = i == 1 ? 1 : t.size_of(i - 1) + 1;
        auto cls = t.class_for(n);
        if (!cls || cls->index != i) {
            why = "no request maps to class " + std::to_string(i);
            return false;
        }
        const std::uint64_t slots =
            (heap.heap_limit(i) - heap.heap_begin(i)) / cls->size;
        const std::size_t cap = static_cast<std::size_t>(std::min<std::uint64_t>(64, slots));
        std::vector<addr_t> live;

        for (int op = 0; op < 10000; ++op) {
            if (live.size() == cap || (!live.empty() && rng() % 2)) {
                std::size_t j = rng() % live.size();
                extents.erase(live[j]);
                heap.free(live[j]);
                live[j] = live.back();
                live.pop_back();
            } else {
                addr_t a = heap.malloc(n);
                if (a == 0) {
                    why = "exhaustion in class " + std::to_string(i);
                    return false;
                }
                if (rt.index(a) != i || rt.offset(a) != 0 || a % cls->size != 0) {
                    why = "bad placement in class " + std::to_string(i);
                    return false;
                }
                if (overlaps(a, cls->size)) {
                    why = "extent overlap in class " + std::to_string(i);
                    return false;
                }
                extents[a] = cls->size;
                live.push_back(a);
            }
        }
        for (addr_t a : live) {
            extents.erase(a);
            heap.free(a);
        }
    }
    return true;
}

// --- 4: queries behave identically for heap, stack and global objects ------

bool check_uniformity(std::string& why) {
    const Runtime& rt = Runtime::default_runtime();
    HeapAllocator heap(rt);
    StackMachine stack(rt);
    GlobalArena globals(rt);

    struct Obj { addr_t base; std::uint64_t size; const char* kind; };
    std::vector<Obj> objects;
    for (std::uint64_t n : {16ull, 48ull, 100ull, 1000ull, 4096ull}) {
        addr_t h = heap.malloc(n);
        objects.push_back({h, rt.size(h), "heap"});
        addr_t s = stack.stack_alloc(n);
        objects.push_back({s, rt.size(s), "stack"});
        addr_t g = globals.global_register(n);
        objects.push_back({g, rt.size(g), "global"});
    }

    for (const Obj& o : objects) {
        for (std::uint64_t k = 0; k < o.size; k += (o.size > 256 ? 13 : 1)) {
            addr_t a = o.base + k;
            if (rt.base(a) != o.base || rt.offset(a) != k ||
                rt.usable_size(a) != o.size - k ||
                rt.size(a) != o.size || !rt.is_ptr(a)) {
                why = std::string(o.kind) + " object breaks a query identity";
                return false;
            }
        }
    }
    return true;
}

// --- 5: bounds predicate vs brute force -------------------------------------

bool check_oob(std::string& why) {
    const addr_t base = 1 << 20;
    for (std::uint64_t size = 1; size <= 64; ++size)
        for (std::uint64_t p = 0; p <= size + 16; ++p)
            for (std::uint64_t acc = 1; acc <= 8; ++acc) {
                bool brute = !(p + acc <= size);  // [p, p+acc) inside [0, size)
                if (is_oob(base + p, base, size, acc) != brute) {
                    why = "divergence at size=" + std::to_string(size) +
                          " p=" + std::to_string(p) + " acc=" + std::to_string(acc);
                    return false;
                }
            }
    return true;
}

// --- 6: collector vs exact reachability -------------------------------------

bool check_collector(std::string& why) {
    const Runtime& rt = Runtime::default_runtime();
    constexpr int kFields = 3;

    struct Graph {
        std::vector<addr_t> nodes;
        std::vector<std::vector<int>> edges;  // shadow adjacency
    };

    auto reachable_count = [&](const Graph& g, const std::vector<int>& roots) {
        std::vector<char> seen(g.nodes.size(), 0);
        std::vector<int> work(roots);
        for (int r : work) seen[r] = 1;
        while (!work.empty()) {
            int v = work.back();
            work.pop_back();
            for (int w : g.edges[v])
                if (!seen[w]) { seen[w] = 1; work.push_back(w); }
        }
        std::uint64_t n = 0;
        for (char s : seen) n += s;
        return n;
    };

    auto run_case = [&](const char* name, const Graph& g,
                        const std::vector<int>& roots, HeapAllocator& heap,
                        Collector& gc) -> bool {
        RootSet rs;
        for (int r : roots) rs.add_value(g.nodes[r]);
        std::uint64_t reach = reachable_count(g, roots);
        std::uint64_t freed = gc.collect(rs);
        if (freed != g.nodes.size() - reach) {
            why = std::string(name) + ": freed " + std::to_string(freed) +
                  ", oracle says " + std::to_string(g.nodes.size() - reach);
            return false;
        }
        RootSet none;
        std::uint64_t rest = gc.collect(none);
        if (rest != reach) {
            why = std::string(name) + ": leaked after root drop";
            return false;
        }
        return true;
    };

    auto materialize = [&](Graph& g) {
        for (std::size_t v = 0; v < g.nodes.size(); ++v) {
            auto* w = reinterpret_cast<addr_t*>(g.nodes[v]);
            for (std::size_t e = 0; e < g.edges[v].size(); ++e)
                w[e] = g.nodes[g.edges[v][e]];
        }
    };

    const int N = 10000;
    std::mt19937_64 rng(3);

    // list, complete binary tree, cycle, random graph with random roots
    for (const char* shape : {"list", "tree", "cycle", "random"}) {
        HeapAllocator heap(rt);
        Collector gc(heap);
        Graph g;
        g.nodes.resize(N);
        g.edges.assign(N, {});
        for (auto& node : g.nodes) {
            node = heap.calloc(1, kFields * 8 + 8);
            if (node == 0) { why = "allocation failed"; return false; }
        }
        std::vector<int> roots;
        std::string s(shape);
        if (s == "list") {
            for (int v = 0; v + 1 < N; ++v) g.edges[v].push_back(v + 1);
            roots = {0};
        } else if (s == "tree") {
            for (int v = 0; v < N; ++v) {
                if (2 * v + 1 < N) g.edges[v].push_back(2 * v + 1);
                if (2 * v + 2 < N) g.edges[v].push_back(2 * v + 2);
            }
            roots = {0};
        } else if (s == "cycle") {
            for (int v = 0; v < N; ++v) g.edges[v].push_back((v + 1) % N);
            roots = {N / 2};
        } else {
            for (int v = 0; v < N; ++v) {
                int deg = static_cast<int>(rng() % (kFields + 1));
                for (int e = 0; e < deg; ++e)
                    g.edges[v].push_back(static_cast<int>(rng() % N));
            }
            for (int r = 0; r < 3; ++r) roots.push_back(static_cast<int>(rng() % N));
        }
        materialize(g);
        if (!run_case(shape, g, roots, heap, gc)) return false;
        if (heap.live_bytes() != 0) {
            why = std::string(shape) + ": bytes left live after full collection";
            return false;
        }
    }
    return true;
}

// --- 7: hidden metadata at every interior offset ----------------------------

bool check_metadata(std::string& why) {
    const Runtime& rt = Runtime::default_runtime();
    const auto& t = rt.tables();
    HeapAllocator heap(rt);
    for (std::uint32_t i = 1; i <= t.region_count(); ++i) {
        const std::uint64_t s = t.size_of(i);
        if (s > 4096) break;
        const Meta marker = 0x1000 + i;
        addr_t obj = meta_alloc(heap, s - sizeof(Meta), marker);
        if (obj == 0 || rt.size(obj) != s) {
            why = "metadata object missed class " + std::to_string(i);
            return false;
        }
        for (std::uint64_t k = 0; k < s - sizeof(Meta); ++k) {
            if (meta_get(rt, obj + k) != marker) {
                why = "wrong metadata at offset " + std::to_string(k) +
                      " in class " + std::to_string(i);
                return false;
            }
        }
        heap.free(rt.base(obj));
    }
    return true;
}

// --- 8: compact vector vs fat oracle, storage claim -------------------------

bool check_vector(std::string& why) {
    static_assert(sizeof(addr_t) == 8, "compact handle is one word");
    static_assert(sizeof(FatVec) == 24, "fat representation is three words");

    const Runtime& rt = Runtime::default_runtime();
    (void)rt;
    for (VecGrowth growth : {VecGrowth::next_class, VecGrowth::next_pow2}) {
        HeapAllocator heap(Runtime::default_runtime());
        VecOps ops(heap, 8, growth);
        FatOps fat(heap, 8, growth);
        addr_t v = ops.make();
        FatVec f = fat.make();
        std::mt19937_64 rng(4);
        for (int i = 0; i < 100000; ++i) {
            std::uint64_t item = rng();
            v = ops.push(v, item);
            fat.push(f, item);
        }
        if (ops.pos(v) != f.pos) {
            why = "element counts differ";
            return false;
        }
        for (std::uint64_t i = 0; i < f.pos; ++i) {
            if (ops.get(v, i) != fat.get(f, i)) {
                why = "element " + std::to_string(i) + " differs";
                return false;
            }
        }
        if (ops.sum(v) != fat.sum(f)) {
            why = "sums differ";
            return false;
        }
        ops.destroy(v);
        fat.destroy(f);
    }
    return true;
}

// --- 9: tree mode agreement --------------------------------------------------

bool check_tree(std::string& why) {
    HeapAllocator heap(Runtime::default_runtime());
    Tree234 trees[] = {{heap, TreeMode::classic_tag},
                       {heap, TreeMode::size_typed},
                       {heap, TreeMode::extended_tag}};
    std::mt19937_64 rng(5);
    std::vector<std::uint64_t> keys(100000);
    for (auto& k : keys) k = rng();
    for (auto k : keys)
        for (auto& t : trees) t.insert(k);

    double secs[3];
    for (int m = 0; m < 3; ++m) {
        auto t0 = Clock::now();
        for (auto k : keys) {
            if (!trees[m].contains(k)) {
                why = "inserted key missing in mode " + std::to_string(m);
                return false;
            }
        }
        secs[m] = std::chrono::duration<double>(Clock::now() - t0).count();
    }
    for (int i = 0; i < 100000; ++i) {
        std::uint64_t probe = rng();
        bool a = trees[0].contains(probe);
        if (trees[1].contains(probe) != a || trees[2].contains(probe) != a) {
            why = "modes disagree on probe " + std::to_string(probe);
            return false;
        }
    }
    // machine-dependent: reported, never asserted
    std::printf("       tree search vs tag mode: size %.2fx, extended %.2fx "
                "(reference ~0.80x / ~1.27x)\n",
                secs[1] / secs[0], secs[2] / secs[0]);
    return true;
}

}  // namespace

int main() {
    const Check checks[] = {
        {"fixed-point base agreement", check_fixed_point},
        {"default configuration fidelity", check_default_config},
        {"allocator placement properties", check_alloc_properties},
        {"query uniformity across heap/stack/global", check_uniformity},
        {"bounds predicate vs brute force", check_oob},
        {"collector vs reachability oracle", check_collector},
        {"metadata at every interior offset", check_metadata},
        {"vector oracle equivalence and storage", check_vector},
        {"tree mode agreement", check_tree},
    };
    int failures = 0;
    for (const Check& c : checks) {
        std::string why;
        auto t0 = Clock::now();
        bool ok = false;
        try {
            ok = c.fn(why);
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        std::printf("[%s] %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", c.name, secs,
                    why.empty() ? "" : " — ", why.c_str());
        if (!ok) ++failures;
    }
    return failures;
}
