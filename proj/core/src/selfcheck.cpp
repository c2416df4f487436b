#include "lowfat/selfcheck.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "lowfat/bounds.hpp"
#include "lowfat/collector.hpp"
#include "lowfat/heap.hpp"
#include "lowfat/lowfat_vector.hpp"
#include "lowfat/tree234.hpp"

namespace lowfat {

namespace {

CheckResult base_agreement(const Runtime& rt, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto& t = rt.tables();
    for (std::uint32_t i = 1; i <= rt.region_count(); ++i) {
        const std::uint64_t s = t.size_of(i);
        const std::uint64_t thr = t.promotion_threshold(i);
        if (thr == 0) continue;
        const std::uint64_t region_begin = std::uint64_t{i} * t.region_size();
        const std::uint64_t slots = t.region_size() / s;
        for (int n = 0; n < 20000; ++n) {
            std::uint64_t b = round_up(region_begin, s) + (rng() % slots) * s;
            if (b + s > region_begin + t.region_size()) continue;
            std::uint64_t a = b + rng() % thr;
            if (rt.base_magic(a) != rt.base_div(a)) {
                std::ostringstream os;
                os << "mismatch at 0x" << std::hex << a;
                return {"base agreement", false, os.str()};
            }
        }
    }
    return {"base agreement", true, ""};
}

CheckResult alloc_properties(const Runtime& rt, std::uint64_t seed) {
    HeapAllocator heap(rt);
    std::mt19937_64 rng(seed);
    std::vector<addr_t> live;
    const std::uint64_t max_req = std::min<std::uint64_t>(
        4096, rt.tables().promotion_threshold(rt.region_count()));
    for (int op = 0; op < 20000; ++op) {
        if (live.size() > 64 || (rng() % 2 == 0 && !live.empty())) {
            std::size_t j = rng() % live.size();
            heap.free(live[j]);
            live[j] = live.back();
            live.pop_back();
        } else {
            std::uint64_t n = 1 + rng() % max_req;
            addr_t a = heap.malloc(n);
            if (a == 0) return {"alloc properties", false, "unexpected exhaustion"};
            auto cls = rt.tables().class_for(n);
            if (!rt.is_heap_ptr(a) || rt.offset(a) != 0 ||
                rt.index(a) != cls->index || a % cls->size != 0)
                return {"alloc properties", false,
                        "object violates region/alignment for n=" + std::to_string(n)};
            live.push_back(a);
        }
    }
    return {"alloc properties", true, ""};
}

CheckResult oob_check(const Runtime&, std::uint64_t) {
    for (std::uint64_t size = 1; size <= 64; ++size)
        for (std::uint64_t p = 0; p <= size + 8; ++p)
            for (std::uint64_t acc = 1; acc <= 8; ++acc) {
                bool brute = !(p + acc <= size);  // access [p, p+acc) inside [0, size)
                if (is_oob(1000 + p, 1000, size, acc) != brute)
                    return {"isOOB oracle", false,
                            "divergence at size=" + std::to_string(size)};
            }
    return {"isOOB oracle", true, ""};
}

CheckResult vector_equivalence(const Runtime& rt, std::uint64_t seed) {
    HeapAllocator heap(rt);
    VecOps ops(heap);
    FatOps fat(heap);
    std::mt19937_64 rng(seed);
    addr_t v = ops.make();
    FatVec f = fat.make();
    for (int i = 0; i < 5000; ++i) {
        std::uint64_t item = rng();
        v = ops.push(v, item);
        fat.push(f, item);
    }
    if (ops.pos(v) != f.pos) return {"vector equivalence", false, "pos differs"};
    for (std::uint64_t i = 0; i < f.pos; ++i)
        if (ops.get(v, i) != fat.get(f, i))
            return {"vector equivalence", false, "element " + std::to_string(i)};
    return {"vector equivalence", true, ""};
}

CheckResult tree_agreement(const Runtime& rt, std::uint64_t seed) {
    HeapAllocator heap(rt);
    Tree234 t1(heap, TreeMode::classic_tag);
    Tree234 t2(heap, TreeMode::size_typed);
    Tree234 t3(heap, TreeMode::extended_tag);
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> keys(5000);
    for (auto& k : keys) k = rng();
    for (auto k : keys) { t1.insert(k); t2.insert(k); t3.insert(k); }
    for (auto k : keys)
        if (!t1.contains(k) || !t2.contains(k) || !t3.contains(k))
            return {"tree agreement", false, "inserted key missing"};
    for (int i = 0; i < 5000; ++i) {
        std::uint64_t probe = rng();
        bool a = t1.contains(probe), b = t2.contains(probe), c = t3.contains(probe);
        if (a != b || b != c)
            return {"tree agreement", false, "modes disagree on a probe"};
    }
    return {"tree agreement", true, ""};
}

CheckResult collector_roundtrip(const Runtime& rt, std::uint64_t) {
    HeapAllocator heap(rt);
    Collector gc(heap);
    // Linked list of 100 nodes; drop the root and everything must go.
    addr_t head = 0;
    for (int i = 0; i < 100; ++i) {
        addr_t node = heap.calloc(1, 32);
        *reinterpret_cast<addr_t*>(node) = head;
        head = node;
    }
    RootSet roots;
    roots.add_value(head);
    if (gc.collect(roots) != 0) return {"collector", false, "freed a rooted list"};
    RootSet empty;
    if (gc.collect(empty) != 100) return {"collector", false, "leaked after root drop"};
    return {"collector", true, ""};
}

}  // namespace

std::vector<CheckResult> run_selftest(const Runtime& rt, std::uint64_t seed) {
    std::vector<CheckResult> out;
    out.push_back(base_agreement(rt, seed));
    out.push_back(alloc_properties(rt, seed));
    out.push_back(oob_check(rt, seed));
    if (rt.mode() == Mode::Real) {
        out.push_back(vector_equivalence(rt, seed));
        out.push_back(tree_agreement(rt, seed));
        out.push_back(collector_roundtrip(rt, seed));
    } else {
        out.push_back({"vector equivalence", true, "skipped (Simulated mode)"});
        out.push_back({"tree agreement", true, "skipped (Simulated mode)"});
        out.push_back({"collector", true, "skipped (Simulated mode)"});
    }
    return out;
}

}  // namespace lowfat
