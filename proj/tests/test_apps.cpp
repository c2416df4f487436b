#include <doctest.h>

#include <cstring>

#include "lowfat/bounds.hpp"
#include "lowfat/lowfat_vector.hpp"
#include "lowfat/meta.hpp"
#include "lowfat/tagged.hpp"

using namespace lowfat;

TEST_CASE("is_oob matches the interval definition") {
    const addr_t base = 1000;
    CHECK_FALSE(is_oob(base, base, 16, 1));
    CHECK_FALSE(is_oob(base + 15, base, 16, 1));
    CHECK(is_oob(base + 16, base, 16, 1));
    CHECK(is_oob(base - 1, base, 16, 1));
    CHECK_FALSE(is_oob(base + 8, base, 16, 8));
    CHECK(is_oob(base + 9, base, 16, 8));
}

TEST_CASE("checked memcpy permits exact fits and rejects overflow") {
    const Runtime& rt = Runtime::default_runtime();
    HeapAllocator heap(rt);
    addr_t src = heap.malloc(32);
    addr_t dst = heap.malloc(32);
    std::memset(reinterpret_cast<void*>(src), 0x5A, 32);

    checked_memcpy_auto(rt, dst, src, 32);
    CHECK(reinterpret_cast<unsigned char*>(dst)[31] == 0x5A);
    checked_memcpy_opt(rt, dst, src, 32);

    CHECK_THROWS_AS(checked_memcpy_auto(rt, dst, src, 33), BoundsError);
    CHECK_THROWS_AS(checked_memcpy_opt(rt, dst, src, 33), BoundsError);
    CHECK_THROWS_AS(checked_memcpy_auto(rt, dst + 8, src, 32), BoundsError);
    CHECK_THROWS_AS(checked_memcpy_opt(rt, dst, src + 8, 32), BoundsError);

    // the auto variant reports which operand tripped, and where
    try {
        checked_memcpy_auto(rt, dst + 8, src, 32);
        FAIL("expected BoundsError");
    } catch (const BoundsError& e) {
        CHECK(std::string(e.operand) == "dst");
        CHECK(e.offset == 24);  // first byte past dst's allocation
    }

    heap.free(src);
    heap.free(dst);
}

TEST_CASE("checked_free classifies its argument before acting") {
    const Runtime& rt = Runtime::default_runtime();
    HeapAllocator heap(rt);
    StackMachine stack(rt);

    addr_t a = heap.malloc(48);
    CHECK(checked_free(heap, a + 8) == FreeCheck::interior_free);
    CHECK(checked_free(heap, stack.stack_alloc(16)) == FreeCheck::non_heap_free);
    CHECK(checked_free(heap, 0x4000) == FreeCheck::non_heap_free);
    CHECK(heap.live_bytes() == 48);  // nothing was actually freed
    CHECK(checked_free(heap, a) == FreeCheck::ok);
    CHECK(heap.live_bytes() == 0);
}

TEST_CASE("hidden metadata is recoverable from any interior address") {
    const Runtime& rt = Runtime::default_runtime();
    HeapAllocator heap(rt);
    addr_t obj = meta_alloc(heap, 24, 0xfeedface);
    CHECK(rt.offset(obj) == sizeof(Meta));
    CHECK(rt.size(obj) == 32);  // 24 + 8 metadata
    for (std::uint64_t k = 0; k < 24; ++k)
        CHECK(meta_get(rt, obj + k) == 0xfeedface);
    CHECK_THROWS_AS(meta_get(rt, 0x4000), MetaError);
    heap.free(rt.base(obj));

    StackMachine stack(rt);
    addr_t s = meta_stack_alloc(stack, 8, 42);
    CHECK(meta_get(rt, s) == 42);
    CHECK(meta_get(rt, s + 7) == 42);

    GlobalArena globals(rt);
    addr_t g = meta_global_register(globals, 8, 43);
    CHECK(meta_get(rt, g + 3) == 43);
}

TEST_CASE("classic tags use the low four bits") {
    addr_t a = 0x800000020;
    tagged_t q = classic_tag_set(a, 13);
    CHECK(classic_tag_get(q) == 13);
    CHECK(classic_untag(q) == a);
    CHECK_THROWS_AS(classic_tag_set(a, 16), TagError);
    CHECK_THROWS_AS(classic_tag_set(a + 4, 1), TagError);
}

TEST_CASE("extended tags live in the offset") {
    const Runtime& rt = Runtime::default_runtime();
    HeapAllocator heap(rt);
    addr_t a = heap.malloc(48);
    for (std::uint64_t t : {std::uint64_t{0}, std::uint64_t{17}, std::uint64_t{47}}) {
        tagged_t q = ext_tag_set(rt, a, t);
        CHECK(ext_tag_get(rt, q) == t);
        CHECK(ext_untag(rt, q) == a);
    }
    CHECK_THROWS_AS(ext_tag_set(rt, a, 48), TagError);   // tag must be < size
    CHECK_THROWS_AS(ext_tag_set(rt, a + 8, 1), TagError);  // base addresses only
    heap.free(a);
}

TEST_CASE("type_index is the region index") {
    const Runtime& rt = Runtime::default_runtime();
    HeapAllocator heap(rt);
    addr_t a = heap.malloc(16);
    addr_t b = heap.malloc(48);
    CHECK(type_index(rt, a) == 1);
    CHECK(type_index(rt, b) == 3);
    CHECK(type_index(rt, b + 20) == 3);  // interior addresses keep their type
    CHECK_THROWS_AS(type_index(rt, 0x4000), TagError);
    heap.free(a);
    heap.free(b);
}

TEST_CASE("compact vector basics") {
    const Runtime& rt = Runtime::default_runtime();
    HeapAllocator heap(rt);
    VecOps ops(heap);

    addr_t v = ops.make();
    static_assert(sizeof(v) == 8);  // the whole vector is one word
    CHECK(ops.len(v) == 2);         // smallest class, 16 bytes / 8-byte items
    CHECK(ops.pos(v) == 0);

    v = ops.push(v, 11);
    CHECK(ops.pos(v) == 1);
    CHECK(ops.get(v, 0) == 11);

    // the push that fills the class also grows it: an offset equal to the
    // size would be indistinguishable from the next slot's position 0
    v = ops.push(v, 22);
    CHECK(ops.pos(v) == 2);
    CHECK(ops.len(v) == 4);  // grown into the 32-byte class
    CHECK(rt.size(rt.base(v)) == 32);
    CHECK(ops.get(v, 0) == 11);
    CHECK(ops.get(v, 1) == 22);

    CHECK_THROWS_AS(ops.get(v, 2), BoundsError);
    ops.destroy(v);
}

TEST_CASE("power-of-two growth stays in power-of-two classes") {
    const Runtime& rt = Runtime::default_runtime();
    HeapAllocator heap(rt);
    VecOps ops(heap, 8, VecGrowth::next_pow2);
    addr_t v = ops.make();
    for (std::uint64_t i = 0; i < 100; ++i) {
        v = ops.push(v, i);
        CHECK(is_pow2(rt.size(rt.base(v))));
    }
    for (std::uint64_t i = 0; i < 100; ++i) CHECK(ops.get(v, i) == i);
    ops.destroy(v);
}

TEST_CASE("fat vector is the three-word reference") {
    HeapAllocator heap(Runtime::default_runtime());
    FatOps fat(heap);
    FatVec f = fat.make();
    static_assert(sizeof(FatVec) == 24);
    for (std::uint64_t i = 1; i <= 10; ++i) fat.push(f, i);
    CHECK(f.pos == 10);
    CHECK(fat.sum(f) == 55);
    CHECK_THROWS_AS(fat.get(f, 10), BoundsError);
    fat.destroy(f);
}
