#pragma once

#include <cstdint>
#include <cstring>

#include "lowfat/heap.hpp"
#include "lowfat/runtime.hpp"

namespace lowfat {

// True iff an `access`-byte access at p is not fully inside [base, base+size).
inline bool is_oob(addr_t p, addr_t base, std::uint64_t size, std::uint64_t access) {
    return p < base || p > base + size - access;
}

// Per-iteration checks on both derived addresses, the shape automatic
// instrumentation produces.
inline void checked_memcpy_auto(const Runtime& rt, addr_t dst, addr_t src,
                                std::uint64_t n) {
    const addr_t dst_base = rt.base(dst);
    const std::uint64_t dst_size = rt.size(dst);
    const addr_t src_base = rt.base(src);
    const std::uint64_t src_size = rt.size(src);
    for (std::uint64_t i = 0; i < n; ++i) {
        if (is_oob(dst + i, dst_base, dst_size, 1))
            throw BoundsError("dst", i, "checked_memcpy: dst out of bounds at offset " +
                                            std::to_string(i));
        if (is_oob(src + i, src_base, src_size, 1))
            throw BoundsError("src", i, "checked_memcpy: src out of bounds at offset " +
                                            std::to_string(i));
        *reinterpret_cast<std::uint8_t*>(dst + i) =
            *reinterpret_cast<const std::uint8_t*>(src + i);
    }
}

// One usable-size check per operand, then a plain copy.
inline void checked_memcpy_opt(const Runtime& rt, addr_t dst, addr_t src,
                               std::uint64_t n) {
    if (n > rt.usable_size(dst))
        throw BoundsError("dst", rt.usable_size(dst),
                          "checked_memcpy: " + std::to_string(n) +
                              " bytes exceed dst usable size");
    if (n > rt.usable_size(src))
        throw BoundsError("src", rt.usable_size(src),
                          "checked_memcpy: " + std::to_string(n) +
                              " bytes exceed src usable size");
    std::memcpy(reinterpret_cast<void*>(dst), reinterpret_cast<const void*>(src), n);
}

enum class FreeCheck {
    ok,
    non_heap_free,  // stack, global, or non-fat address
    interior_free,  // heap pointer not at an allocation base
};

// Frees only heap base pointers; otherwise reports which rule failed
// without freeing anything.
inline FreeCheck checked_free(HeapAllocator& heap, addr_t a) {
    const Runtime& rt = heap.runtime();
    if (!rt.is_heap_ptr(a)) return FreeCheck::non_heap_free;
    if (rt.offset(a) != 0) return FreeCheck::interior_free;
    heap.free(a);
    return FreeCheck::ok;
}

}  // namespace lowfat
