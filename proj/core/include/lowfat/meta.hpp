#pragma once

#include <cstdint>

#include "lowfat/heap.hpp"
#include "lowfat/stack_global.hpp"

namespace lowfat {

// One word of caller-defined metadata stored at the allocation base,
// immediately before the visible object. Retrieval works from any interior
// address because the base is recoverable from the address alone.
using Meta = std::uint64_t;

inline addr_t meta_alloc(HeapAllocator& heap, std::uint64_t n, Meta m) {
    addr_t base = heap.malloc(n + sizeof(Meta));
    if (base == 0) return 0;
    *reinterpret_cast<Meta*>(base) = m;
    return base + sizeof(Meta);
}

inline addr_t meta_stack_alloc(StackMachine& stack, std::uint64_t n, Meta m) {
    addr_t base = stack.stack_alloc(n + sizeof(Meta));
    *reinterpret_cast<Meta*>(base) = m;
    return base + sizeof(Meta);
}

inline addr_t meta_global_register(GlobalArena& globals, std::uint64_t n, Meta m) {
    addr_t base = globals.global_register(n + sizeof(Meta));
    *reinterpret_cast<Meta*>(base) = m;
    return base + sizeof(Meta);
}

inline Meta meta_get(const Runtime& rt, addr_t a) {
    if (!rt.is_ptr(a)) throw MetaError("no metadata: address is not low-fat");
    return *reinterpret_cast<const Meta*>(rt.base(a));
}

}  // namespace lowfat
