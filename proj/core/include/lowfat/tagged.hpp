#pragma once

#include <cstdint>

#include "lowfat/runtime.hpp"

namespace lowfat {

// A tagged address: either the classic low-4-bit scheme or the extended
// scheme that folds the tag into the allocation offset, giving every value
// in [0, size) as a possible tag.
using tagged_t = std::uint64_t;

// --- classic: low 4 bits ----------------------------------------------------

inline tagged_t classic_tag_set(addr_t a, std::uint64_t t) {
    if (t >= 16) throw TagError("classic tag must be < 16");
    if (a & 0xF) throw TagError("classic tagging needs a 16-aligned address");
    return a | t;
}

inline std::uint64_t classic_tag_get(tagged_t q) { return q & 0xF; }
inline addr_t classic_untag(tagged_t q) { return q & ~std::uint64_t{0xF}; }

// --- extended: tag lives in the offset --------------------------------------

inline tagged_t ext_tag_set(const Runtime& rt, addr_t a, std::uint64_t t) {
    if (rt.offset(a) != 0) throw TagError("extended tagging needs a base address");
    if (t >= rt.size(a)) throw TagError("extended tag must be < allocation size");
    return a + t;
}

inline std::uint64_t ext_tag_get(const Runtime& rt, tagged_t q) { return rt.offset(q); }
inline addr_t ext_untag(const Runtime& rt, tagged_t q) { return rt.base(q); }

// --- size-typed dispatch ----------------------------------------------------

// Dynamic type keyed on the allocation size class of the address.
inline std::uint64_t type_index(const Runtime& rt, addr_t a) {
    if (!rt.is_ptr(a)) throw TagError("type_index: address is not low-fat");
    return rt.index(a);
}

}  // namespace lowfat
