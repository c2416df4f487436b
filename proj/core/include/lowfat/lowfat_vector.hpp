#pragma once

#include <cstdint>
#include <cstring>

#include "lowfat/heap.hpp"

namespace lowfat {

enum class VecGrowth {
    next_class,  // grow to the next configured size class
    next_pow2,   // restrict growth to power-of-two classes
};

// Compact vector: the whole vector is a single address. The data pointer is
// the allocation base, the capacity is the allocation size, and the element
// count rides in the offset. The handle is one word; the fat representation
// below spends three.
//
// Growth runs inside the push that fills the current class: an offset equal
// to the allocation size would read back as position 0 of the neighboring
// slot, so the handle must be rebased onto the larger class before the
// filling push returns.
class VecOps {
public:
    explicit VecOps(HeapAllocator& heap, std::uint64_t item_size = 8,
                    VecGrowth growth = VecGrowth::next_class)
        : heap_(heap), rt_(heap.runtime()), item_size_(item_size), growth_(growth) {
        if (item_size == 0 || 16 % item_size != 0)
            throw Error("vector item size must divide 16");
    }

    addr_t make() {
        addr_t h = heap_.malloc(1);  // smallest class
        if (h == 0) throw OutOfMemoryError("vector allocation failed");
        return h;
    }

    std::uint64_t len(addr_t h) const { return rt_.size(h) / item_size_; }
    std::uint64_t pos(addr_t h) const { return rt_.offset(h) / item_size_; }

    addr_t push(addr_t h, std::uint64_t item) {
        addr_t data = rt_.base(h);
        std::uint64_t cap = rt_.size(h);
        std::uint64_t off = rt_.offset(h);
        std::memcpy(reinterpret_cast<void*>(data + off), &item, item_size_);
        off += item_size_;
        if (off < cap) return h + item_size_;
        return grow(data, cap) + off;
    }

    std::uint64_t get(addr_t h, std::uint64_t i) const {
        if (i >= pos(h))
            throw BoundsError("vector", i, "vector index " + std::to_string(i) +
                                               " out of range");
        std::uint64_t item = 0;
        std::memcpy(&item, reinterpret_cast<const void*>(rt_.base(h) + i * item_size_),
                    item_size_);
        return item;
    }

    std::uint64_t sum(addr_t h) const {
        const std::uint64_t n = pos(h);
        const addr_t data = rt_.base(h);
        std::uint64_t total = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            std::uint64_t item = 0;
            std::memcpy(&item, reinterpret_cast<const void*>(data + i * item_size_),
                        item_size_);
            total += item;
        }
        return total;
    }

    void destroy(addr_t h) { heap_.free(rt_.base(h)); }

private:
    addr_t grow(addr_t data, std::uint64_t cap) {
        addr_t nd = growth_ == VecGrowth::next_class
                        ? heap_.malloc(cap + 1)
                        : heap_.memalign(16, next_pow2(cap + 1));
        if (nd == 0) throw OutOfMemoryError("vector growth failed");
        if (!rt_.is_ptr(nd)) {
            heap_.free(nd);
            throw OutOfMemoryError("vector grew past the largest size class");
        }
        std::memcpy(reinterpret_cast<void*>(nd), reinterpret_cast<const void*>(data), cap);
        heap_.free(data);
        return nd;
    }

    HeapAllocator& heap_;
    const Runtime& rt_;
    std::uint64_t item_size_;
    VecGrowth growth_;
};

// Explicit (len, pos, data) triple; the reference representation the compact
// vector is measured against.
struct FatVec {
    std::uint64_t len = 0;
    std::uint64_t pos = 0;
    addr_t data = 0;
};
static_assert(sizeof(FatVec) == 3 * sizeof(std::uint64_t));

class FatOps {
public:
    explicit FatOps(HeapAllocator& heap, std::uint64_t item_size = 8,
                    VecGrowth growth = VecGrowth::next_class)
        : heap_(heap), rt_(heap.runtime()), item_size_(item_size), growth_(growth) {}

    FatVec make() {
        FatVec v;
        v.data = heap_.malloc(1);
        if (v.data == 0) throw OutOfMemoryError("vector allocation failed");
        v.len = rt_.size(v.data) / item_size_;
        return v;
    }

    void push(FatVec& v, std::uint64_t item) {
        if (v.pos == v.len) {
            std::uint64_t cap = v.len * item_size_;
            addr_t nd = growth_ == VecGrowth::next_class
                            ? heap_.malloc(cap + 1)
                            : heap_.memalign(16, next_pow2(cap + 1));
            if (nd == 0) throw OutOfMemoryError("vector growth failed");
            std::memcpy(reinterpret_cast<void*>(nd),
                        reinterpret_cast<const void*>(v.data), cap);
            heap_.free(v.data);
            v.data = nd;
            v.len = rt_.size(nd) / item_size_;
        }
        std::memcpy(reinterpret_cast<void*>(v.data + v.pos * item_size_), &item,
                    item_size_);
        ++v.pos;
    }

    std::uint64_t get(const FatVec& v, std::uint64_t i) const {
        if (i >= v.pos)
            throw BoundsError("vector", i, "vector index out of range");
        std::uint64_t item = 0;
        std::memcpy(&item, reinterpret_cast<const void*>(v.data + i * item_size_),
                    item_size_);
        return item;
    }

    std::uint64_t sum(const FatVec& v) const {
        std::uint64_t total = 0;
        for (std::uint64_t i = 0; i < v.pos; ++i) {
            std::uint64_t item = 0;
            std::memcpy(&item, reinterpret_cast<const void*>(v.data + i * item_size_),
                        item_size_);
            total += item;
        }
        return total;
    }

    void destroy(FatVec& v) {
        heap_.free(v.data);
        v = FatVec{};
    }

private:
    HeapAllocator& heap_;
    const Runtime& rt_;
    std::uint64_t item_size_;
    VecGrowth growth_;
};

}  // namespace lowfat
