#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "lowfat/runtime.hpp"

namespace lowfat {

// Free-list heap allocator over the heap sub-regions. Each region keeps a
// LIFO free list plus a bump cursor into never-used space; freed neighbors
// are never merged and no object carries a header. Requests past the largest
// class fall back to the platform allocator (the result is non-fat).
//
// malloc/free/realloc on one region are serialized by a per-region mutex;
// callers never synchronize. Queries stay lock-free.
class HeapAllocator {
public:
    explicit HeapAllocator(const Runtime& rt);

    const Runtime& runtime() const { return rt_; }

    // Returns 0 when the heap sub-region for the class is exhausted.
    addr_t malloc(std::uint64_t n);
    addr_t calloc(std::uint64_t count, std::uint64_t n);
    addr_t memalign(std::uint64_t align, std::uint64_t n);
    addr_t realloc(addr_t a, std::uint64_t n);

    // Throws InvalidFreeError for stack/global/interior addresses. Double
    // free is not detected.
    void free(addr_t a);

    // --- introspection (collector, tests) -----------------------------------

    // First object slot / next unused address in region idx's heap sub-region.
    addr_t heap_begin(std::uint32_t idx) const { return regions_[idx].begin; }
    addr_t bump_cursor(std::uint32_t idx) const { return regions_[idx].bump; }
    addr_t heap_limit(std::uint32_t idx) const { return regions_[idx].limit; }
    std::uint64_t free_list_length(std::uint32_t idx) const;

    template <class Fn>
    void for_each_free(std::uint32_t idx, Fn&& fn) const {
        const RegionHeap& r = regions_[idx];
        if (real_) {
            for (addr_t a = r.free_head; a != 0;
                 a = *reinterpret_cast<const addr_t*>(a))
                fn(a);
        } else {
            for (addr_t a : r.free_side) fn(a);
        }
    }

    // Called by the collector with the allocator quiescent.
    void reclaim_unmarked(std::uint32_t idx, addr_t base_addr);

    std::uint64_t live_bytes() const { return live_bytes_; }
    std::uint64_t peak_bytes() const { return peak_bytes_; }

private:
    struct RegionHeap {
        addr_t begin = 0;  // aligned start of the heap sub-region
        addr_t bump = 0;
        addr_t limit = 0;
        addr_t free_head = 0;             // intrusive list, Real mode
        std::vector<addr_t> free_side;    // Simulated mode
        std::uint64_t free_count = 0;
        std::uint64_t size = 0;
    };

    struct AllocResult {
        addr_t addr;
        bool recycled;  // came off the free list
    };

    AllocResult alloc_class(std::uint32_t idx);
    void push_free(RegionHeap& r, addr_t a);
    void account_alloc(std::uint64_t bytes);
    void account_free(std::uint64_t bytes);

    const Runtime& rt_;
    bool real_;
    std::vector<RegionHeap> regions_;                  // index 1..M
    std::unique_ptr<std::mutex[]> locks_;              // one per region
    std::mutex stats_lock_;
    std::uint64_t live_bytes_ = 0;
    std::uint64_t peak_bytes_ = 0;
};

}  // namespace lowfat
