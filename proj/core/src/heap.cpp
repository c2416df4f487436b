#include "lowfat/heap.hpp"

#include <sys/mman.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>

namespace lowfat {

namespace {
constexpr std::uint64_t kPageSize = 4096;
constexpr std::uint64_t kReleaseThreshold = 16 * 1024;  // first multi-page class
}  // namespace

HeapAllocator::HeapAllocator(const Runtime& rt)
    : rt_(rt), real_(rt.mode() == Mode::Real) {
    const std::uint32_t m = rt.region_count();
    regions_.resize(m + 1);
    locks_ = std::make_unique<std::mutex[]>(m + 1);
    for (std::uint32_t i = 1; i <= m; ++i) {
        const Span& span = rt.layout().heap_span(i);
        regions_[i].begin = span.begin;
        regions_[i].bump = span.begin;
        regions_[i].limit = span.end;
        regions_[i].size = rt.tables().size_of(i);
    }
}

void HeapAllocator::account_alloc(std::uint64_t bytes) {
    std::lock_guard<std::mutex> g(stats_lock_);
    live_bytes_ += bytes;
    if (live_bytes_ > peak_bytes_) peak_bytes_ = live_bytes_;
}

void HeapAllocator::account_free(std::uint64_t bytes) {
    std::lock_guard<std::mutex> g(stats_lock_);
    live_bytes_ -= bytes;
}

HeapAllocator::AllocResult HeapAllocator::alloc_class(std::uint32_t idx) {
    RegionHeap& r = regions_[idx];
    std::lock_guard<std::mutex> g(locks_[idx]);
    if (real_) {
        if (r.free_head != 0) {
            addr_t a = r.free_head;
            r.free_head = *reinterpret_cast<addr_t*>(a);
            --r.free_count;
            return {a, true};
        }
    } else if (!r.free_side.empty()) {
        addr_t a = r.free_side.back();
        r.free_side.pop_back();
        --r.free_count;
        return {a, true};
    }
    if (r.bump + r.size > r.limit) return {0, false};
    addr_t a = r.bump;
    r.bump += r.size;
    return {a, false};
}

void HeapAllocator::push_free(RegionHeap& r, addr_t a) {
    if (real_) {
        *reinterpret_cast<addr_t*>(a) = r.free_head;
        r.free_head = a;
        // Large objects hand their pages back; the first page stays mapped
        // because it carries the free-list link.
        if (r.size >= kReleaseThreshold)
            ::madvise(reinterpret_cast<void*>(a + kPageSize), r.size - kPageSize,
                      MADV_DONTNEED);
    } else {
        r.free_side.push_back(a);
    }
    ++r.free_count;
}

addr_t HeapAllocator::malloc(std::uint64_t n) {
    if (n == 0) n = 1;
    auto cls = rt_.tables().class_for(n);
    if (!cls) {
        // Out-of-class request: platform allocation, result is non-fat.
        return reinterpret_cast<addr_t>(std::malloc(n));
    }
    AllocResult res = alloc_class(cls->index);
    if (res.addr == 0) return 0;
    account_alloc(cls->size);
    return res.addr;
}

addr_t HeapAllocator::calloc(std::uint64_t count, std::uint64_t n) {
    if (count != 0 && n > ~std::uint64_t{0} / count) return 0;
    std::uint64_t total = count * n;
    if (total == 0) total = 1;
    auto cls = rt_.tables().class_for(total);
    if (!cls) return reinterpret_cast<addr_t>(std::calloc(count, n));
    AllocResult res = alloc_class(cls->index);
    if (res.addr == 0) return 0;
    account_alloc(cls->size);
    // Recycled objects carry stale contents; fresh bump space may too when
    // more than one allocator has dispensed from the same reservation.
    if (real_)
        std::memset(reinterpret_cast<void*>(res.addr), 0, cls->size);
    return res.addr;
}

addr_t HeapAllocator::memalign(std::uint64_t align, std::uint64_t n) {
    if (!is_pow2(align))
        throw Error("memalign: alignment " + std::to_string(align) +
                    " is not a power of two");
    if (n == 0) n = 1;
    auto cls = rt_.tables().pow2_class_for(n, align);
    if (!cls) {
        void* p = nullptr;
        if (::posix_memalign(&p, std::max<std::uint64_t>(align, sizeof(void*)), n) != 0)
            return 0;
        return reinterpret_cast<addr_t>(p);
    }
    AllocResult res = alloc_class(cls->index);
    if (res.addr == 0) return 0;
    account_alloc(cls->size);
    return res.addr;
}

addr_t HeapAllocator::realloc(addr_t a, std::uint64_t n) {
    if (a == 0) return malloc(n);
    if (!rt_.is_ptr(a))
        return reinterpret_cast<addr_t>(
            std::realloc(reinterpret_cast<void*>(a), n));

    std::uint64_t old_size = rt_.size(a);
    auto cls = rt_.tables().class_for(n == 0 ? 1 : n);
    if (cls && cls->size == old_size) return a;  // same class, keep in place

    addr_t b = malloc(n);
    if (b == 0) return 0;
    if (real_) {
        std::uint64_t copy = std::min(old_size, n);
        std::memcpy(reinterpret_cast<void*>(b), reinterpret_cast<void*>(a), copy);
    }
    free(a);
    return b;
}

void HeapAllocator::free(addr_t a) {
    if (a == 0) return;
    if (!rt_.is_ptr(a)) {
        std::free(reinterpret_cast<void*>(a));
        return;
    }
    if (!rt_.is_heap_ptr(a))
        throw InvalidFreeError("free of non-heap low-fat address");
    if (rt_.offset(a) != 0)
        throw InvalidFreeError("free of interior address (offset " +
                               std::to_string(rt_.offset(a)) + ")");
    auto idx = static_cast<std::uint32_t>(rt_.index(a));
    RegionHeap& r = regions_[idx];
    {
        std::lock_guard<std::mutex> g(locks_[idx]);
        push_free(r, a);
    }
    account_free(r.size);
}

void HeapAllocator::reclaim_unmarked(std::uint32_t idx, addr_t base_addr) {
    RegionHeap& r = regions_[idx];
    push_free(r, base_addr);
    account_free(r.size);
}

std::uint64_t HeapAllocator::free_list_length(std::uint32_t idx) const {
    return regions_[idx].free_count;
}

}  // namespace lowfat
