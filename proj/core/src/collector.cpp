#include "lowfat/collector.hpp"

#include <sys/mman.h>

#include <algorithm>
#include <cstring>

namespace lowfat {

void SlotBitmap::init(std::uint64_t slot_count) {
    if (bits_) return;
    mapped_bytes_ = round_up((slot_count + 7) / 8, 4096);
    void* p = ::mmap(nullptr, mapped_bytes_, PROT_READ | PROT_WRITE,
                     MAP_PRIVATE | MAP_ANONYMOUS | MAP_NORESERVE, -1, 0);
    if (p == MAP_FAILED) throw Error("bitmap mapping failed");
    bits_ = static_cast<std::uint8_t*>(p);
}

SlotBitmap::~SlotBitmap() {
    if (bits_) ::munmap(bits_, mapped_bytes_);
}

SlotBitmap::SlotBitmap(SlotBitmap&& other) noexcept
    : bits_(other.bits_), mapped_bytes_(other.mapped_bytes_) {
    other.bits_ = nullptr;
    other.mapped_bytes_ = 0;
}

SlotBitmap& SlotBitmap::operator=(SlotBitmap&& other) noexcept {
    if (this != &other) {
        if (bits_) ::munmap(bits_, mapped_bytes_);
        bits_ = other.bits_;
        mapped_bytes_ = other.mapped_bytes_;
        other.bits_ = nullptr;
        other.mapped_bytes_ = 0;
    }
    return *this;
}

void SlotBitmap::clear_prefix(std::uint64_t slot_count) {
    if (bits_) std::memset(bits_, 0, (slot_count + 7) / 8);
}

void RootSet::add_range(addr_t begin, addr_t end) {
    if (begin % 8 != 0 || end % 8 != 0)
        throw Error("root range must be word-aligned");
    ranges_.push_back(Span{begin, end});
}

Collector::Collector(HeapAllocator& heap)
    : rt_(heap.runtime()), heap_(heap) {
    if (rt_.mode() != Mode::Real)
        throw Error("collector requires Real mode (object memory is scanned)");
    const std::uint32_t m = rt_.region_count() + 1;
    marks_.resize(m);
    free_slots_.resize(m);
    free_slots_valid_.resize(m, false);
}

// Lazily maps both bitmaps for a region and rebuilds the free-slot bitmap
// from the current free list when it is stale.
void Collector::ensure_bitmaps(std::uint32_t idx) {
    const std::uint64_t size = rt_.tables().size_of(idx);
    const addr_t begin = heap_.heap_begin(idx);
    const std::uint64_t slots = (heap_.heap_limit(idx) - begin) / size;
    marks_[idx].init(slots);
    free_slots_[idx].init(slots);
    if (!free_slots_valid_[idx]) {
        free_slots_[idx].clear_prefix((heap_.bump_cursor(idx) - begin) / size);
        heap_.for_each_free(idx, [&](addr_t a) {
            free_slots_[idx].set((a - begin) / size);
        });
        free_slots_valid_[idx] = true;
    }
}

bool Collector::resolve(std::uint64_t value, MarkCandidate& out) const {
    std::uint64_t idx = rt_.index(value);
    if (idx - 1 >= rt_.region_count()) return false;  // not low-fat
    addr_t base = rt_.base(value);
    if (base == 0) return false;
    auto i = static_cast<std::uint32_t>(idx);
    // Live heap objects only: inside the heap sub-region, below the bump
    // cursor. Base rounding can land below the aligned span start; reject.
    if (base < heap_.heap_begin(i) || base >= heap_.bump_cursor(i)) return false;
    const std::uint64_t size = rt_.tables().size_of(i);
    out.index = i;
    out.base = base;
    out.slot = (base - heap_.heap_begin(i)) / size;
    return true;
}

bool Collector::set_mark(addr_t base_addr) {
    auto idx = static_cast<std::uint32_t>(rt_.index(base_addr));
    ensure_bitmaps(idx);
    const std::uint64_t size = rt_.tables().size_of(idx);
    return marks_[idx].test_and_set((base_addr - heap_.heap_begin(idx)) / size);
}

void Collector::mark_from(std::uint64_t value) {
    MarkCandidate c;
    if (!resolve(value, c)) return;
    ensure_bitmaps(c.index);
    if (free_slots_[c.index].test(c.slot)) return;     // on the free list
    if (marks_[c.index].test_and_set(c.slot)) return;  // already marked
    worklist_.push_back(c.base);
    drain_worklist();
}

void Collector::drain_worklist() {
    while (!worklist_.empty()) {
        addr_t base = worklist_.back();
        worklist_.pop_back();
        const std::uint64_t size = rt_.size(base);
        const auto* words = reinterpret_cast<const std::uint64_t*>(base);
        for (std::uint64_t i = 0; i < size / 8; ++i) {
            MarkCandidate c;
            if (!resolve(words[i], c)) continue;
            ensure_bitmaps(c.index);
            if (free_slots_[c.index].test(c.slot)) continue;
            if (marks_[c.index].test_and_set(c.slot)) continue;
            worklist_.push_back(c.base);
        }
    }
}

std::uint64_t Collector::collect(const RootSet& roots) {
    // Free lists may have changed since the last cycle.
    std::fill(free_slots_valid_.begin(), free_slots_valid_.end(), false);

    for (const Span& r : roots.ranges()) {
        const auto* words = reinterpret_cast<const std::uint64_t*>(r.begin);
        for (std::uint64_t i = 0; i < r.length() / 8; ++i) mark_from(words[i]);
    }
    for (std::uint64_t v : roots.values()) mark_from(v);

    // Sweep: every allocated slot that is neither free nor marked goes back
    // to its free list. Bitmaps end the cycle clear.
    std::uint64_t freed = 0;
    for (std::uint32_t idx = 1; idx <= rt_.region_count(); ++idx) {
        const addr_t begin = heap_.heap_begin(idx);
        const addr_t bump = heap_.bump_cursor(idx);
        if (bump == begin) continue;
        ensure_bitmaps(idx);
        const std::uint64_t size = rt_.tables().size_of(idx);
        const std::uint64_t used_slots = (bump - begin) / size;
        for (std::uint64_t slot = 0; slot < used_slots; ++slot) {
            if (free_slots_[idx].test(slot)) continue;
            if (marks_[idx].test(slot)) continue;
            heap_.reclaim_unmarked(idx, begin + slot * size);
            ++freed;
        }
        marks_[idx].clear_prefix(used_slots);
    }
    std::fill(free_slots_valid_.begin(), free_slots_valid_.end(), false);
    return freed;
}

}  // namespace lowfat
