#pragma once

#include <cstdint>
#include <vector>

#include "lowfat/heap.hpp"
#include "lowfat/runtime.hpp"

namespace lowfat {

// One bit per allocation slot of one region's heap sub-region, backed by a
// lazily committed anonymous mapping so untouched regions cost nothing.
class SlotBitmap {
public:
    SlotBitmap() = default;
    ~SlotBitmap();
    SlotBitmap(SlotBitmap&& other) noexcept;
    SlotBitmap& operator=(SlotBitmap&& other) noexcept;
    SlotBitmap(const SlotBitmap&) = delete;
    SlotBitmap& operator=(const SlotBitmap&) = delete;

    void init(std::uint64_t slot_count);
    bool initialized() const { return bits_ != nullptr; }

    bool test_and_set(std::uint64_t slot) {
        std::uint8_t& b = bits_[slot >> 3];
        std::uint8_t m = static_cast<std::uint8_t>(1u << (slot & 7));
        bool was = (b & m) != 0;
        b |= m;
        return was;
    }
    bool test(std::uint64_t slot) const {
        return (bits_[slot >> 3] & (1u << (slot & 7))) != 0;
    }
    void set(std::uint64_t slot) { bits_[slot >> 3] |= static_cast<std::uint8_t>(1u << (slot & 7)); }
    void clear_prefix(std::uint64_t slot_count);  // clears bits [0, slot_count)

private:
    std::uint8_t* bits_ = nullptr;
    std::uint64_t mapped_bytes_ = 0;
};

// Conservative root set: word-aligned address ranges scanned for candidate
// pointer values, plus individual values treated as candidates directly.
class RootSet {
public:
    void add_range(addr_t begin, addr_t end);
    void add_value(std::uint64_t value) { values_.push_back(value); }
    void clear() { ranges_.clear(); values_.clear(); }

    const std::vector<Span>& ranges() const { return ranges_; }
    const std::vector<std::uint64_t>& values() const { return values_; }

private:
    std::vector<Span> ranges_;
    std::vector<std::uint64_t> values_;
};

// Stop-the-world conservative mark-sweep over one heap allocator. Marking
// treats every word-sized bit pattern as a candidate pointer, resolves it to
// an allocation base, and scans marked objects transitively via an explicit
// worklist. Sweep pushes every allocated-but-unmarked object back onto its
// region's free list. Requires Real mode (object memory is scanned).
class Collector {
public:
    explicit Collector(HeapAllocator& heap);

    // Marks the object (if any) that `value` points into; scans it and
    // everything reachable from it. Safe for arbitrary bit patterns.
    void mark_from(std::uint64_t value);

    // Marks the slot bit for an object base; returns whether it was already
    // set. Preconditions (heap pointer, offset 0) are the caller's to keep.
    bool set_mark(addr_t base_addr);

    // Full cycle: mark from roots, sweep, clear bitmaps. Returns the number
    // of objects freed. The mutator must be stopped for the duration.
    std::uint64_t collect(const RootSet& roots);

private:
    struct MarkCandidate {
        std::uint32_t index;
        addr_t base;
        std::uint64_t slot;
    };

    bool resolve(std::uint64_t value, MarkCandidate& out) const;
    void ensure_bitmaps(std::uint32_t idx);
    void drain_worklist();

    const Runtime& rt_;
    HeapAllocator& heap_;
    std::vector<SlotBitmap> marks_;      // per region
    std::vector<SlotBitmap> free_slots_; // rebuilt each cycle from free lists
    std::vector<bool> free_slots_valid_;
    std::vector<addr_t> worklist_;
};

}  // namespace lowfat
