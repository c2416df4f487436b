#pragma once

#include <cstdint>
#include <memory>

#include "lowfat/config.hpp"
#include "lowfat/layout.hpp"
#include "lowfat/tables.hpp"

namespace lowfat {

// RAII over the region reservations. In Real mode every low-fat region
// [i*region_size, (i+1)*region_size) is mapped at its absolute address as
// uncommitted, non-reserving read/write memory; a second overlapping
// reservation in the same process fails with ReserveError.
class RegionReservation {
public:
    explicit RegionReservation(const SizeConfig& config);
    ~RegionReservation();

    RegionReservation(const RegionReservation&) = delete;
    RegionReservation& operator=(const RegionReservation&) = delete;

private:
    std::uint64_t region_size_;
    std::uint32_t count_;
};

// Immutable geometry bundle: config, derived tables, sub-region layout and
// (in Real mode) the reservation itself. All query operations live here;
// they are pure reads of the tables and safe from any number of threads.
class Runtime {
public:
    explicit Runtime(SizeConfig config);

    const SizeConfig& config() const { return config_; }
    const RegionTables& tables() const { return tables_; }
    const SubRegionLayout& layout() const { return layout_; }
    Mode mode() const { return config_.mode; }
    std::uint32_t region_count() const { return tables_.region_count(); }

    // --- extended query API -------------------------------------------------

    std::uint64_t index(addr_t a) const { return a >> tables_.region_shift(); }

    std::uint64_t size(addr_t a) const { return tables_.size_of(index(a)); }

    // Reference semantics: truncating division then multiply.
    addr_t base_div(addr_t a) const {
        std::uint64_t s = size(a);
        return a / s * s;
    }

    // Fixed-point variant: high half of a 64x64->128 multiply, radix R=64.
    // Agrees with base_div on every allocator-produced address; promotion
    // keeps objects clear of the imprecise tail of each region.
    addr_t base_magic(addr_t a) const {
        std::uint64_t idx = index(a);
        std::uint64_t q = static_cast<std::uint64_t>(
            ((unsigned __int128)a * tables_.magic_of(idx)) >> 64);
        return q * tables_.size_of(idx);
    }

    // Bitmask variant; only meaningful in power-of-two classes (mask 0,
    // hence result 0, elsewhere).
    addr_t base_mask(addr_t a) const { return a & tables_.mask_of(index(a)); }

    addr_t base(addr_t a) const { return base_magic(a); }

    std::uint64_t offset(addr_t a) const { return a - base(a); }

    // Bytes from `a` to the end of its allocation; deliberately enormous for
    // non-fat addresses so bounds checks degenerate to always-pass.
    std::uint64_t usable_size(addr_t a) const { return size(a) - offset(a); }

    bool is_ptr(addr_t a) const {
        std::uint64_t idx = index(a);
        return idx - 1 < region_count();
    }

    bool is_heap_ptr(addr_t a) const {
        return is_ptr(a) && layout_.heap_span(static_cast<std::uint32_t>(index(a))).contains(a);
    }

    bool is_stack_ptr(addr_t a) const {
        return is_ptr(a) && layout_.stack_span(static_cast<std::uint32_t>(index(a))).contains(a);
    }

    bool is_global_ptr(addr_t a) const {
        return is_ptr(a) && layout_.global_span(static_cast<std::uint32_t>(index(a))).contains(a);
    }

    // Process-wide Real-mode runtime over the default configuration.
    // Reserved once on first use.
    static const Runtime& default_runtime();

private:
    SizeConfig config_;
    RegionTables tables_;
    SubRegionLayout layout_;
    std::unique_ptr<RegionReservation> reservation_;
};

}  // namespace lowfat
