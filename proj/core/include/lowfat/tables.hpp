#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lowfat/config.hpp"

namespace lowfat {

// A size class chosen for a request: region index plus allocation size.
struct ClassChoice {
    std::uint32_t index;
    std::uint64_t size;
};

// Derived lookup tables over the size configuration. Entries are materialized
// for indices 0..M; every higher index is answered as non-fat without being
// stored. Immutable once built.
class RegionTables {
public:
    std::uint64_t region_size() const { return region_size_; }
    unsigned region_shift() const { return shift_; }
    std::uint32_t region_count() const { return m_; }  // M, last low-fat index
    unsigned radix() const { return 64; }              // R

    bool is_lowfat_index(std::uint64_t idx) const { return idx - 1 < m_; }

    // Allocation size; SIZE_MAX for non-fat indices.
    std::uint64_t size_of(std::uint64_t idx) const {
        return is_lowfat_index(idx) ? sizes_[idx] : kNonFatSize;
    }

    // ~(size-1) for power-of-two classes, 0 otherwise.
    std::uint64_t mask_of(std::uint64_t idx) const {
        return is_lowfat_index(idx) ? masks_[idx] : 0;
    }

    // floor(2^64 / size) + 1 for low-fat indices, 0 otherwise.
    std::uint64_t magic_of(std::uint64_t idx) const {
        return is_lowfat_index(idx) ? magics_[idx] : 0;
    }

    // Largest request size class `idx` can service with the fixed-point base
    // guaranteed exact at every in-object offset, anywhere in the region.
    std::uint64_t promotion_threshold(std::uint64_t idx) const {
        return is_lowfat_index(idx) ? thresholds_[idx] : 0;
    }

    // Smallest class servicing `request`, promoting past classes whose
    // precision threshold the request exceeds. nullopt means the request
    // cannot be serviced low-fat and the caller must fall back.
    std::optional<ClassChoice> class_for(std::uint64_t request) const;

    // As above but restricted to power-of-two classes with size >= min_align.
    std::optional<ClassChoice> pow2_class_for(std::uint64_t request,
                                              std::uint64_t min_align) const;

private:
    friend RegionTables build_tables(const SizeConfig&);

    std::uint64_t region_size_ = 0;
    unsigned shift_ = 0;
    std::uint32_t m_ = 0;
    std::vector<std::uint64_t> sizes_;       // [0..M], [0] unused sentinel
    std::vector<std::uint64_t> masks_;
    std::vector<std::uint64_t> magics_;
    std::vector<std::uint64_t> thresholds_;
};

// Builds all tables; throws ConfigError if validate_config reports anything.
RegionTables build_tables(const SizeConfig& config);

}  // namespace lowfat
