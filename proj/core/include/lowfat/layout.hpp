#pragma once

#include <cstdint>
#include <vector>

#include "lowfat/config.hpp"

namespace lowfat {

// Half-open address interval.
struct Span {
    std::uint64_t begin = 0;
    std::uint64_t end = 0;

    bool contains(std::uint64_t a) const { return a >= begin && a < end; }
    std::uint64_t length() const { return end - begin; }
};

// Per-region heap/stack/global sub-region spans. Heap takes the first half
// of the region, stack the third quarter, global the fourth; each span's
// start is rounded up to a multiple of the region's allocation size so every
// object placed at a span boundary is already correctly aligned.
class SubRegionLayout {
public:
    const Span& heap_span(std::uint32_t idx) const { return heap_[idx]; }
    const Span& stack_span(std::uint32_t idx) const { return stack_[idx]; }
    const Span& global_span(std::uint32_t idx) const { return global_[idx]; }
    std::uint32_t region_count() const { return static_cast<std::uint32_t>(heap_.size()) - 1; }

private:
    friend SubRegionLayout build_layout(const SizeConfig&);
    std::vector<Span> heap_, stack_, global_;  // index 1..M; [0] empty
};

SubRegionLayout build_layout(const SizeConfig& config);

}  // namespace lowfat
