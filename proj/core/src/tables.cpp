#include "lowfat/tables.hpp"

#include <algorithm>

namespace lowfat {

namespace {

std::uint64_t magic_for(std::uint64_t size) {
    // floor(2^64 / size) + 1, the +1 biasing rounding upward for error control.
    return static_cast<std::uint64_t>(((unsigned __int128)1 << 64) / size) + 1;
}

std::uint64_t magic_base(std::uint64_t a, std::uint64_t magic, std::uint64_t size) {
    std::uint64_t q = static_cast<std::uint64_t>(((unsigned __int128)a * magic) >> 64);
    return q * size;
}

// Largest request size safely serviceable from a class: take the highest
// object base that fits in the region and binary-search the last offset at
// which the fixed-point base still agrees with true division. Lower bases
// are strictly safer, so the result bounds the whole region.
std::uint64_t promotion_threshold_for(std::uint64_t idx, std::uint64_t size,
                                      std::uint64_t magic, std::uint64_t region_size) {
    std::uint64_t region_end = (idx + 1) * region_size;
    std::uint64_t top_base = (region_end - size) / size * size;

    auto safe = [&](std::uint64_t off) {
        std::uint64_t a = top_base + off;
        return magic_base(a, magic, size) == a / size * size;
    };

    if (!safe(0)) return 0;
    std::uint64_t lo = 0, hi = size - 1;  // invariant: safe(lo)
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (safe(mid)) lo = mid; else hi = mid - 1;
    }
    return lo + 1;
}

}  // namespace

RegionTables build_tables(const SizeConfig& config) {
    auto violations = validate_config(config);
    if (!violations.empty())
        throw ConfigError("invalid size configuration: " + violations.front().message);

    RegionTables t;
    t.region_size_ = config.region_size_bytes;
    t.shift_ = log2_exact(config.region_size_bytes);
    t.m_ = config.region_count();
    t.sizes_.assign(t.m_ + 1, kNonFatSize);
    t.masks_.assign(t.m_ + 1, 0);
    t.magics_.assign(t.m_ + 1, 0);
    t.thresholds_.assign(t.m_ + 1, 0);

    for (std::uint32_t i = 1; i <= t.m_; ++i) {
        std::uint64_t s = config.sizes[i - 1];
        t.sizes_[i] = s;
        t.masks_[i] = is_pow2(s) ? ~(s - 1) : 0;
        t.magics_[i] = magic_for(s);
        t.thresholds_[i] =
            promotion_threshold_for(i, s, t.magics_[i], t.region_size_);
    }
    return t;
}

std::optional<ClassChoice> RegionTables::class_for(std::uint64_t request) const {
    if (request == 0) request = 1;
    auto it = std::lower_bound(sizes_.begin() + 1, sizes_.end(), request);
    std::uint32_t i = static_cast<std::uint32_t>(it - sizes_.begin());
    while (i <= m_ && request > thresholds_[i]) ++i;  // precision promotion
    if (i > m_) return std::nullopt;
    return ClassChoice{i, sizes_[i]};
}

std::optional<ClassChoice> RegionTables::pow2_class_for(std::uint64_t request,
                                                        std::uint64_t min_align) const {
    if (!is_pow2(min_align)) return std::nullopt;
    std::uint64_t want = next_pow2(std::max<std::uint64_t>({request, min_align, 16}));
    for (std::uint32_t i = 1; i <= m_; ++i) {
        if (sizes_[i] < want || !is_pow2(sizes_[i])) continue;
        if (request > thresholds_[i]) continue;
        return ClassChoice{i, sizes_[i]};
    }
    return std::nullopt;
}

}  // namespace lowfat
