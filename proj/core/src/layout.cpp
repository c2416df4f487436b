#include "lowfat/layout.hpp"

namespace lowfat {

SubRegionLayout build_layout(const SizeConfig& config) {
    auto violations = validate_config(config);
    if (!violations.empty())
        throw ConfigError("invalid size configuration: " + violations.front().message);

    const std::uint64_t rs = config.region_size_bytes;
    const std::uint32_t m = config.region_count();

    SubRegionLayout l;
    l.heap_.resize(m + 1);
    l.stack_.resize(m + 1);
    l.global_.resize(m + 1);

    for (std::uint32_t i = 1; i <= m; ++i) {
        const std::uint64_t s = config.sizes[i - 1];
        const std::uint64_t base = std::uint64_t{i} * rs;
        l.heap_[i] = Span{round_up(base, s), base + rs / 2};
        l.stack_[i] = Span{round_up(base + rs / 2, s), base + 3 * (rs / 4)};
        l.global_[i] = Span{round_up(base + 3 * (rs / 4), s), base + rs};
    }
    return l;
}

}  // namespace lowfat
