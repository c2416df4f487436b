#include "lowfat/runtime.hpp"

#include <sys/mman.h>

#include <cerrno>
#include <cstring>

namespace lowfat {

RegionReservation::RegionReservation(const SizeConfig& config)
    : region_size_(config.region_size_bytes), count_(config.region_count()) {
    for (std::uint32_t i = 1; i <= count_; ++i) {
        void* want = reinterpret_cast<void*>(std::uint64_t{i} * region_size_);
        void* got = ::mmap(want, region_size_, PROT_READ | PROT_WRITE,
                           MAP_PRIVATE | MAP_ANONYMOUS | MAP_NORESERVE |
                               MAP_FIXED_NOREPLACE,
                           -1, 0);
        if (got == MAP_FAILED || got != want) {
            int err = errno;
            if (got != MAP_FAILED) ::munmap(got, region_size_);
            for (std::uint32_t j = 1; j < i; ++j)
                ::munmap(reinterpret_cast<void*>(std::uint64_t{j} * region_size_),
                         region_size_);
            count_ = 0;
            throw ReserveError(i, "region #" + std::to_string(i) +
                                      " reservation failed: " + std::strerror(err));
        }
    }
}

RegionReservation::~RegionReservation() {
    for (std::uint32_t i = 1; i <= count_; ++i)
        ::munmap(reinterpret_cast<void*>(std::uint64_t{i} * region_size_),
                 region_size_);
}

Runtime::Runtime(SizeConfig config)
    : config_(std::move(config)),
      tables_(build_tables(config_)),
      layout_(build_layout(config_)) {
    if (config_.mode == Mode::Real)
        reservation_ = std::make_unique<RegionReservation>(config_);
}

const Runtime& Runtime::default_runtime() {
    static Runtime rt{default_config(Mode::Real)};
    return rt;
}

}  // namespace lowfat
