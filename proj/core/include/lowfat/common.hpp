#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lowfat {

// Raw 64-bit address value. Classification (low-fat, heap, stack, global,
// non-fat) is derived from the value itself; see Runtime.
using addr_t = std::uint64_t;

// Sentinel returned by size queries for non-fat addresses.
inline constexpr std::uint64_t kNonFatSize = ~std::uint64_t{0};

constexpr bool is_pow2(std::uint64_t x) noexcept {
    return x != 0 && (x & (x - 1)) == 0;
}

constexpr std::uint64_t round_up(std::uint64_t x, std::uint64_t m) noexcept {
    return (x + m - 1) / m * m;
}

constexpr std::uint64_t next_pow2(std::uint64_t x) noexcept {
    std::uint64_t p = 1;
    while (p < x) p <<= 1;
    return p;
}

constexpr unsigned log2_exact(std::uint64_t x) noexcept {
    unsigned n = 0;
    while ((std::uint64_t{1} << n) < x) ++n;
    return n;
}

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Thrown when a region reservation is denied by the platform.
struct ReserveError : Error {
    ReserveError(std::uint32_t region, const std::string& what)
        : Error(what), region_index(region) {}
    std::uint32_t region_index;
};

struct OutOfMemoryError : Error {
    using Error::Error;
};

struct InvalidFreeError : Error {
    using Error::Error;
};

struct StackError : Error {
    using Error::Error;
};

struct TagError : Error {
    using Error::Error;
};

struct MetaError : Error {
    using Error::Error;
};

// Bounds violation from the checked copy routines; names the failing
// operand and the byte offset at which the access left the object.
struct BoundsError : Error {
    BoundsError(const char* op, std::uint64_t off, const std::string& what)
        : Error(what), operand(op), offset(off) {}
    const char* operand;
    std::uint64_t offset;
};

}  // namespace lowfat
