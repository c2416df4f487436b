#pragma once

#include <cstdint>
#include <vector>

#include "lowfat/runtime.hpp"

namespace lowfat {

// Emulated low-fat stack allocation. A simulated stack pointer walks down a
// contiguous stack area; every allocation rounds to a power-of-two class,
// aligns the pointer, and linearly remaps it into the stack sub-region of
// the matching region. Confined to one execution context.
class StackMachine {
public:
    explicit StackMachine(const Runtime& rt, std::uint64_t area_size = 8 * 1024 * 1024);

    // Returns a stack sub-region address with offset 0 and size equal to the
    // power-of-two class covering n. Throws StackError on overflow/misuse.
    addr_t stack_alloc(std::uint64_t n);

    void frame_enter();
    void frame_exit();

    std::uint64_t sp() const { return sp_; }
    std::uint64_t frame_depth() const { return frames_.size(); }

private:
    const Runtime& rt_;
    std::uint64_t area_size_;
    std::uint64_t sp_;                  // byte offset within the stack area
    std::vector<std::uint64_t> frames_; // saved sp values
};

// Bump allocation from the global sub-regions, power-of-two classes only.
// Registration happens during a single-threaded initialization phase and
// objects are never freed.
class GlobalArena {
public:
    explicit GlobalArena(const Runtime& rt);

    addr_t global_register(std::uint64_t n);

private:
    const Runtime& rt_;
    std::vector<addr_t> bump_;  // per region, index 1..M
};

}  // namespace lowfat
