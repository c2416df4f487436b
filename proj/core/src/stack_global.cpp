#include "lowfat/stack_global.hpp"

namespace lowfat {

StackMachine::StackMachine(const Runtime& rt, std::uint64_t area_size)
    : rt_(rt), area_size_(area_size), sp_(area_size) {
    if (area_size_ == 0 || area_size_ % 16 != 0)
        throw StackError("stack area size must be a positive multiple of 16");
}

addr_t StackMachine::stack_alloc(std::uint64_t n) {
    if (n == 0) throw StackError("stack_alloc of zero bytes");

    std::uint64_t want = next_pow2(n < 16 ? 16 : n);
    auto cls = rt_.tables().pow2_class_for(want, 16);
    if (!cls) throw StackError("stack_alloc request beyond the largest class");
    const std::uint64_t alloc_size = cls->size;

    // Steps: align sp down to allocSize, decrement, remap linearly.
    std::uint64_t sp = sp_ & ~(alloc_size - 1);
    if (sp < alloc_size) throw StackError("stack exhausted");
    sp -= alloc_size;

    const Span& span = rt_.layout().stack_span(cls->index);
    addr_t a = span.begin + sp;
    if (a + alloc_size > span.end)
        throw StackError("stack sub-region too small for the configured area");
    sp_ = sp;
    return a;
}

void StackMachine::frame_enter() { frames_.push_back(sp_); }

void StackMachine::frame_exit() {
    if (frames_.empty()) throw StackError("frame_exit without matching frame_enter");
    sp_ = frames_.back();
    frames_.pop_back();
}

GlobalArena::GlobalArena(const Runtime& rt) : rt_(rt) {
    bump_.resize(rt.region_count() + 1, 0);
    for (std::uint32_t i = 1; i <= rt.region_count(); ++i)
        bump_[i] = rt.layout().global_span(i).begin;
}

addr_t GlobalArena::global_register(std::uint64_t n) {
    if (n == 0) n = 1;
    auto cls = rt_.tables().pow2_class_for(next_pow2(n < 16 ? 16 : n), 16);
    if (!cls) throw Error("global_register request beyond the largest class");
    const Span& span = rt_.layout().global_span(cls->index);
    addr_t a = bump_[cls->index];
    if (a + cls->size > span.end)
        throw Error("global sub-region #" + std::to_string(cls->index) + " exhausted");
    bump_[cls->index] = a + cls->size;
    return a;
}

}  // namespace lowfat
