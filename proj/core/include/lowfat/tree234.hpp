#pragma once

#include <cstdint>
#include <memory>

#include "lowfat/heap.hpp"

namespace lowfat {

// How child links carry the node's dynamic type (2-node / 3-node / 4-node).
enum class TreeMode {
    classic_tag,   // low 4 bits of the pointer
    size_typed,    // region index of the allocation (no bits spent)
    extended_tag,  // tag folded into the allocation offset
};

// 2-3-4 tree over 64-bit keys with typed child pointers. The three node
// variants are 3, 5 and 7 words, so they land in three distinct size
// classes; the size-typed mode reads the node kind straight off the region
// index. Insertion splits overfull nodes bottom-up; node kind changes are
// reallocations into the neighboring class.
class Tree234 {
public:
    Tree234(HeapAllocator& heap, TreeMode mode);
    ~Tree234();
    Tree234(Tree234&&) noexcept;
    Tree234& operator=(Tree234&&) noexcept;

    void insert(std::uint64_t key);
    bool contains(std::uint64_t key) const;
    void clear();
    std::uint64_t node_count() const;

    class Impl;

private:
    std::unique_ptr<Impl> impl_;
};

}  // namespace lowfat
