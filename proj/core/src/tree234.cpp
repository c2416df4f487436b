#include "lowfat/tree234.hpp"

#include <vector>

namespace lowfat {

namespace {

// Node memory layout for kind k (k = 2, 3, 4): k-1 keys followed by k child
// links, 2k-1 words total. A leaf has all child links zero.

struct TagCodec {
    std::uint64_t enc(addr_t p, unsigned k) const { return p | k; }
    unsigned kind(std::uint64_t q) const { return static_cast<unsigned>(q & 0xF); }
    addr_t ptr(std::uint64_t q) const { return q & ~std::uint64_t{0xF}; }
};

struct SizeCodec {
    const Runtime* rt;
    std::uint64_t idx2, idx3, idx4;
    std::uint64_t enc(addr_t p, unsigned) const { return p; }
    unsigned kind(std::uint64_t q) const {
        std::uint64_t i = rt->index(q);
        return i == idx2 ? 2u : i == idx3 ? 3u : 4u;
    }
    addr_t ptr(std::uint64_t q) const { return q; }
};

struct ExtCodec {
    const Runtime* rt;
    std::uint64_t enc(addr_t p, unsigned k) const { return p + k; }
    unsigned kind(std::uint64_t q) const { return static_cast<unsigned>(rt->offset(q)); }
    addr_t ptr(std::uint64_t q) const { return rt->base(q); }
};

struct Up {
    bool split = false;
    std::uint64_t key = 0;
    std::uint64_t right = 0;
};

}  // namespace

class Tree234::Impl {
public:
    virtual ~Impl() = default;
    virtual void insert(std::uint64_t key) = 0;
    virtual bool contains(std::uint64_t key) const = 0;
    virtual void clear() = 0;
    virtual std::uint64_t node_count() const = 0;
};

namespace {

template <class Codec>
class TreeImpl final : public Tree234::Impl {
public:
    TreeImpl(HeapAllocator& heap, Codec codec) : heap_(heap), codec_(codec) {}
    ~TreeImpl() override { clear(); }

    void insert(std::uint64_t key) override {
        if (root_ == 0) {
            root_ = make_node(2, &key, nullptr);
            return;
        }
        Up up;
        root_ = insert_rec(root_, key, up);
        if (up.split) {
            std::uint64_t children[2] = {root_, up.right};
            root_ = make_node(2, &up.key, children);
        }
    }

    bool contains(std::uint64_t key) const override {
        std::uint64_t q = root_;
        while (q != 0) {
            unsigned k = codec_.kind(q);
            const std::uint64_t* w = words(codec_.ptr(q));
            unsigned nk = k - 1;
            unsigned c = 0;
            while (c < nk && key > w[c]) ++c;
            if (c < nk && w[c] == key) return true;
            q = w[nk + c];
        }
        return false;
    }

    void clear() override {
        if (root_ == 0) return;
        std::vector<std::uint64_t> stack{root_};
        while (!stack.empty()) {
            std::uint64_t q = stack.back();
            stack.pop_back();
            unsigned k = codec_.kind(q);
            std::uint64_t* w = words(codec_.ptr(q));
            for (unsigned c = 0; c < k; ++c)
                if (w[k - 1 + c] != 0) stack.push_back(w[k - 1 + c]);
            heap_.free(codec_.ptr(q));
            --nodes_;
        }
        root_ = 0;
    }

    std::uint64_t node_count() const override { return nodes_; }

private:
    static std::uint64_t* words(addr_t p) { return reinterpret_cast<std::uint64_t*>(p); }
    static const std::uint64_t* cwords(addr_t p) {
        return reinterpret_cast<const std::uint64_t*>(p);
    }

    // keys: kind-1 entries; children: kind entries or nullptr for a leaf.
    std::uint64_t make_node(unsigned kind, const std::uint64_t* keys,
                            const std::uint64_t* children) {
        addr_t p = heap_.malloc((2 * kind - 1) * 8);
        if (p == 0 || !heap_.runtime().is_ptr(p))
            throw OutOfMemoryError("tree node allocation failed");
        std::uint64_t* w = words(p);
        for (unsigned i = 0; i < kind - 1; ++i) w[i] = keys[i];
        for (unsigned i = 0; i < kind; ++i)
            w[kind - 1 + i] = children ? children[i] : 0;
        ++nodes_;
        return codec_.enc(p, kind);
    }

    void free_node(std::uint64_t q) {
        heap_.free(codec_.ptr(q));
        --nodes_;
    }

    // Rebuilds a node from n keys and n+1 children (children ignored for
    // leaves); splits when the node would need 4 keys.
    std::uint64_t rebuild(std::uint64_t old, const std::uint64_t* keys,
                          const std::uint64_t* children, unsigned n, Up& up) {
        free_node(old);
        if (n <= 3) {
            up.split = false;
            return make_node(n + 1, keys, children);
        }
        // Overfull: promote keys[1]; left keeps one key, right keeps two.
        std::uint64_t lk[1] = {keys[0]};
        std::uint64_t rk[2] = {keys[2], keys[3]};
        std::uint64_t lc[2] = {0, 0};
        std::uint64_t rc[3] = {0, 0, 0};
        const std::uint64_t* lcp = nullptr;
        const std::uint64_t* rcp = nullptr;
        if (children) {
            lc[0] = children[0]; lc[1] = children[1];
            rc[0] = children[2]; rc[1] = children[3]; rc[2] = children[4];
            lcp = lc; rcp = rc;
        }
        up.split = true;
        up.key = keys[1];
        up.right = make_node(3, rk, rcp);
        return make_node(2, lk, lcp);
    }

    std::uint64_t insert_rec(std::uint64_t q, std::uint64_t key, Up& up) {
        unsigned k = codec_.kind(q);
        std::uint64_t* w = words(codec_.ptr(q));
        unsigned nk = k - 1;
        unsigned c = 0;
        while (c < nk && key > w[c]) ++c;
        if (c < nk && w[c] == key) {
            up.split = false;
            return q;  // already present
        }

        if (w[nk] == 0) {  // leaf
            std::uint64_t keys[4];
            for (unsigned i = 0; i < c; ++i) keys[i] = w[i];
            keys[c] = key;
            for (unsigned i = c; i < nk; ++i) keys[i + 1] = w[i];
            return rebuild(q, keys, nullptr, nk + 1, up);
        }

        Up upc;
        std::uint64_t nchild = insert_rec(w[nk + c], key, upc);
        w[nk + c] = nchild;
        if (!upc.split) {
            up.split = false;
            return q;
        }
        std::uint64_t keys[4];
        std::uint64_t children[5];
        for (unsigned i = 0; i < c; ++i) keys[i] = w[i];
        keys[c] = upc.key;
        for (unsigned i = c; i < nk; ++i) keys[i + 1] = w[i];
        for (unsigned i = 0; i <= c; ++i) children[i] = w[nk + i];
        children[c + 1] = upc.right;
        for (unsigned i = c + 1; i <= nk; ++i) children[i + 1] = w[nk + i];
        return rebuild(q, keys, children, nk + 1, up);
    }

    HeapAllocator& heap_;
    Codec codec_;
    std::uint64_t root_ = 0;
    std::uint64_t nodes_ = 0;
};

}  // namespace

Tree234::Tree234(HeapAllocator& heap, TreeMode mode) {
    const Runtime& rt = heap.runtime();
    switch (mode) {
        case TreeMode::classic_tag:
            impl_ = std::make_unique<TreeImpl<TagCodec>>(heap, TagCodec{});
            break;
        case TreeMode::size_typed: {
            auto c2 = rt.tables().class_for(24);
            auto c3 = rt.tables().class_for(40);
            auto c4 = rt.tables().class_for(56);
            if (!c2 || !c3 || !c4 || c2->index == c3->index ||
                c3->index == c4->index || c2->index == c4->index)
                throw ConfigError("size-typed tree needs distinct classes for 24/40/56 bytes");
            impl_ = std::make_unique<TreeImpl<SizeCodec>>(
                heap, SizeCodec{&rt, c2->index, c3->index, c4->index});
            break;
        }
        case TreeMode::extended_tag:
            impl_ = std::make_unique<TreeImpl<ExtCodec>>(heap, ExtCodec{&rt});
            break;
    }
}

Tree234::~Tree234() = default;
Tree234::Tree234(Tree234&&) noexcept = default;
Tree234& Tree234::operator=(Tree234&&) noexcept = default;

void Tree234::insert(std::uint64_t key) { impl_->insert(key); }
bool Tree234::contains(std::uint64_t key) const { return impl_->contains(key); }
void Tree234::clear() { impl_->clear(); }
std::uint64_t Tree234::node_count() const { return impl_->node_count(); }

}  // namespace lowfat
