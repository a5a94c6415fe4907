#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace dl {

/// Dynamically sized bitset with just the operations the searches need.
class Bitset {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    Bitset() = default;
    explicit Bitset(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    static Bitset full(std::size_t size) {
        Bitset b(size);
        for (std::size_t i = 0; i < size; ++i) b.set(i);
        return b;
    }

    std::size_t size() const noexcept { return size_; }

    void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }

    std::size_t count() const noexcept {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    bool none() const noexcept {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    bool any() const noexcept { return !none(); }

    bool intersects(const Bitset& o) const noexcept {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & o.words_[k]) return true;
        return false;
    }

    Bitset& operator&=(const Bitset& o) noexcept {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) noexcept {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
        return *this;
    }
    friend Bitset operator&(Bitset a, const Bitset& b) noexcept { return a &= b; }

    /// Index of the lowest set bit at or after `from`, or npos.
    std::size_t find_next(std::size_t from) const noexcept {
        if (from >= size_) return npos;
        std::size_t k = from >> 6;
        std::uint64_t w = words_[k] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (w) return (k << 6) + static_cast<std::size_t>(std::countr_zero(w));
            if (++k == words_.size()) return npos;
            w = words_[k];
        }
    }
    std::size_t find_first() const noexcept { return find_next(0); }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            std::uint64_t w = words_[k];
            while (w) {
                f((k << 6) + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    bool operator==(const Bitset&) const = default;

    std::size_t hash() const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ size_;
        for (auto w : words_) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
        return static_cast<std::size_t>(h);
    }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace dl
