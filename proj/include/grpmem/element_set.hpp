#pragma once

// Dense subsets of S_m, indexed by the lexicographic rank of the image
// table (Lehmer code). Only meant for small m.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "grpmem/errors.hpp"
#include "grpmem/permutation.hpp"

namespace grpmem {

inline constexpr std::size_t max_dense_degree = 10;

inline std::uint64_t factorial(std::size_t n)
{
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

inline std::uint64_t lehmer_rank(const Permutation& a)
{
    const std::size_t m = a.degree();
    std::uint64_t rank = 0;
    std::uint32_t used = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const Point v = a[static_cast<Point>(i)];
        const auto smaller = static_cast<std::uint64_t>(std::popcount(~used & ((std::uint32_t{1} << v) - 1)));
        rank = rank * (m - i) + smaller;
        used |= std::uint32_t{1} << v;
    }
    return rank;
}

inline Permutation lehmer_unrank(std::uint64_t rank, std::size_t m)
{
    std::vector<std::uint64_t> digits(m);
    for (std::size_t i = m; i-- > 0;) {
        const std::uint64_t base = m - i;
        digits[i] = rank % base;
        rank /= base;
    }
    std::vector<Point> free;
    for (Point v = 0; v < m; ++v) free.push_back(v);
    std::vector<Point> img(m);
    for (std::size_t i = 0; i < m; ++i) {
        img[i] = free[digits[i]];
        free.erase(free.begin() + static_cast<std::ptrdiff_t>(digits[i]));
    }
    return Permutation::from_images(std::move(img));
}

class ElementSet {
public:
    explicit ElementSet(std::size_t degree = 0) : degree_(degree)
    {
        if (degree > max_dense_degree) throw cap_exceeded("explicit element sets are limited to degree 10");
        words_.assign((factorial(degree) + 63) / 64, 0);
    }

    std::size_t degree() const noexcept { return degree_; }

    bool insert(const Permutation& a) { return insert_rank(lehmer_rank(a)); }

    bool insert_rank(std::uint64_t r)
    {
        auto& w = words_[r / 64];
        const std::uint64_t b = std::uint64_t{1} << (r % 64);
        if (w & b) return false;
        w |= b;
        ++size_;
        return true;
    }

    bool contains(const Permutation& a) const { return contains_rank(lehmer_rank(a)); }
    bool contains_rank(std::uint64_t r) const { return words_[r / 64] >> (r % 64) & 1; }

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    /// Adds every element of `other`; returns true if anything was new.
    bool merge(const ElementSet& other)
    {
        bool grew = false;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            const std::uint64_t fresh = other.words_[i] & ~words_[i];
            if (!fresh) continue;
            words_[i] |= fresh;
            size_ += static_cast<std::size_t>(std::popcount(fresh));
            grew = true;
        }
        return grew;
    }

    bool is_subset_of(const ElementSet& other) const
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i]) return false;
        return true;
    }

    template <typename F>
    void for_each_rank(F&& f) const
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            for (std::uint64_t w = words_[i]; w; w &= w - 1)
                f(static_cast<std::uint64_t>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
    }

    /// Members in increasing rank, i.e. lexicographic order of image tables.
    std::vector<Permutation> elements() const
    {
        std::vector<Permutation> out;
        out.reserve(size_);
        for_each_rank([&](std::uint64_t r) { out.push_back(lehmer_unrank(r, degree_)); });
        return out;
    }

    bool operator==(const ElementSet& other) const { return degree_ == other.degree_ && words_ == other.words_; }

private:
    std::size_t degree_;
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace grpmem
