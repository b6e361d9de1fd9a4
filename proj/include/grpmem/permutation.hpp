#pragma once

// Permutations of {1..m}, stored 0-based.
//
// MULTIPLICATION IS LEFT-TO-RIGHT: for permutations a and b, the product
// a * b first applies a and then b, i.e. i^(ab) = (i^a)^b. Most permutation
// libraries (and most algebra texts) use the opposite convention, so code
// ported from elsewhere usually needs its products reversed.
//
// Points are 1-based in every textual form (cycle notation, files, JSON)
// and 0-based in the in-memory image table.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grpmem/bigint.hpp"
#include "grpmem/errors.hpp"

namespace grpmem {

using Point = std::uint32_t;

class Permutation {
public:
    Permutation() = default;

    /// Identity of the given degree.
    explicit Permutation(std::size_t degree) : images_(degree)
    {
        std::iota(images_.begin(), images_.end(), Point{0});
    }

    /// From a 0-based image table; throws input_error unless it is a bijection.
    static Permutation from_images(std::vector<Point> images)
    {
        std::vector<bool> seen(images.size(), false);
        for (Point p : images) {
            detail::require(p < images.size() && !seen[p], "image table is not a bijection");
            seen[p] = true;
        }
        Permutation r;
        r.images_ = std::move(images);
        return r;
    }

    /// From 1-based cycles, e.g. {{1,2,3},{4,5}}.
    static Permutation from_cycles(std::size_t degree, const std::vector<std::vector<Point>>& cycles)
    {
        Permutation r(degree);
        std::vector<bool> used(degree, false);
        for (const auto& cyc : cycles) {
            for (Point p : cyc) {
                detail::require(p >= 1 && p <= degree,
                                "point " + std::to_string(p) + " outside 1.." + std::to_string(degree));
                detail::require(!used[p - 1], "point " + std::to_string(p) + " repeated in cycle notation");
                used[p - 1] = true;
            }
            for (std::size_t k = 0; k < cyc.size(); ++k)
                r.images_[cyc[k] - 1] = cyc[(k + 1) % cyc.size()] - 1;
        }
        return r;
    }

    /// The cycle [len] = (1 2 ... len) inside S_degree.
    static Permutation standard_cycle(std::size_t len, std::size_t degree)
    {
        detail::require(len <= degree, "cycle length exceeds degree");
        Permutation r(degree);
        for (std::size_t i = 0; i + 1 < len; ++i) r.images_[i] = static_cast<Point>(i + 1);
        if (len > 0) r.images_[len - 1] = 0;
        return r;
    }

    std::size_t degree() const noexcept { return images_.size(); }
    Point operator[](Point p) const { return images_[p]; }
    std::span<const Point> images() const noexcept { return images_; }

    bool is_identity() const noexcept
    {
        for (Point i = 0; i < images_.size(); ++i)
            if (images_[i] != i) return false;
        return true;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

    /// Left-to-right product: (a * b)[i] = b[a[i]].
    friend Permutation operator*(const Permutation& a, const Permutation& b)
    {
        detail::require(a.degree() == b.degree(), "degree mismatch in product");
        Permutation r;
        r.images_.resize(a.degree());
        for (std::size_t i = 0; i < a.degree(); ++i) r.images_[i] = b.images_[a.images_[i]];
        return r;
    }

    Permutation& operator*=(const Permutation& b) { return *this = *this * b; }

    Permutation inverse() const
    {
        Permutation r;
        r.images_.resize(degree());
        for (Point i = 0; i < degree(); ++i) r.images_[images_[i]] = i;
        return r;
    }

    /// Disjoint cycles of length >= 2, 0-based, each starting at its least point.
    std::vector<std::vector<Point>> cycles() const
    {
        std::vector<std::vector<Point>> out;
        std::vector<bool> seen(degree(), false);
        for (Point i = 0; i < degree(); ++i) {
            if (seen[i] || images_[i] == i) continue;
            std::vector<Point> cyc;
            for (Point j = i; !seen[j]; j = images_[j]) {
                seen[j] = true;
                cyc.push_back(j);
            }
            out.push_back(std::move(cyc));
        }
        return out;
    }

    /// a^e for any integer e, computed cycle by cycle (e is reduced modulo
    /// each cycle length, so huge and negative exponents cost nothing extra).
    Permutation pow(const BigInt& e) const
    {
        Permutation r(degree());
        for (const auto& cyc : cycles()) {
            const std::uint64_t len = cyc.size();
            const std::uint64_t shift = mod_u64(e, len);
            for (std::uint64_t k = 0; k < len; ++k) r.images_[cyc[k]] = cyc[(k + shift) % len];
        }
        return r;
    }

    Permutation pow(long long e) const { return pow(BigInt(e)); }

    /// Least e > 0 with a^e = 1: the lcm of the cycle lengths.
    BigInt order() const
    {
        BigInt o = 1;
        for (const auto& cyc : cycles()) o = lcm(o, BigInt(cyc.size()));
        return o;
    }

    /// Concatenation on the disjoint union of point sets: this acts on
    /// 1..m and other acts on m+1..m+n.
    Permutation direct_sum(const Permutation& other) const
    {
        Permutation r;
        r.images_ = images_;
        const auto shift = static_cast<Point>(degree());
        for (Point p : other.images_) r.images_.push_back(p + shift);
        return r;
    }

    /// The restriction to points [offset, offset + len), renumbered from 0.
    /// Throws input_error if that block is not invariant.
    Permutation restrict(std::size_t offset, std::size_t len) const
    {
        Permutation r(len);
        for (std::size_t i = 0; i < len; ++i) {
            Point img = images_.at(offset + i);
            detail::require(img >= offset && img < offset + len, "block is not invariant");
            r.images_[i] = static_cast<Point>(img - offset);
        }
        return r;
    }

    /// Cycle notation with 1-based points; "()" for the identity.
    std::string to_string() const
    {
        auto cyc = cycles();
        if (cyc.empty()) return "()";
        std::string s;
        for (const auto& c : cyc) {
            s += '(';
            for (std::size_t k = 0; k < c.size(); ++k) {
                if (k) s += ' ';
                s += std::to_string(c[k] + 1);
            }
            s += ')';
        }
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const Permutation& p) { return os << p.to_string(); }

private:
    std::vector<Point> images_;
};

inline Permutation compose(const Permutation& a, const Permutation& b) { return a * b; }
inline Permutation inverse(const Permutation& a) { return a.inverse(); }
inline Permutation power(const Permutation& a, const BigInt& e) { return a.pow(e); }
inline BigInt order(const Permutation& a) { return a.order(); }

/// Parses cycle notation such as "(1 2 3)(4 5)", "(1,3,5)" or "()".
/// Separators inside a cycle may be blanks or commas.
inline Permutation parse_permutation(std::string_view text, std::size_t degree)
{
    std::vector<std::vector<Point>> cycles;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    detail::require(i < text.size(), "empty permutation text");
    while (i < text.size()) {
        detail::require(text[i] == '(', "expected '(' in cycle notation: " + std::string(text));
        ++i;
        std::vector<Point> cyc;
        for (;;) {
            while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
            detail::require(i < text.size(), "unterminated cycle: " + std::string(text));
            if (text[i] == ')') {
                ++i;
                break;
            }
            detail::require(std::isdigit(static_cast<unsigned char>(text[i])) != 0,
                            "unexpected character in cycle notation: " + std::string(text));
            std::uint64_t v = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
                detail::require(v <= 0xFFFFFFFFull, "point out of range");
                ++i;
            }
            cyc.push_back(static_cast<Point>(v));
        }
        cycles.push_back(std::move(cyc));
        skip_ws();
    }
    return Permutation::from_cycles(degree, cycles);
}

} // namespace grpmem

template <>
struct std::hash<grpmem::Permutation> {
    std::size_t operator()(const grpmem::Permutation& p) const noexcept
    {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto v : p.images()) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};
