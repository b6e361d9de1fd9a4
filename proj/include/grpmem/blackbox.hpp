#pragma once

// Black-box groups: elements are bit strings of a fixed code length b, and
// the group is reachable only through four oracles (validity, inverse,
// product, identity-with-witness). A string may name an element in several
// ways, so equality of x and y is only ever tested as id(x * y^-1).

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grpmem/errors.hpp"
#include "grpmem/permutation.hpp"
#include "grpmem/slp.hpp"

namespace grpmem {

using BitString = std::vector<bool>;

class BlackBox {
public:
    virtual ~BlackBox() = default;

    /// Code length b.
    virtual std::size_t code_length() const = 0;
    /// Witness length c.
    virtual std::size_t witness_length() const = 0;

    virtual bool valid(const BitString& x) const = 0;
    virtual BitString inv(const BitString& x) const = 0;
    virtual BitString prod(const BitString& x, const BitString& y) const = 0;
    virtual bool id(const BitString& x, const BitString& witness) const = 0;
};

/// Forwards to another box and counts oracle calls.
class CountingBlackBox final : public BlackBox {
public:
    explicit CountingBlackBox(const BlackBox& inner) : inner_(inner) {}

    std::size_t code_length() const override { return inner_.code_length(); }
    std::size_t witness_length() const override { return inner_.witness_length(); }
    bool valid(const BitString& x) const override
    {
        ++calls_;
        return inner_.valid(x);
    }
    BitString inv(const BitString& x) const override
    {
        ++calls_;
        return inner_.inv(x);
    }
    BitString prod(const BitString& x, const BitString& y) const override
    {
        ++calls_;
        return inner_.prod(x, y);
    }
    bool id(const BitString& x, const BitString& w) const override
    {
        ++calls_;
        return inner_.id(x, w);
    }

    std::uint64_t calls() const noexcept { return calls_.load(); }

private:
    const BlackBox& inner_;
    mutable std::atomic<std::uint64_t> calls_{0};
};

/// S_m in a box. A permutation is its image table, each image in
/// ceil(log2 m) bits (least significant bit first), so b = m ceil(log2 m).
/// In redundant mode a further ceil(log2 m) bits are appended and ignored by
/// decoding, giving every element several names; products and inverses then
/// return non-canonical names. The identity oracle is deterministic and
/// ignores its one-bit witness.
class PermutationBlackBox final : public BlackBox {
public:
    explicit PermutationBlackBox(std::size_t degree, bool redundant = false)
        : degree_(degree), width_(ceil_log2(degree)), redundant_(redundant)
    {
        detail::require(degree >= 1, "black box degree must be positive");
    }

    std::size_t degree() const noexcept { return degree_; }
    bool redundant() const noexcept { return redundant_; }
    std::size_t code_length() const override { return degree_ * width_ + (redundant_ ? width_ : 0); }
    std::size_t witness_length() const override { return 1; }

    /// Number of distinct names per element.
    std::uint64_t names_per_element() const { return redundant_ ? (std::uint64_t{1} << width_) : 1; }

    BitString encode(const Permutation& a, std::uint64_t variant = 0) const
    {
        detail::require(a.degree() == degree_, "degree mismatch in encoding");
        BitString x;
        x.reserve(code_length());
        for (Point p : a.images()) put(x, p);
        if (redundant_) put(x, variant & mask());
        return x;
    }

    std::optional<Permutation> decode(const BitString& x) const
    {
        if (x.size() != code_length()) return std::nullopt;
        std::vector<Point> img(degree_);
        std::vector<bool> seen(degree_, false);
        for (std::size_t i = 0; i < degree_; ++i) {
            const auto v = get(x, i * width_);
            if (v >= degree_ || seen[v]) return std::nullopt;
            seen[v] = true;
            img[i] = static_cast<Point>(v);
        }
        return Permutation::from_images(std::move(img));
    }

    bool valid(const BitString& x) const override { return decode(x).has_value(); }

    BitString inv(const BitString& x) const override
    {
        auto a = decode(x);
        if (!a) return x;
        return encode(a->inverse(), variant_of(x));
    }

    BitString prod(const BitString& x, const BitString& y) const override
    {
        auto a = decode(x), b = decode(y);
        if (!a || !b) return x;
        return encode(*a * *b, variant_of(x) + variant_of(y) + 1);
    }

    bool id(const BitString& x, const BitString&) const override
    {
        auto a = decode(x);
        return a && a->is_identity();
    }

private:
    static std::size_t ceil_log2(std::size_t n)
    {
        std::size_t w = 0;
        while ((std::size_t{1} << w) < n) ++w;
        return w;
    }

    std::uint64_t mask() const { return (std::uint64_t{1} << width_) - 1; }

    void put(BitString& x, std::uint64_t v) const
    {
        for (std::size_t k = 0; k < width_; ++k) x.push_back((v >> k) & 1);
    }

    std::uint64_t get(const BitString& x, std::size_t at) const
    {
        std::uint64_t v = 0;
        for (std::size_t k = 0; k < width_; ++k)
            if (x[at + k]) v |= std::uint64_t{1} << k;
        return v;
    }

    std::uint64_t variant_of(const BitString& x) const { return redundant_ ? get(x, degree_ * width_) : 0; }

    std::size_t degree_;
    std::size_t width_;
    bool redundant_;
};

/// Identity test by trying every witness of length c.
inline bool bb_is_identity(const BlackBox& box, const BitString& x)
{
    const std::size_t c = box.witness_length();
    if (c > 20) throw cap_exceeded("witness length too large to enumerate");
    BitString w(c, false);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << c); ++v) {
        for (std::size_t k = 0; k < c; ++k) w[k] = (v >> k) & 1;
        if (box.id(x, w)) return true;
    }
    return false;
}

inline bool bb_equal(const BlackBox& box, const BitString& x, const BitString& y)
{
    return bb_is_identity(box, box.prod(x, box.inv(y)));
}

/// Membership proof for target in <generators>: a straight-line program
/// over the generators and a witness that (program value) * target^-1 = 1.
struct BbCertificate {
    Slp program;
    BitString witness;
};

/// Largest accepted program size, (b + 1)^2.
inline std::size_t bb_certificate_limit(const BlackBox& box)
{
    const std::size_t b = box.code_length();
    return (b + 1) * (b + 1);
}

/// Checks a membership certificate using only the oracles. Throws
/// input_error for a malformed proof (oversized or with bad references, or
/// invalid encodings); returns false when a well-formed proof fails.
inline bool bb_subgroup_verify(const BlackBox& box, const BitString& target, const std::vector<BitString>& generators,
                               const BbCertificate& cert)
{
    detail::require(cert.program.size() <= bb_certificate_limit(box),
                    "certificate exceeds the (b+1)^2 size bound");
    detail::require(cert.witness.size() == box.witness_length(), "witness has the wrong length");
    detail::require(box.valid(target), "target is not a valid encoding");
    for (const auto& g : generators) detail::require(box.valid(g), "generator is not a valid encoding");
    auto values = eval_slp_with(cert.program, generators,
                                [&](const BitString& x, const BitString& y) { return box.prod(x, y); });
    // the empty program produces the identity, so g' g^-1 is just g^-1
    const BitString check = values.empty() ? box.inv(target) : box.prod(values.back(), box.inv(target));
    return box.id(check, cert.witness);
}

struct BbClosureStats {
    std::size_t elements = 0;
};

/// Decides target in <generators> by breadth-first closure through the
/// oracles, deduplicating by identity tests. Throws cap_exceeded once more
/// than `cap` distinct elements have been found.
inline bool bb_exhaustive_decide(const BlackBox& box, const BitString& target, const std::vector<BitString>& generators,
                                 std::size_t cap = 100'000, BbClosureStats* stats = nullptr)
{
    detail::require(box.valid(target), "target is not a valid encoding");
    for (const auto& g : generators) detail::require(box.valid(g), "generator is not a valid encoding");
    if (bb_is_identity(box, target)) return true;
    std::vector<BitString> found;
    auto known = [&](const BitString& y) {
        for (const auto& z : found)
            if (bb_equal(box, y, z)) return true;
        return false;
    };
    auto record = [&](BitString y) {
        found.push_back(std::move(y));
        if (stats) stats->elements = found.size();
        if (found.size() > cap) throw cap_exceeded("black-box closure exceeded " + std::to_string(cap) + " elements");
    };
    for (const auto& g : generators) {
        if (known(g)) continue;
        if (bb_equal(box, g, target)) return true;
        record(g);
    }
    // In a finite group the semigroup generated is the subgroup generated.
    for (std::size_t head = 0; head < found.size(); ++head) {
        for (const auto& g : generators) {
            BitString y = box.prod(found[head], g);
            if (known(y)) continue;
            if (bb_equal(box, y, target)) return true;
            record(std::move(y));
        }
    }
    return false;
}

/// Certificate for a permutation-backed box built from a stabilizer chain of
/// the generated group: the program is expressed over the strong generators,
/// which are returned alongside it encoded in the box.
struct BoxedMembershipProof {
    std::vector<BitString> generators;
    BbCertificate certificate;
};

inline BoxedMembershipProof bb_certify(const PermutationBlackBox& box, const Bsgs& group, const Permutation& a)
{
    BoxedMembershipProof proof;
    for (const auto& s : group.strong_generators()) proof.generators.push_back(box.encode(s));
    proof.certificate.program = factor_as_slp(group, a);
    proof.certificate.witness = BitString(box.witness_length(), false);
    return proof;
}

} // namespace grpmem
