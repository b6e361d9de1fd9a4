#pragma once

// Hardness reductions into permutation-group problems, each paired with a
// brute-force check usable on small instances:
//   exact 3-hitting set (X3HS) -> subset sum over Z_3^d -> subset sum in S_3d
//   X3HS -> 3-knapsack in a direct product of symmetric groups
//   membership in G H G for abelian G, H -> knapsack
//
// Throughout [n] is the cycle (1 2 ... n) placed on the first n points of
// its block.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "grpmem/bigint.hpp"
#include "grpmem/errors.hpp"
#include "grpmem/knapsack.hpp"
#include "grpmem/permutation.hpp"

namespace grpmem {

/// Ground set {0..n-1}; each triple lists the members of one set. The
/// reductions also accept triples with repeats ("alpha" form), where a
/// member chosen k times in a triple counts k times.
struct X3hsInstance {
    std::size_t n = 0;
    std::vector<std::array<std::size_t, 3>> sets;

    /// Triples must be in range; proper instances also need distinct members.
    void validate(bool allow_repeats = false) const
    {
        for (const auto& c : sets) {
            for (auto x : c) detail::require(x < n, "X3HS element out of range");
            if (!allow_repeats)
                detail::require(c[0] != c[1] && c[0] != c[2] && c[1] != c[2],
                                "X3HS sets must have three distinct elements");
        }
    }
};

/// Number of positions k with sets[i][k] chosen.
inline std::size_t hits(const std::array<std::size_t, 3>& c, const std::vector<bool>& chosen)
{
    return static_cast<std::size_t>(chosen[c[0]]) + chosen[c[1]] + chosen[c[2]];
}

/// A subset hitting every triple exactly once, least in lexicographic order
/// of sorted member lists; by 2^n enumeration.
inline std::optional<std::vector<std::size_t>> solve_x3hs(const X3hsInstance& inst, bool allow_repeats = false)
{
    inst.validate(allow_repeats);
    if (inst.n > 20) throw cap_exceeded("X3HS enumeration is limited to n <= 20");
    std::optional<std::vector<std::size_t>> best;
    std::vector<bool> chosen(inst.n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inst.n); ++mask) {
        for (std::size_t x = 0; x < inst.n; ++x) chosen[x] = mask >> x & 1;
        bool ok = true;
        for (const auto& c : inst.sets) ok = ok && hits(c, chosen) == 1;
        if (!ok) continue;
        std::vector<std::size_t> members;
        for (std::size_t x = 0; x < inst.n; ++x)
            if (chosen[x]) members.push_back(x);
        if (!best || members < *best) best = std::move(members);
    }
    return best;
}

/// Element of Z_3^d.
struct Z3Vector {
    std::vector<std::uint8_t> v;

    Z3Vector() = default;
    explicit Z3Vector(std::size_t d) : v(d, 0) {}
    explicit Z3Vector(std::vector<std::uint8_t> entries) : v(std::move(entries))
    {
        for (auto& x : v) x %= 3;
    }

    std::size_t dimension() const noexcept { return v.size(); }

    Z3Vector operator+(const Z3Vector& o) const
    {
        detail::require(v.size() == o.v.size(), "Z3 vector dimension mismatch");
        Z3Vector r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) r.v[i] = static_cast<std::uint8_t>((v[i] + o.v[i]) % 3);
        return r;
    }

    bool operator==(const Z3Vector&) const = default;
};

struct Z3SubsetSum {
    Z3Vector target;
    std::vector<Z3Vector> items;
};

/// Item i has a 1 in coordinate j iff element i lies in set j; the target is
/// all ones.
inline Z3SubsetSum reduce_x3hs_to_subsetsum_z3(const X3hsInstance& inst)
{
    inst.validate();
    const std::size_t d = inst.sets.size();
    Z3SubsetSum out;
    out.target = Z3Vector(std::vector<std::uint8_t>(d, 1));
    out.items.assign(inst.n, Z3Vector(d));
    for (std::size_t j = 0; j < d; ++j)
        for (auto x : inst.sets[j]) out.items[x].v[j] = 1;
    return out;
}

/// Choice bits with sum of chosen items equal to the target, by 2^n
/// enumeration.
inline std::optional<std::vector<std::uint64_t>> solve_z3_subset_sum(const Z3SubsetSum& s)
{
    const std::size_t n = s.items.size();
    if (n > 24) throw cap_exceeded("Z3 subset sum enumeration is limited to 24 items");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        Z3Vector sum(s.target.dimension());
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) sum = sum + s.items[i];
        if (sum == s.target) {
            std::vector<std::uint64_t> bits(n);
            for (std::size_t i = 0; i < n; ++i) bits[i] = mask >> i & 1;
            return bits;
        }
    }
    return std::nullopt;
}

/// Coordinate e with value c becomes the c-th power of the 3-cycle on
/// points 3e+1, 3e+2, 3e+3.
inline Permutation embed_z3_in_sym(const Z3Vector& x)
{
    std::vector<Point> img(3 * x.dimension());
    for (std::size_t e = 0; e < x.dimension(); ++e)
        for (Point k = 0; k < 3; ++k) img[3 * e + k] = static_cast<Point>(3 * e + (k + x.v[e]) % 3);
    return Permutation::from_images(std::move(img));
}

/// The subset-sum instance in S_3d obtained by embedding.
inline KnapsackInstance embed_z3_subset_sum(const Z3SubsetSum& s)
{
    KnapsackInstance k;
    k.degree = 3 * s.target.dimension();
    k.target = embed_z3_in_sym(s.target);
    for (const auto& x : s.items) k.factors.push_back(embed_z3_in_sym(x));
    k.domain = ExponentDomain::binary;
    return k;
}

/// The explicit cycle (1 3 5 ... q 2 4 ... q-1 q+1 q+2 ... p) on p points,
/// checked against [q][p].
inline Permutation cycle_product_form(std::size_t p, std::size_t q)
{
    detail::require(q % 2 == 1 && p > q && q > 0, "cycle product form needs q odd and p > q > 0");
    std::vector<Point> cycle;
    for (std::size_t i = 1; i <= q; i += 2) cycle.push_back(static_cast<Point>(i));
    for (std::size_t i = 2; i < q; i += 2) cycle.push_back(static_cast<Point>(i));
    for (std::size_t i = q + 1; i <= p; ++i) cycle.push_back(static_cast<Point>(i));
    auto form = Permutation::from_cycles(p, {cycle});
    detail::ensure(form == Permutation::standard_cycle(q, p) * Permutation::standard_cycle(p, p),
                   "cycle product form disagrees with [q][p]");
    return form;
}

/// Both sides of [p]^{-x2} [q]^{x1} ([p][q])^{x2} = [q] = [q]^{x1} [p]^{-x2} ([p][q])^{x2}
/// on p points.
inline bool two_cycle_equation(std::size_t p, std::size_t q, const BigInt& x1, const BigInt& x2)
{
    const auto cp = Permutation::standard_cycle(p, p), cq = Permutation::standard_cycle(q, p);
    const auto pq = (cp * cq).pow(x2), pinv = cp.pow(-x2), qx = cq.pow(x1);
    return pinv * qx * pq == cq && qx * pinv * pq == cq;
}

/// First `count` odd primes.
inline std::vector<std::uint64_t> odd_primes(std::size_t count)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 3; out.size() < count; n += 2) {
        bool prime = true;
        for (std::uint64_t d = 3; d * d <= n && prime; d += 2) prime = n % d != 0;
        if (prime) out.push_back(n);
    }
    return out;
}

/// The 3-knapsack instance g = g1^{z1} g2^{z2} g3^{z3} built from an X3HS
/// instance with elements 0..m-1 and triples C_0..C_{d-1}.
///
/// Element j owns a block V_j = S_pj x S_pj x Z_pj x Z_pj x Z_rj on
/// 4 p_j + r_j points, triple i a block C_i = Z_qi x S_P x S_P x S_P on
/// q_i + 3P points (P the largest p_j). Cyclic factors Z_n are <[n]> on n
/// points. Per block, (g; g1; g2; g3) are
///   V_j: ([r], [r], 0, 0, 0; [r], [p]^-1, 1, 1, 1; [p]^-1, [r], -1, 0, -1;
///         [p][r], [p][r], 0, -1, 0)
///   C_i: (1, id, id, id; 1, [q]^-1, [p_a2]^-1, [q][p_a3];
///         1, [q][p_a1], [q]^-1, [p_a3]^-1; 1, [p_a1]^-1, [q][p_a2], [q]^-1)
/// with p = p_j, r = r_j, q = q_i and a_k the k-th member of C_i.
struct ThreeKnapsackReduction {
    struct Block {
        std::string name;
        std::size_t offset = 0; // first point, 0-based
        std::size_t size = 0;
    };

    std::size_t m = 0; // ground set size
    std::vector<std::array<std::size_t, 3>> alpha;
    std::vector<std::uint64_t> p, r, q;
    std::uint64_t P = 0;
    std::size_t degree = 0;
    std::vector<Block> blocks;
    Permutation g, g1, g2, g3;

    KnapsackInstance instance() const
    {
        KnapsackInstance k;
        k.degree = degree;
        k.target = g;
        k.factors = {g1, g2, g3};
        k.domain = ExponentDomain::natural;
        k.fixed_k = 3;
        return k;
    }

    bool verify(const std::array<BigInt, 3>& z) const { return g1.pow(z[0]) * g2.pow(z[1]) * g3.pow(z[2]) == g; }

    /// Exponents from a hitting set (chosen[j] = element j is in it):
    /// z_k = chosen(j) mod p_j, z1 = z2 = 1 - chosen(j) mod r_j and
    /// z_k = chosen(a_k) mod q_i, merged by the Chinese remainder theorem.
    std::array<BigInt, 3> exponents_from(const std::vector<bool>& chosen) const
    {
        detail::require(chosen.size() == m, "assignment has the wrong size");
        std::array<BigInt, 3> z;
        for (std::size_t k = 0; k < 3; ++k) {
            BigInt res = 0, mod = 1;
            auto add = [&](std::uint64_t value, std::uint64_t modulus) {
                auto merged = crt_combine(res, mod, BigInt(value % modulus), BigInt(modulus));
                detail::ensure(merged.has_value(), "prime moduli must be compatible");
                std::tie(res, mod) = *merged;
            };
            for (std::size_t j = 0; j < m; ++j) {
                add(chosen[j] ? 1 : 0, p[j]);
                if (k < 2) add(chosen[j] ? 0 : 1, r[j]);
            }
            for (std::size_t i = 0; i < alpha.size(); ++i) add(chosen[alpha[i][k]] ? 1 : 0, q[i]);
            z[k] = res;
        }
        return z;
    }

    /// Decides the instance from the residue conditions: for each choice
    /// pattern sigma in {0,1}^m (fixing all residues modulo the p_j and
    /// r_j), each triple block needs some (z1, z2, z3) mod q_i with
    /// z1 + z2 + z3 = 1 and the three S_P coordinates equal to the identity,
    /// evaluated directly in S_P. Returns the first working sigma.
    std::optional<std::vector<bool>> residue_solve() const
    {
        if (m > 20) throw cap_exceeded("residue solver is limited to m <= 20");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
            std::vector<bool> sigma(m);
            for (std::size_t j = 0; j < m; ++j) sigma[j] = mask >> j & 1;
            bool ok = true;
            for (std::size_t i = 0; i < alpha.size() && ok; ++i) ok = block_solvable(i, sigma);
            if (ok) return sigma;
        }
        return std::nullopt;
    }

    bool block_solvable(std::size_t i, const std::vector<bool>& sigma) const
    {
        const std::uint64_t qi = q[i];
        const auto cq = Permutation::standard_cycle(qi, P), cqi = cq.inverse();
        std::array<Permutation, 3> cp;
        for (std::size_t k = 0; k < 3; ++k) cp[k] = Permutation::standard_cycle(p[alpha[i][k]], P);
        // integer exponent with residue `zq` mod q_i and sigma(a_k) mod every p_{a_k}
        auto lift = [&](std::uint64_t zq) {
            BigInt res = zq, mod = qi;
            for (std::size_t k = 0; k < 3; ++k) {
                auto merged = crt_combine(res, mod, BigInt(sigma[alpha[i][k]] ? 1 : 0), BigInt(p[alpha[i][k]]));
                detail::ensure(merged.has_value(), "prime moduli must be compatible");
                std::tie(res, mod) = *merged;
            }
            return res;
        };
        for (std::uint64_t r1 = 0; r1 < qi; ++r1)
            for (std::uint64_t r2 = 0; r2 < qi; ++r2) {
                const std::uint64_t r3 = (1 + 2 * qi - r1 - r2) % qi;
                const BigInt z1 = lift(r1), z2 = lift(r2), z3 = lift(r3);
                const auto s1 = cqi.pow(z1) * (cq * cp[0]).pow(z2) * cp[0].inverse().pow(z3);
                const auto s2 = cp[1].inverse().pow(z1) * cqi.pow(z2) * (cq * cp[1]).pow(z3);
                const auto s3 = (cq * cp[2]).pow(z1) * cp[2].inverse().pow(z2) * cqi.pow(z3);
                if (s1.is_identity() && s2.is_identity() && s3.is_identity()) return true;
            }
        return false;
    }
};

namespace detail {

// Places `part` (acting on its first points) at `offset` inside `into`.
inline void place(std::vector<Point>& into, std::size_t offset, const Permutation& part)
{
    for (Point i = 0; i < part.degree(); ++i) into[offset + i] = static_cast<Point>(offset + part[i]);
}

} // namespace detail

/// Reduction on raw triples; repeated members are allowed and count with
/// multiplicity.
inline ThreeKnapsackReduction reduce_alpha_to_3knapsack(std::size_t m,
                                                        const std::vector<std::array<std::size_t, 3>>& alpha)
{
    X3hsInstance check{m, alpha};
    check.validate(true);
    detail::require(m >= 1, "X3HS ground set is empty");
    ThreeKnapsackReduction red;
    red.m = m;
    red.alpha = alpha;
    const std::size_t d = alpha.size();
    const auto primes = odd_primes(2 * m + d);
    red.p.assign(primes.end() - static_cast<std::ptrdiff_t>(m), primes.end());
    red.r.assign(primes.begin(), primes.begin() + static_cast<std::ptrdiff_t>(m));
    red.q.assign(primes.begin() + static_cast<std::ptrdiff_t>(m), primes.begin() + static_cast<std::ptrdiff_t>(m + d));
    red.P = red.p.back();

    std::size_t at = 0;
    auto block = [&](std::string name, std::size_t size) {
        red.blocks.push_back({std::move(name), at, size});
        at += size;
        return red.blocks.back().offset;
    };
    struct VOffsets {
        std::size_t s1, s2, z1, z2, zr;
    };
    std::vector<VOffsets> vo;
    for (std::size_t j = 0; j < m; ++j) {
        const auto pj = red.p[j], rj = red.r[j];
        const auto tag = "V" + std::to_string(j + 1);
        VOffsets o{};
        o.s1 = block(tag + ".S" + std::to_string(pj) + "a", pj);
        o.s2 = block(tag + ".S" + std::to_string(pj) + "b", pj);
        o.z1 = block(tag + ".Z" + std::to_string(pj) + "a", pj);
        o.z2 = block(tag + ".Z" + std::to_string(pj) + "b", pj);
        o.zr = block(tag + ".Z" + std::to_string(rj), rj);
        vo.push_back(o);
    }
    struct COffsets {
        std::size_t zq, s1, s2, s3;
    };
    std::vector<COffsets> co;
    for (std::size_t i = 0; i < d; ++i) {
        const auto tag = "C" + std::to_string(i + 1);
        COffsets o{};
        o.zq = block(tag + ".Z" + std::to_string(red.q[i]), red.q[i]);
        o.s1 = block(tag + ".S" + std::to_string(red.P) + "a", red.P);
        o.s2 = block(tag + ".S" + std::to_string(red.P) + "b", red.P);
        o.s3 = block(tag + ".S" + std::to_string(red.P) + "c", red.P);
        co.push_back(o);
    }
    red.degree = at;

    std::array<std::vector<Point>, 4> img;
    for (auto& v : img) {
        v.resize(red.degree);
        for (std::size_t x = 0; x < red.degree; ++x) v[x] = static_cast<Point>(x);
    }
    auto cyc = [](std::uint64_t len, std::uint64_t deg) { return Permutation::standard_cycle(len, deg); };
    auto zn = [&](std::uint64_t n, long long value) { return cyc(n, n).pow(value); };

    for (std::size_t j = 0; j < m; ++j) {
        const auto pj = red.p[j], rj = red.r[j];
        const auto& o = vo[j];
        const auto R = cyc(rj, pj), Pc = cyc(pj, pj), Pinv = Pc.inverse(), PR = Pc * R;
        const std::array<std::array<Permutation, 2>, 4> sym{{{R, R}, {R, Pinv}, {Pinv, R}, {PR, PR}}};
        const std::array<std::array<long long, 3>, 4> add{{{0, 0, 0}, {1, 1, 1}, {-1, 0, -1}, {0, -1, 0}}};
        for (std::size_t e = 0; e < 4; ++e) {
            detail::place(img[e], o.s1, sym[e][0]);
            detail::place(img[e], o.s2, sym[e][1]);
            detail::place(img[e], o.z1, zn(pj, add[e][0]));
            detail::place(img[e], o.z2, zn(pj, add[e][1]));
            detail::place(img[e], o.zr, zn(rj, add[e][2]));
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        const auto qi = red.q[i];
        const auto& o = co[i];
        const auto Q = cyc(qi, red.P), Qinv = Q.inverse();
        auto pa = [&](std::size_t k) { return cyc(red.p[alpha[i][k]], red.P); };
        const Permutation id(red.P);
        const std::array<std::array<Permutation, 3>, 4> sym{{{id, id, id},
                                                             {Qinv, pa(1).inverse(), Q * pa(2)},
                                                             {Q * pa(0), Qinv, pa(2).inverse()},
                                                             {pa(0).inverse(), Q * pa(1), Qinv}}};
        for (std::size_t e = 0; e < 4; ++e) {
            detail::place(img[e], o.zq, zn(qi, 1));
            detail::place(img[e], o.s1, sym[e][0]);
            detail::place(img[e], o.s2, sym[e][1]);
            detail::place(img[e], o.s3, sym[e][2]);
        }
    }
    red.g = Permutation::from_images(img[0]);
    red.g1 = Permutation::from_images(img[1]);
    red.g2 = Permutation::from_images(img[2]);
    red.g3 = Permutation::from_images(img[3]);
    return red;
}

inline ThreeKnapsackReduction reduce_x3hs_to_3knapsack(const X3hsInstance& inst)
{
    inst.validate();
    return reduce_alpha_to_3knapsack(inst.n, inst.sets);
}

/// s in <genG> <genH> <genG> iff s = g_1^x1 .. g_k^xk h_1^y1 .. h_l^yl g_1^z1 .. g_k^zk
/// has a solution, for abelian <genG> and <genH>.
inline KnapsackInstance reduce_product_membership_to_knapsack(const std::vector<Permutation>& genG,
                                                              const std::vector<Permutation>& genH,
                                                              const Permutation& s)
{
    auto abelian = [](const std::vector<Permutation>& gens) {
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (std::size_t j = i + 1; j < gens.size(); ++j)
                if (gens[i] * gens[j] != gens[j] * gens[i]) return false;
        return true;
    };
    detail::require(abelian(genG), "first group is not abelian");
    detail::require(abelian(genH), "second group is not abelian");
    KnapsackInstance k;
    k.degree = s.degree();
    k.target = s;
    k.factors = genG;
    k.factors.insert(k.factors.end(), genH.begin(), genH.end());
    k.factors.insert(k.factors.end(), genG.begin(), genG.end());
    k.domain = ExponentDomain::natural;
    k.validate();
    return k;
}

} // namespace grpmem
