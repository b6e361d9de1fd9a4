#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace grpmem {

/// Arbitrary precision integer used for group orders and exponents.
using BigInt = boost::multiprecision::cpp_int;

inline BigInt lcm(const BigInt& a, const BigInt& b)
{
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::lcm(a, b);
}

/// Floor of log2(n) for n >= 1, and 0 for n == 0.
inline std::size_t floor_log2(const BigInt& n)
{
    if (n <= 1) return 0;
    return static_cast<std::size_t>(boost::multiprecision::msb(n));
}

/// Non-negative residue of a modulo m (m > 0).
inline std::uint64_t mod_u64(const BigInt& a, std::uint64_t m)
{
    BigInt r = a % m;
    if (r < 0) r += m;
    return r.convert_to<std::uint64_t>();
}

/// Extended Euclid: returns (g, x, y) with a x + b y = g = gcd(a, b).
inline std::tuple<BigInt, BigInt, BigInt> ext_gcd(const BigInt& a, const BigInt& b)
{
    BigInt old_r = a, r = b, old_x = 1, x = 0, old_y = 0, y = 1;
    while (r != 0) {
        const BigInt q = old_r / r;
        old_r -= q * r;
        std::swap(old_r, r);
        old_x -= q * x;
        std::swap(old_x, x);
        old_y -= q * y;
        std::swap(old_y, y);
    }
    return {old_r, old_x, old_y};
}

/// Combines x = r1 (mod m1) and x = r2 (mod m2) for moduli that need not be
/// coprime. Returns (r, lcm) with 0 <= r < lcm, or nullopt if inconsistent.
inline std::optional<std::pair<BigInt, BigInt>> crt_combine(const BigInt& r1, const BigInt& m1, const BigInt& r2,
                                                            const BigInt& m2)
{
    auto [g, p, q] = ext_gcd(m1, m2);
    const BigInt diff = r2 - r1;
    if (diff % g != 0) return std::nullopt;
    const BigInt l = m1 / g * m2;
    BigInt x = (r1 + m1 * ((diff / g * p) % (m2 / g))) % l;
    if (x < 0) x += l;
    return std::make_pair(x, l);
}

inline std::string to_string(const BigInt& n) { return n.str(); }

} // namespace grpmem
