#pragma once

// Subset sum and knapsack over permutation groups: is the target a product
// a_1^{i_1} ... a_n^{i_n}, with exponents in {0, 1} or in N? Powers only
// depend on i_k mod order(a_k), so every search is finite.
//
// For two factors the question becomes a matrix identity. With P_a the
// permutation matrix (P_a)_{i,j} = 1 iff j = i^a, so that P_ab = P_a P_b,
// and vec stacking columns, vec(X Y Z) = (Z^T kron X) vec(Y) gives
//   (P_a2^T kron I)^{x2} (I kron P_a1)^{x1} vec(I) = vec(P_a)
//   iff a1^{x1} a2^{x2} = a,
// and the two Kronecker factors commute.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "grpmem/bigint.hpp"
#include "grpmem/errors.hpp"
#include "grpmem/permutation.hpp"

namespace grpmem {

enum class ExponentDomain { binary, natural };

struct KnapsackInstance {
    std::size_t degree = 0;
    Permutation target;
    std::vector<Permutation> factors;
    ExponentDomain domain = ExponentDomain::natural;
    std::optional<std::size_t> fixed_k; // k-knapsack: exactly k factors

    void validate() const
    {
        detail::require(target.degree() == degree, "target degree does not match the instance");
        for (const auto& a : factors) detail::require(a.degree() == degree, "factor degree does not match the instance");
        if (fixed_k) detail::require(factors.size() == *fixed_k, "instance does not have exactly k factors");
    }
};

/// Product a_1^{e_1} ... a_n^{e_n}.
inline Permutation evaluate_exponents(const std::vector<Permutation>& factors, const std::vector<std::uint64_t>& e,
                                      std::size_t degree)
{
    detail::require(e.size() == factors.size(), "one exponent per factor is needed");
    Permutation x(degree);
    for (std::size_t k = 0; k < factors.size(); ++k) x = x * factors[k].pow(BigInt(e[k]));
    return x;
}

struct KnapsackOptions {
    std::uint64_t max_states = 5'000'000;
};

struct KnapsackResult {
    std::optional<std::vector<std::uint64_t>> exponents;
    std::uint64_t states = 0;
};

enum class SubsetSumMethod { memo_dfs, meet_in_middle, exhaustive };

namespace detail {

struct StateHash {
    std::size_t operator()(const std::pair<std::size_t, Permutation>& s) const noexcept
    {
        return std::hash<Permutation>{}(s.second) * 31 + s.first;
    }
};

inline void count_state(KnapsackResult& res, const KnapsackOptions& opt)
{
    if (++res.states > opt.max_states) throw cap_exceeded("knapsack search exceeded its state cap");
}

inline KnapsackResult subset_sum_dfs(const KnapsackInstance& inst, const KnapsackOptions& opt)
{
    KnapsackResult res;
    std::unordered_set<std::pair<std::size_t, Permutation>, StateHash> dead;
    std::vector<std::uint64_t> bits(inst.factors.size(), 0);
    const std::size_t n = inst.factors.size();
    // (index, prefix product) states already known not to reach the target
    std::function<bool(std::size_t, const Permutation&)> go = [&](std::size_t i, const Permutation& prefix) {
        if (i == n) return prefix == inst.target;
        if (dead.contains({i, prefix})) return false;
        count_state(res, opt);
        bits[i] = 0;
        if (go(i + 1, prefix)) return true;
        bits[i] = 1;
        if (go(i + 1, prefix * inst.factors[i])) return true;
        dead.insert({i, prefix});
        return false;
    };
    if (go(0, Permutation(inst.degree))) res.exponents = bits;
    return res;
}

inline KnapsackResult subset_sum_exhaustive(const KnapsackInstance& inst, const KnapsackOptions& opt)
{
    const std::size_t n = inst.factors.size();
    if (n >= 63 || (std::uint64_t{1} << n) > opt.max_states) throw cap_exceeded("2^n assignments exceed the state cap");
    KnapsackResult res;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        ++res.states;
        Permutation x(inst.degree);
        for (std::size_t k = 0; k < n; ++k)
            if (mask >> k & 1) x = x * inst.factors[k];
        if (x == inst.target) {
            std::vector<std::uint64_t> bits(n);
            for (std::size_t k = 0; k < n; ++k) bits[k] = mask >> k & 1;
            res.exponents = bits;
            return res;
        }
    }
    return res;
}

inline KnapsackResult subset_sum_mitm(const KnapsackInstance& inst, const KnapsackOptions& opt)
{
    const std::size_t n = inst.factors.size(), half = n / 2;
    if (half >= 40 || (std::uint64_t{1} << (n - half)) > opt.max_states)
        throw cap_exceeded("half assignments exceed the state cap");
    KnapsackResult res;
    std::unordered_map<Permutation, std::uint64_t> left;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << half); ++mask) {
        ++res.states;
        Permutation x(inst.degree);
        for (std::size_t k = 0; k < half; ++k)
            if (mask >> k & 1) x = x * inst.factors[k];
        left.emplace(std::move(x), mask);
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - half)); ++mask) {
        ++res.states;
        Permutation y(inst.degree);
        for (std::size_t k = 0; k < n - half; ++k)
            if (mask >> k & 1) y = y * inst.factors[half + k];
        auto it = left.find(inst.target * y.inverse());
        if (it == left.end()) continue;
        std::vector<std::uint64_t> bits(n);
        for (std::size_t k = 0; k < half; ++k) bits[k] = it->second >> k & 1;
        for (std::size_t k = 0; k < n - half; ++k) bits[half + k] = mask >> k & 1;
        res.exponents = bits;
        return res;
    }
    return res;
}

} // namespace detail

inline KnapsackResult solve_subset_sum(const KnapsackInstance& inst, SubsetSumMethod method = SubsetSumMethod::memo_dfs,
                                       const KnapsackOptions& opt = {})
{
    inst.validate();
    detail::require(inst.domain == ExponentDomain::binary, "subset sum needs the binary exponent domain");
    KnapsackResult res;
    switch (method) {
    case SubsetSumMethod::memo_dfs: res = detail::subset_sum_dfs(inst, opt); break;
    case SubsetSumMethod::meet_in_middle: res = detail::subset_sum_mitm(inst, opt); break;
    case SubsetSumMethod::exhaustive: res = detail::subset_sum_exhaustive(inst, opt); break;
    }
    if (res.exponents)
        detail::ensure(evaluate_exponents(inst.factors, *res.exponents, inst.degree) == inst.target,
                       "subset sum assignment does not verify");
    return res;
}

/// Breadth-first over (index, prefix product) layers; exponent k ranges over
/// [0, order(a_k)), or {0, 1} for the binary domain.
inline KnapsackResult solve_knapsack(const KnapsackInstance& inst, const KnapsackOptions& opt = {})
{
    inst.validate();
    const std::size_t n = inst.factors.size();
    KnapsackResult res;
    // layers[i]: prefix products of the first i factors -> (previous product, exponent)
    std::vector<std::unordered_map<Permutation, std::pair<Permutation, std::uint64_t>>> layers(n + 1);
    const Permutation one(inst.degree);
    layers[0].emplace(one, std::make_pair(one, 0));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = inst.factors[i];
        std::uint64_t range = 2;
        if (inst.domain == ExponentDomain::natural) {
            const BigInt ord = a.order();
            if (ord > opt.max_states) throw cap_exceeded("factor order exceeds the state cap");
            range = ord.convert_to<std::uint64_t>();
        }
        for (const auto& [x, from] : layers[i]) {
            Permutation y = x;
            for (std::uint64_t e = 0; e < range; ++e) {
                if (layers[i + 1].emplace(y, std::make_pair(x, e)).second) detail::count_state(res, opt);
                y = y * a;
            }
        }
    }
    auto it = layers[n].find(inst.target);
    if (it == layers[n].end()) return res;
    std::vector<std::uint64_t> e(n);
    Permutation at = inst.target;
    for (std::size_t i = n; i-- > 0;) {
        const auto& [prev, exp] = layers[i + 1].at(at);
        e[i] = exp;
        at = prev;
    }
    detail::ensure(evaluate_exponents(inst.factors, e, inst.degree) == inst.target, "knapsack solution does not verify");
    res.exponents = std::move(e);
    return res;
}

/// Least y >= 0 with c^y = b, or nullopt. Each cycle of c forces y modulo
/// its length; the residues are merged by the Chinese remainder theorem.
inline std::optional<BigInt> cyclic_dlog(const Permutation& c, const Permutation& b)
{
    detail::require(c.degree() == b.degree(), "degree mismatch in discrete log");
    const std::size_t m = c.degree();
    std::vector<bool> seen(m, false);
    BigInt r = 0, mod = 1;
    for (Point start = 0; start < m; ++start) {
        if (seen[start]) continue;
        std::vector<Point> cycle;
        for (Point x = start; !seen[x]; x = c[x]) {
            seen[x] = true;
            cycle.push_back(x);
        }
        const std::size_t len = cycle.size();
        std::size_t shift = len;
        for (std::size_t k = 0; k < len; ++k)
            if (cycle[k] == b[start]) shift = k;
        if (shift == len) return std::nullopt;
        for (std::size_t k = 0; k < len; ++k)
            if (b[cycle[k]] != cycle[(k + shift) % len]) return std::nullopt;
        auto merged = crt_combine(r, mod, BigInt(shift), BigInt(len));
        if (!merged) return std::nullopt;
        std::tie(r, mod) = *merged;
    }
    detail::ensure(c.pow(r) == b, "discrete log does not verify");
    return r;
}

struct TwoKnapsackOptions {
    std::uint64_t max_outer = 10'000'000;
};

/// Exponents with a1^{x1} a2^{x2} = a: x1 runs over [0, order(a1)), and
/// a1^{-x1} a is tested against <a2> by discrete log.
inline std::optional<std::pair<BigInt, BigInt>> solve_2_knapsack(const Permutation& a1, const Permutation& a2,
                                                                 const Permutation& a,
                                                                 const TwoKnapsackOptions& opt = {})
{
    detail::require(a1.degree() == a2.degree() && a1.degree() == a.degree(), "degree mismatch in 2-knapsack");
    const BigInt ord = a1.order();
    if (ord > opt.max_outer) throw cap_exceeded("order of the first factor exceeds the outer-loop cap");
    const Permutation step = a1.inverse();
    Permutation rest = a;
    for (BigInt x1 = 0; x1 < ord; ++x1) {
        if (auto x2 = cyclic_dlog(a2, rest)) return std::make_pair(x1, *x2);
        rest = step * rest;
    }
    return std::nullopt;
}

/// Square 0/1 matrix with products taken in the boolean semiring (for
/// permutation matrices this is the ordinary product).
class ZeroOneMatrix {
public:
    static constexpr std::size_t max_dimension = 4096;

    explicit ZeroOneMatrix(std::size_t n = 0) : n_(n)
    {
        if (n > max_dimension) throw cap_exceeded("matrix dimension exceeds 4096");
        cells_.assign(n * n, 0);
    }

    static ZeroOneMatrix identity(std::size_t n)
    {
        ZeroOneMatrix r(n);
        for (std::size_t i = 0; i < n; ++i) r.set(i, i, true);
        return r;
    }

    /// Row i has its 1 in column i^a.
    static ZeroOneMatrix from_permutation(const Permutation& a)
    {
        ZeroOneMatrix r(a.degree());
        for (Point i = 0; i < a.degree(); ++i) r.set(i, a[i], true);
        return r;
    }

    std::size_t dimension() const noexcept { return n_; }
    bool at(std::size_t i, std::size_t j) const { return cells_[i * n_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool v) { cells_[i * n_ + j] = v ? 1 : 0; }

    bool is_permutation_matrix() const
    {
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t row = 0, col = 0;
            for (std::size_t j = 0; j < n_; ++j) {
                row += at(i, j);
                col += at(j, i);
            }
            if (row != 1 || col != 1) return false;
        }
        return true;
    }

    ZeroOneMatrix transpose() const
    {
        ZeroOneMatrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r.set(j, i, at(i, j));
        return r;
    }

    ZeroOneMatrix operator*(const ZeroOneMatrix& o) const
    {
        detail::require(n_ == o.n_, "matrix dimension mismatch");
        ZeroOneMatrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k) {
                if (!at(i, k)) continue;
                for (std::size_t j = 0; j < n_; ++j)
                    if (o.at(k, j)) r.set(i, j, true);
            }
        return r;
    }

    ZeroOneMatrix pow(BigInt e) const
    {
        detail::require(e >= 0, "negative matrix power");
        ZeroOneMatrix result = identity(n_), base = *this;
        while (e > 0) {
            if ((e & 1) != 0) result = result * base;
            e >>= 1;
            if (e > 0) base = base * base;
        }
        return result;
    }

    std::vector<std::uint8_t> apply(const std::vector<std::uint8_t>& v) const
    {
        detail::require(v.size() == n_, "vector dimension mismatch");
        std::vector<std::uint8_t> r(n_, 0);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_ && !r[i]; ++j) r[i] = at(i, j) && v[j];
        return r;
    }

    bool operator==(const ZeroOneMatrix&) const = default;

private:
    std::size_t n_;
    std::vector<std::uint8_t> cells_;
};

/// Block matrix (x_{i,j} y).
inline ZeroOneMatrix kron(const ZeroOneMatrix& x, const ZeroOneMatrix& y)
{
    const std::size_t p = x.dimension(), q = y.dimension();
    if (p * q > ZeroOneMatrix::max_dimension) throw cap_exceeded("Kronecker product dimension exceeds 4096");
    ZeroOneMatrix r(p * q);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            if (!x.at(i, j)) continue;
            for (std::size_t k = 0; k < q; ++k)
                for (std::size_t l = 0; l < q; ++l) r.set(i * q + k, j * q + l, y.at(k, l));
        }
    return r;
}

/// Columns stacked top to bottom.
inline std::vector<std::uint8_t> vec(const ZeroOneMatrix& x)
{
    const std::size_t n = x.dimension();
    std::vector<std::uint8_t> v(n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) v[j * n + i] = x.at(i, j);
    return v;
}

/// (P_a2^T kron I, I kron P_a1).
inline std::pair<ZeroOneMatrix, ZeroOneMatrix> kronecker_factors(const Permutation& a1, const Permutation& a2)
{
    detail::require(a1.degree() == a2.degree(), "degree mismatch in Kronecker factors");
    const auto id = ZeroOneMatrix::identity(a1.degree());
    return {kron(ZeroOneMatrix::from_permutation(a2).transpose(), id), kron(id, ZeroOneMatrix::from_permutation(a1))};
}

inline bool kronecker_factors_commute(const Permutation& a1, const Permutation& a2)
{
    const auto [left, right] = kronecker_factors(a1, a2);
    return left * right == right * left;
}

inline bool check_kronecker_equivalence(const Permutation& a1, const Permutation& a2, const Permutation& a,
                                        const BigInt& x1, const BigInt& x2)
{
    detail::require(a.degree() == a1.degree(), "degree mismatch in Kronecker check");
    detail::require(x1 >= 0 && x2 >= 0, "exponents must be natural numbers");
    const auto [left, right] = kronecker_factors(a1, a2);
    const auto lhs = (left.pow(x2) * right.pow(x1)).apply(vec(ZeroOneMatrix::identity(a.degree())));
    return lhs == vec(ZeroOneMatrix::from_permutation(a));
}

} // namespace grpmem
