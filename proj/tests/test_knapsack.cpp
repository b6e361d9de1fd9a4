#include <gtest/gtest.h>

#include "grpmem/knapsack.hpp"
#include "grpmem/random.hpp"
#include "oracles.hpp"

namespace grpmem {
namespace {

Permutation cyc(std::size_t m, std::vector<std::vector<Point>> c) { return Permutation::from_cycles(m, c); }

KnapsackInstance instance(Permutation target, std::vector<Permutation> factors, ExponentDomain d)
{
    KnapsackInstance k;
    k.degree = target.degree();
    k.target = std::move(target);
    k.factors = std::move(factors);
    k.domain = d;
    return k;
}

// Does some exponent tuple below the factor orders hit the target?
bool exhaustive_knapsack(const KnapsackInstance& k)
{
    std::vector<std::uint64_t> ord, e(k.factors.size(), 0);
    for (const auto& a : k.factors) ord.push_back(k.domain == ExponentDomain::binary ? 2 : a.order().convert_to<std::uint64_t>());
    for (;;) {
        if (oracle::evaluate(k.degree, [&] {
                std::vector<Permutation> word;
                for (std::size_t i = 0; i < e.size(); ++i)
                    for (std::uint64_t t = 0; t < e[i]; ++t) word.push_back(k.factors[i]);
                return word;
            }()) == k.target)
            return true;
        std::size_t i = 0;
        while (i < e.size() && ++e[i] == ord[i]) e[i++] = 0;
        if (i == e.size()) return false;
    }
}

TEST(SubsetSum, Examples)
{
    auto empty = instance(Permutation(4), {}, ExponentDomain::binary);
    auto r = solve_subset_sum(empty);
    ASSERT_TRUE(r.exponents);
    EXPECT_TRUE(r.exponents->empty());

    auto both = instance(cyc(4, {{1, 2}, {3, 4}}), {cyc(4, {{1, 2}}), cyc(4, {{3, 4}})}, ExponentDomain::binary);
    for (auto method : {SubsetSumMethod::memo_dfs, SubsetSumMethod::meet_in_middle, SubsetSumMethod::exhaustive})
        EXPECT_EQ(solve_subset_sum(both, method).exponents, (std::vector<std::uint64_t>{1, 1}));

    auto natural = both;
    natural.domain = ExponentDomain::natural;
    EXPECT_THROW(solve_subset_sum(natural), input_error);
}

TEST(SubsetSum, AgreesWithExhaustiveEnumeration)
{
    Rng rng(1);
    int yes = 0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = rng.below(13);
        std::vector<Permutation> f;
        for (std::size_t i = 0; i < n; ++i) f.push_back(rng.coin() ? oracle::random_sparse(5, rng) : random_permutation(5, rng));
        auto k = instance(random_permutation(5, rng), f, ExponentDomain::binary);
        const bool expected = exhaustive_knapsack(k);
        for (auto method : {SubsetSumMethod::memo_dfs, SubsetSumMethod::meet_in_middle, SubsetSumMethod::exhaustive}) {
            const auto r = solve_subset_sum(k, method);
            ASSERT_EQ(r.exponents.has_value(), expected) << "trial " << t;
            if (r.exponents) ASSERT_EQ(evaluate_exponents(k.factors, *r.exponents, 5), k.target);
        }
        const auto viaKnapsack = solve_knapsack(k);
        ASSERT_EQ(viaKnapsack.exponents.has_value(), expected);
        yes += expected;
    }
    EXPECT_GT(yes, 50);
    EXPECT_LT(yes, 450);
}

TEST(Knapsack, Examples)
{
    const auto a1 = cyc(5, {{1, 2, 3, 4, 5}});
    auto r = solve_knapsack(instance(a1.pow(2LL), {a1}, ExponentDomain::natural));
    EXPECT_EQ(r.exponents, std::vector<std::uint64_t>{2});

    auto outside = instance(cyc(5, {{1, 2, 3}}), {cyc(5, {{1, 2}}), cyc(5, {{4, 5}})}, ExponentDomain::natural);
    EXPECT_FALSE(solve_knapsack(outside).exponents);

    auto k = instance(Permutation(3), {cyc(3, {{1, 2}})}, ExponentDomain::natural);
    k.fixed_k = 2;
    EXPECT_THROW(solve_knapsack(k), input_error);
    k.fixed_k = 1;
    EXPECT_EQ(solve_knapsack(k).exponents, std::vector<std::uint64_t>{0});
}

TEST(Knapsack, AgreesWithExhaustiveSearch)
{
    Rng rng(2);
    int yes = 0;
    for (int t = 0; t < 300; ++t) {
        std::vector<Permutation> f;
        for (std::size_t i = rng.below(5); i > 0; --i) f.push_back(random_permutation(4, rng));
        auto k = instance(random_permutation(4, rng), f, ExponentDomain::natural);
        const bool expected = exhaustive_knapsack(k);
        const auto r = solve_knapsack(k);
        ASSERT_EQ(r.exponents.has_value(), expected);
        if (r.exponents)
            for (std::size_t i = 0; i < f.size(); ++i) ASSERT_LT(BigInt((*r.exponents)[i]), f[i].order());
        yes += expected;
    }
    EXPECT_GT(yes, 50);
}

TEST(CyclicDlog, Examples)
{
    const auto c = cyc(5, {{1, 2, 3, 4, 5}});
    EXPECT_EQ(cyclic_dlog(c, Permutation(5)), BigInt(0));
    EXPECT_EQ(cyclic_dlog(c, c.pow(3LL)), BigInt(3));
    EXPECT_FALSE(cyclic_dlog(c, cyc(5, {{1, 2}})));
    // residues 1 mod 2 and 0 mod 3 clash with nothing: y = 3
    const auto d = cyc(5, {{1, 2}, {3, 4, 5}});
    EXPECT_EQ(cyclic_dlog(d, d.pow(3LL)), BigInt(3));
    // inconsistent residues: (1 2) once, (3 4) not at all
    EXPECT_FALSE(cyclic_dlog(cyc(4, {{1, 2}, {3, 4}}), cyc(4, {{1, 2}})));
    // non-coprime cycle lengths 4 and 6
    const auto e = cyc(10, {{1, 2, 3, 4}, {5, 6, 7, 8, 9, 10}});
    EXPECT_EQ(cyclic_dlog(e, e.pow(10LL)), BigInt(10));
}

TEST(CyclicDlog, RecoversRandomExponents)
{
    Rng rng(3);
    for (int t = 0; t < 500; ++t) {
        const auto c = random_permutation(8, rng);
        const BigInt y = rng.below(1000);
        const auto got = cyclic_dlog(c, c.pow(y));
        ASSERT_TRUE(got);
        ASSERT_EQ(*got, y % c.order());
        const auto b = random_permutation(8, rng);
        const auto maybe = cyclic_dlog(c, b);
        bool in_cyclic = false;
        for (BigInt k = 0; k < c.order(); ++k) in_cyclic = in_cyclic || c.pow(k) == b;
        ASSERT_EQ(maybe.has_value(), in_cyclic);
    }
}

TEST(TwoKnapsack, Examples)
{
    const auto a1 = cyc(4, {{1, 2}}), a2 = cyc(4, {{3, 4}});
    EXPECT_EQ(solve_2_knapsack(a1, a2, Permutation(4)), std::make_pair(BigInt(0), BigInt(0)));
    EXPECT_EQ(solve_2_knapsack(a1, a2, cyc(4, {{1, 2}, {3, 4}})), std::make_pair(BigInt(1), BigInt(1)));
    EXPECT_FALSE(solve_2_knapsack(a1, a2, cyc(4, {{1, 2, 3}})));
}

TEST(TwoKnapsack, AgreesWithKnapsack)
{
    Rng rng(4);
    int yes = 0;
    for (int t = 0; t < 500; ++t) {
        const auto a1 = random_permutation(6, rng), a2 = random_permutation(6, rng);
        Permutation a = rng.coin() ? a1.pow(BigInt(rng.below(60))) * a2.pow(BigInt(rng.below(60))) : random_permutation(6, rng);
        const auto two = solve_2_knapsack(a1, a2, a);
        const auto general = solve_knapsack(instance(a, {a1, a2}, ExponentDomain::natural));
        ASSERT_EQ(two.has_value(), general.exponents.has_value());
        if (two) ASSERT_EQ(a1.pow(two->first) * a2.pow(two->second), a);
        yes += two.has_value();
    }
    EXPECT_GT(yes, 200);
}

TEST(Matrices, Examples)
{
    EXPECT_EQ(kron(ZeroOneMatrix::identity(2), ZeroOneMatrix::identity(2)), ZeroOneMatrix::identity(4));
    EXPECT_EQ(vec(ZeroOneMatrix::identity(2)), (std::vector<std::uint8_t>{1, 0, 0, 1}));
    ZeroOneMatrix x(2);
    x.set(0, 1, true);
    EXPECT_EQ(vec(x), (std::vector<std::uint8_t>{0, 0, 1, 0}));
    EXPECT_FALSE(x.is_permutation_matrix());
    EXPECT_THROW(ZeroOneMatrix(5000), cap_exceeded);
}

TEST(Matrices, PermutationMatricesMultiplyLikePermutations)
{
    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
        const auto a = random_permutation(5, rng), b = random_permutation(4, rng), c = random_permutation(5, rng);
        const auto pa = ZeroOneMatrix::from_permutation(a);
        EXPECT_TRUE(pa.is_permutation_matrix());
        EXPECT_EQ(pa * ZeroOneMatrix::from_permutation(c), ZeroOneMatrix::from_permutation(a * c));
        EXPECT_EQ(pa.transpose(), ZeroOneMatrix::from_permutation(a.inverse()));
        EXPECT_TRUE(kron(pa, ZeroOneMatrix::from_permutation(b)).is_permutation_matrix());
    }
}

TEST(Kronecker, EquivalentToTheGroupEquation)
{
    Rng rng(6);
    EXPECT_TRUE(check_kronecker_equivalence(cyc(3, {{1, 2}}), cyc(3, {{2, 3}}), Permutation(3), 0, 0));
    for (int t = 0; t < 100; ++t) {
        const auto a1 = random_permutation(4, rng), a2 = random_permutation(4, rng);
        const auto a = rng.coin() ? a1.pow(BigInt(rng.below(12))) * a2.pow(BigInt(rng.below(12))) : random_permutation(4, rng);
        ASSERT_TRUE(kronecker_factors_commute(a1, a2));
        for (BigInt x1 = 0; x1 < a1.order(); ++x1)
            for (BigInt x2 = 0; x2 < a2.order(); ++x2)
                ASSERT_EQ(check_kronecker_equivalence(a1, a2, a, x1, x2), a1.pow(x1) * a2.pow(x2) == a);
    }
}

} // namespace
} // namespace grpmem
