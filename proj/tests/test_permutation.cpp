#include <gtest/gtest.h>

#include "grpmem/permutation.hpp"
#include "grpmem/random.hpp"
#include "oracles.hpp"

namespace grpmem {
namespace {

Permutation P(const char* s, std::size_t m) { return parse_permutation(s, m); }

TEST(Permutation, ComposeIsLeftToRight)
{
    EXPECT_EQ(P("(1 2 3)", 3) * P("(1 2)", 3), P("(2 3)", 3));
    EXPECT_EQ(Permutation(4) * P("(1 4)", 4), P("(1 4)", 4));
}

TEST(Permutation, ProductOfStandardCycles)
{
    auto c3 = Permutation::standard_cycle(3, 5);
    auto c5 = Permutation::standard_cycle(5, 5);
    EXPECT_EQ(compose(c3, c5), P("(1 3 2 4 5)", 5));
}

TEST(Permutation, ComposeRejectsDegreeMismatch)
{
    EXPECT_THROW(Permutation(3) * Permutation(4), input_error);
}

TEST(Permutation, Inverse)
{
    EXPECT_EQ(Permutation(5).inverse(), Permutation(5));
    EXPECT_EQ(P("(1 2 3)", 3).inverse(), P("(1 3 2)", 3));
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        auto a = random_permutation(8, rng);
        EXPECT_TRUE((a * a.inverse()).is_identity());
        EXPECT_TRUE((a.inverse() * a).is_identity());
    }
}

TEST(Permutation, PowerAndOrder)
{
    auto c5 = Permutation::standard_cycle(5, 5);
    EXPECT_TRUE(c5.pow(0).is_identity());
    EXPECT_TRUE(c5.pow(5).is_identity());
    EXPECT_EQ(c5.pow(7), c5 * c5);
    EXPECT_EQ(c5.pow(-1), c5.inverse());
    EXPECT_EQ(Permutation(4).order(), 1);
    EXPECT_EQ(P("(1 2)(3 4 5)", 5).order(), 6);
    for (std::size_t p = 1; p <= 13; ++p) EXPECT_EQ(Permutation::standard_cycle(p, 13).order(), p);
}

TEST(Permutation, HugeExponentsReduceByCycle)
{
    auto a = P("(1 2)(3 4 5)(6 7 8 9 10)", 10);
    BigInt e = BigInt(1) << 200;
    EXPECT_EQ(a.pow(e), a.pow(static_cast<long long>(mod_u64(e, 30))));
}

TEST(Permutation, OrderExceeds64Bits)
{
    // Disjoint cycles of the first 20 primes: degree 639, order = their product.
    std::vector<std::vector<Point>> cycles;
    BigInt expected = 1;
    Point next = 1;
    int found = 0;
    for (Point n = 2; found < 20; ++n) {
        bool prime = true;
        for (Point d = 2; d * d <= n; ++d) prime = prime && n % d != 0;
        if (!prime) continue;
        std::vector<Point> c;
        for (Point k = 0; k < n; ++k) c.push_back(next++);
        cycles.push_back(c);
        expected *= n;
        ++found;
    }
    auto a = Permutation::from_cycles(next - 1, cycles);
    EXPECT_EQ(a.order(), expected);
    EXPECT_GT(a.order(), BigInt(std::numeric_limits<std::uint64_t>::max()));
}

TEST(Permutation, PowerMatchesRepeatedProduct)
{
    Rng rng(5);
    for (int t = 0; t < 40; ++t) {
        auto a = random_permutation(7, rng);
        Permutation acc(7);
        for (long long e = 0; e < 30; ++e) {
            EXPECT_EQ(a.pow(e), acc);
            EXPECT_EQ(a.pow(e), a.pow(static_cast<long long>(e % a.order().convert_to<long long>())));
            acc = acc * a;
        }
    }
}

TEST(Permutation, Associativity)
{
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        auto a = random_permutation(6, rng), b = random_permutation(6, rng), c = random_permutation(6, rng);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * b, oracle::evaluate(6, {a, b}));
    }
}

TEST(CycleNotation, ParseAndPrint)
{
    EXPECT_EQ(P("()", 4), Permutation(4));
    EXPECT_EQ(P("(1,3,5)", 5).to_string(), "(1 3 5)");
    EXPECT_EQ(P(" (4 5)(1 2 3) ", 5).to_string(), "(1 2 3)(4 5)");
    EXPECT_EQ(P("(1)(2)", 3), Permutation(3));
    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
        auto a = random_permutation(9, rng);
        EXPECT_EQ(P(a.to_string().c_str(), 9), a);
    }
}

TEST(CycleNotation, RejectsMalformed)
{
    EXPECT_THROW(P("(1 2", 3), input_error);
    EXPECT_THROW(P("(1 4)", 3), input_error);
    EXPECT_THROW(P("(0 1)", 3), input_error);
    EXPECT_THROW(P("(1 2)(2 3)", 3), input_error);
    EXPECT_THROW(P("1 2", 3), input_error);
    EXPECT_THROW(P("", 3), input_error);
    EXPECT_THROW(P("(a)", 3), input_error);
}

TEST(Permutation, DirectSumAndRestrict)
{
    auto a = P("(1 2)", 3), b = P("(1 2 3)", 3);
    auto s = a.direct_sum(b);
    EXPECT_EQ(s, P("(1 2)(4 5 6)", 6));
    EXPECT_EQ(s.restrict(3, 3), b);
    EXPECT_EQ(s.restrict(0, 3), a);
    EXPECT_THROW(P("(1 4)", 6).restrict(0, 3), input_error);
}

} // namespace
} // namespace grpmem
