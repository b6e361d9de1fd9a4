#include <gtest/gtest.h>

#include "grpmem/blackbox.hpp"
#include "grpmem/bsgs.hpp"
#include "grpmem/random.hpp"
#include "oracles.hpp"

namespace grpmem {
namespace {

std::vector<BitString> all_strings(std::size_t b)
{
    std::vector<BitString> out;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << b); ++v) {
        BitString x(b);
        for (std::size_t k = 0; k < b; ++k) x[k] = (v >> k) & 1;
        out.push_back(x);
    }
    return out;
}

TEST(PermutationBox, CodeLength)
{
    EXPECT_EQ(PermutationBlackBox(4).code_length(), 8u);
    EXPECT_EQ(PermutationBlackBox(5).code_length(), 15u);
    EXPECT_EQ(PermutationBlackBox(5, true).code_length(), 18u);
    EXPECT_EQ(PermutationBlackBox(1).code_length(), 0u);
    EXPECT_EQ(PermutationBlackBox(4, true).names_per_element(), 4u);
}

// Every valid string must decode to a permutation; oracles must agree with
// the permutation arithmetic on all pairs of valid strings.
TEST(PermutationBox, OraclesAreSoundExhaustively)
{
    for (std::size_t m = 1; m <= 4; ++m) {
        for (bool redundant : {false, true}) {
            PermutationBlackBox box(m, redundant);
            std::vector<std::pair<BitString, Permutation>> valid;
            for (const auto& x : all_strings(box.code_length())) {
                const auto a = box.decode(x);
                ASSERT_EQ(box.valid(x), a.has_value());
                if (a) valid.emplace_back(x, *a);
            }
            std::size_t factorial = 1;
            for (std::size_t i = 2; i <= m; ++i) factorial *= i;
            ASSERT_EQ(valid.size(), factorial * box.names_per_element()) << "m=" << m;
            for (const auto& [x, a] : valid) {
                EXPECT_EQ(bb_is_identity(box, x), a.is_identity());
                EXPECT_EQ(box.decode(box.inv(x)), a.inverse());
                for (const auto& [y, b] : valid) {
                    const auto xy = box.prod(x, y);
                    ASSERT_TRUE(box.valid(xy));
                    ASSERT_EQ(box.decode(xy), a * b);
                    ASSERT_EQ(bb_equal(box, x, y), a == b);
                }
            }
        }
    }
}

TEST(PermutationBox, RedundantNamesDiffer)
{
    PermutationBlackBox box(5, true);
    auto a = Permutation::from_cycles(5, {{1, 2, 3}});
    auto x = box.encode(a, 0), y = box.encode(a, 3);
    EXPECT_NE(x, y);
    EXPECT_TRUE(bb_equal(box, x, y));
    EXPECT_NE(box.prod(x, box.encode(Permutation(5))), x);
}

TEST(CountingBox, CountsCalls)
{
    PermutationBlackBox inner(3);
    CountingBlackBox box(inner);
    auto x = inner.encode(Permutation::from_cycles(3, {{1, 2}}));
    bb_equal(box, x, x);
    EXPECT_EQ(box.calls(), 3u); // inv, prod, and id accepting the first witness
}

class Certificates : public ::testing::TestWithParam<bool> {};

TEST_P(Certificates, FactorCertificatesVerify)
{
    Rng rng(17);
    PermutationBlackBox box(5, GetParam());
    for (int t = 0; t < 200; ++t) {
        auto gens = oracle::random_generators(5, 1 + rng.below(3), rng);
        Bsgs group(5, gens);
        auto elements = group.elements();
        const auto& a = elements[rng.below(elements.size())];
        auto proof = bb_certify(box, group, a);
        ASSERT_LE(proof.certificate.program.size(), bb_certificate_limit(box));
        ASSERT_TRUE(bb_subgroup_verify(box, box.encode(a, rng.next()), proof.generators, proof.certificate));
    }
}

TEST_P(Certificates, MutationsAreRejected)
{
    Rng rng(23);
    PermutationBlackBox box(5, GetParam());
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        auto gens = oracle::random_generators(5, 2, rng);
        Bsgs group(5, gens);
        auto elements = group.elements();
        const auto& a = elements[rng.below(elements.size())];
        auto proof = bb_certify(box, group, a);
        auto& steps = proof.certificate.program.steps;
        if (steps.empty()) continue;
        // retarget a random generator step to another generator; keep only
        // mutations that change the program's value
        const std::size_t i = rng.below(steps.size());
        auto mutated = proof.certificate;
        auto& step = mutated.program.steps[i];
        if (step.kind == SlpStep::Kind::generator) {
            step.left = (step.left + 1 + rng.below(proof.generators.size())) % proof.generators.size();
        } else {
            std::swap(step.left, step.right);
        }
        const auto before = eval_slp(proof.certificate.program, group.strong_generators(), 5);
        const auto after = eval_slp(mutated.program, group.strong_generators(), 5);
        if (before == after) continue;
        ++checked;
        EXPECT_FALSE(bb_subgroup_verify(box, box.encode(a), proof.generators, mutated));
    }
    EXPECT_GT(checked, 50);
}

INSTANTIATE_TEST_SUITE_P(Box, Certificates, ::testing::Bool());

TEST(Certificates, MalformedProofsThrow)
{
    PermutationBlackBox box(3);
    const auto g = box.encode(Permutation::from_cycles(3, {{1, 2, 3}}));
    BbCertificate cert;
    cert.witness = {false};
    cert.program.steps.assign(bb_certificate_limit(box) + 1, SlpStep::gen(0));
    EXPECT_THROW(bb_subgroup_verify(box, g, {g}, cert), input_error);

    cert.program.steps = {SlpStep::gen(0)};
    cert.witness = {};
    EXPECT_THROW(bb_subgroup_verify(box, g, {g}, cert), input_error);

    cert.witness = {false};
    EXPECT_TRUE(bb_subgroup_verify(box, g, {g}, cert));
    cert.program.steps = {SlpStep::gen(1)};
    EXPECT_THROW(bb_subgroup_verify(box, g, {g}, cert), input_error);
    cert.program.steps = {SlpStep::mul(0, 0)};
    EXPECT_THROW(bb_subgroup_verify(box, g, {g}, cert), input_error);

    BitString bad(box.code_length(), true);
    cert.program.steps = {SlpStep::gen(0)};
    EXPECT_THROW(bb_subgroup_verify(box, bad, {g}, cert), input_error);

    // empty program names the identity
    cert.program.steps.clear();
    EXPECT_TRUE(bb_subgroup_verify(box, box.encode(Permutation(3)), {g}, cert));
    EXPECT_FALSE(bb_subgroup_verify(box, g, {g}, cert));
}

TEST(ExhaustiveDecide, AgreesWithStabilizerChain)
{
    Rng rng(41);
    PermutationBlackBox box(5, true);
    int yes = 0;
    for (int t = 0; t < 500; ++t) {
        std::vector<Permutation> gens;
        for (std::size_t i = 1 + rng.below(3); i > 0; --i) gens.push_back(oracle::random_sparse(5, rng));
        Bsgs group(5, gens);
        const auto target = random_permutation(5, rng);
        std::vector<BitString> boxed;
        for (const auto& g : gens) boxed.push_back(box.encode(g, rng.next()));
        BbClosureStats stats;
        const bool got = bb_exhaustive_decide(box, box.encode(target, rng.next()), boxed, 1000, &stats);
        ASSERT_EQ(got, group.contains(target)) << "trial " << t;
        if (!got) EXPECT_EQ(stats.elements, static_cast<std::size_t>(group.order()));
        yes += got;
    }
    EXPECT_GT(yes, 20);
    EXPECT_LT(yes, 480);
}

TEST(ExhaustiveDecide, CapIsEnforced)
{
    PermutationBlackBox box(6);
    std::vector<BitString> gens{box.encode(Permutation::standard_cycle(6, 6)),
                                box.encode(Permutation::from_cycles(6, {{1, 2}}))};
    EXPECT_THROW(bb_exhaustive_decide(box, box.encode(Permutation::from_cycles(6, {{5, 6}})), gens, 50),
                 cap_exceeded);
}

} // namespace
} // namespace grpmem
