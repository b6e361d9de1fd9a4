// Acceptance run: one line per criterion, each with its own time limit.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "grpmem/blackbox.hpp"
#include "grpmem/bsgs.hpp"
#include "grpmem/cf_membership.hpp"
#include "grpmem/generate.hpp"
#include "grpmem/intersection.hpp"
#include "grpmem/knapsack.hpp"
#include "grpmem/rational.hpp"
#include "grpmem/reductions.hpp"
#include "grpmem/tree.hpp"
#include "oracles.hpp"

namespace {

using namespace grpmem;
using oracle::PermSet;

// Collects the first few failures of a criterion.
struct Outcome {
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::string first;

    void expect(bool ok, const std::string& what)
    {
        ++checks;
        if (ok) return;
        if (failures++ == 0) first = what;
    }
};

std::string str(std::size_t x) { return std::to_string(x); }

std::vector<Permutation> all_perms(std::size_t m)
{
    std::vector<Permutation> out;
    for (std::uint64_t r = 0; r < factorial(m); ++r) out.push_back(lehmer_unrank(r, m));
    return out;
}

bool single_cycle_of_length(const Permutation& x, std::size_t len)
{
    if (x.degree() != len) return false;
    std::size_t orbit = 1;
    for (Point y = x[0]; y != 0; y = x[y]) ++orbit;
    return orbit == len;
}

// Least fixpoint of L(A) = {x : A -> x} u L(B) L(C), on plain sets.
std::vector<PermSet> kleene(const Cfg<Permutation>& g)
{
    std::vector<PermSet> l(g.nonterminal_count());
    for (const auto& p : g.productions())
        if (!p.is_binary()) l[p.lhs].insert(g.terminal_of(p));
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& p : g.productions()) {
            if (!p.is_binary()) continue;
            std::vector<Permutation> fresh;
            for (const auto& x : l[p.left])
                for (const auto& y : l[p.right]) {
                    auto z = x * y;
                    if (!l[p.lhs].contains(z)) fresh.push_back(std::move(z));
                }
            for (auto& z : fresh) changed |= l[p.lhs].insert(std::move(z)).second;
        }
    }
    return l;
}

Cfg<Permutation> random_perm_cfg(Rng& rng, std::size_t m, std::size_t n, std::size_t productions)
{
    auto g = gen::random_cfg<Permutation>(rng, n, productions, [m](Rng& r) {
        return r.coin(1, 3) ? oracle::random_sparse(m, r) : random_permutation(m, r);
    });
    g.set_degree(m);
    return g;
}

void cycle_products(Outcome& out)
{
    const std::vector<std::size_t> primes{3, 5, 7, 11, 13};
    for (auto p : primes)
        for (auto q : primes) {
            if (q >= p) continue;
            const auto cp = Permutation::standard_cycle(p, p), cq = Permutation::standard_cycle(q, p);
            const std::string at = "p=" + str(p) + " q=" + str(q);
            out.expect(single_cycle_of_length(cp * cq, p), "[p][q] not a p-cycle at " + at);
            out.expect(single_cycle_of_length(cq * cp, p), "[q][p] not a p-cycle at " + at);
            out.expect(cycle_product_form(p, q) == cq * cp, "explicit form differs at " + at);
        }
}

void two_cycle_sweep(Outcome& out)
{
    const std::vector<std::pair<std::size_t, std::size_t>> pairs{{3, 5}, {3, 7}, {5, 7}, {5, 11}};
    for (auto [q, p] : pairs)
        // exponents of [q] live mod q, those of [p] and [p][q] mod p
        for (std::size_t x1 = 0; x1 < q; ++x1)
            for (std::size_t x2 = 0; x2 < p; ++x2) {
                const bool expected = (x1 == 1 && x2 == 0) || (x1 == 0 && x2 == 1);
                out.expect(two_cycle_equation(p, q, x1, x2) == expected,
                           "q=" + str(q) + " p=" + str(p) + " x=(" + str(x1) + "," + str(x2) + ")");
            }
}

void fixed_point_suite(Outcome& out)
{
    Rng rng(1003);
    for (std::size_t m : {4u, 5u}) {
        const auto targets = all_perms(m);
        const int count = m == 4 ? 200 : 50;
        for (int t = 0; t < count; ++t) {
            const std::size_t n = 1 + rng.below(3);
            auto g = random_perm_cfg(rng, m, n, 1 + rng.below(6));
            const std::string at = "S" + str(m) + " grammar " + str(t);
            const auto fp = fixed_point(g);
            out.expect(fp.iterations <= fixed_point_bound(n, m), "iteration bound exceeded, " + at);
            const auto truth = kleene(g);
            for (std::size_t a = 0; a < n; ++a) {
                bool same = fp.languages[a].size() == truth[a].size();
                for (const auto& x : truth[a]) same = same && fp.languages[a].contains(x);
                out.expect(same, "language of nonterminal " + str(a) + " differs, " + at);
            }
            for (const auto& x : targets)
                out.expect(cf_membership(g, x).member == truth[g.start()].contains(x),
                           "membership of " + x.to_string() + " differs, " + at);
        }
    }
}

void spanning_tree_suite(Outcome& out)
{
    Rng rng(1004);
    for (int t = 0; t < 300; ++t) {
        const std::size_t m = t % 2 ? 5 : 4;
        auto a = gen::random_group_nfa(rng, m, 1 + rng.below(4), 1 + rng.below(6), true);
        const std::string at = "automaton " + str(t);
        const auto group = accepted_subgroup(a);
        const auto truth = oracle::nfa_language(a);
        out.expect(group.order() == truth.size(), "order differs, " + at);
        for (const auto& x : all_perms(m))
            out.expect(group.contains(x) == truth.contains(x), "membership of " + x.to_string() + " differs, " + at);
    }
}

bool exact_hitting_set_exists(const X3hsInstance& inst)
{
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inst.n); ++mask) {
        bool ok = true;
        for (const auto& c : inst.sets) {
            std::size_t k = 0;
            for (auto x : c) k += mask >> x & 1;
            ok = ok && k == 1;
        }
        if (ok) return true;
    }
    return false;
}

void x3hs_chain_suite(Outcome& out)
{
    for (std::size_t n = 3; n <= 5; ++n) {
        std::vector<std::array<std::size_t, 3>> triples;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                for (std::size_t c = b + 1; c < n; ++c) triples.push_back({a, b, c});
        // every sequence of at most three triples
        std::vector<std::vector<std::size_t>> families{{}};
        for (std::size_t len = 1; len <= 3; ++len) {
            std::vector<std::size_t> idx(len, 0);
            for (;;) {
                families.push_back(idx);
                std::size_t k = 0;
                while (k < len && ++idx[k] == triples.size()) idx[k++] = 0;
                if (k == len) break;
            }
        }
        for (const auto& f : families) {
            X3hsInstance inst{n, {}};
            for (auto i : f) inst.sets.push_back(triples[i]);
            const bool direct = exact_hitting_set_exists(inst);
            const auto z3 = reduce_x3hs_to_subsetsum_z3(inst);
            const bool additive = solve_z3_subset_sum(z3).has_value();
            const bool perm =
                solve_subset_sum(embed_z3_subset_sum(z3), SubsetSumMethod::exhaustive).exponents.has_value();
            std::ostringstream at;
            at << "n=" << n << " family";
            for (auto i : f) at << " " << i;
            out.expect(direct == additive, "Z3 subset sum differs, " + at.str());
            out.expect(direct == perm, "permutation subset sum differs, " + at.str());
            out.expect(direct == solve_x3hs(inst).has_value(), "solve_x3hs differs, " + at.str());
        }
    }
}

void three_knapsack_completeness(Outcome& out)
{
    Rng rng(1006);
    for (int t = 0; t < 30; ++t) {
        const std::size_t m = 3 + rng.below(2), d = 1 + rng.below(2);
        auto inst = gen::planted_x3hs(rng, m, d);
        const auto subset = solve_x3hs(inst);
        out.expect(subset.has_value(), "planted instance " + str(t) + " has no hitting set");
        if (!subset) continue;
        std::vector<bool> chosen(m, false);
        for (auto x : *subset) chosen[x] = true;
        auto red = reduce_x3hs_to_3knapsack(inst);
        const auto z = red.exponents_from(chosen);
        out.expect(red.g1.pow(z[0]) * red.g2.pow(z[1]) * red.g3.pow(z[2]) == red.g,
                   "CRT exponents fail on planted instance " + str(t));
    }
}

void three_knapsack_soundness(Outcome& out)
{
    // one element, the triple (1,1,1): primes (p, r, q) = (7, 3, 5)
    auto red = reduce_alpha_to_3knapsack(1, {{0, 0, 0}});
    out.expect(red.p[0] == 7 && red.r[0] == 3 && red.q[0] == 5, "unexpected primes");
    const bool hitting = solve_x3hs(X3hsInstance{1, {{0, 0, 0}}}, true).has_value();
    const std::uint64_t period = 105;
    std::vector<Permutation> p1, p2, p3;
    for (std::uint64_t z = 0; z < period; ++z) {
        p1.push_back(red.g1.pow(BigInt(z)));
        p2.push_back(red.g2.pow(BigInt(z)));
        p3.push_back(red.g3.pow(BigInt(z)));
    }
    std::size_t solutions = 0;
    for (std::uint64_t a = 0; a < period; ++a)
        for (std::uint64_t b = 0; b < period; ++b) {
            const auto ab = p1[a] * p2[b];
            for (std::uint64_t c = 0; c < period; ++c) solutions += (ab * p3[c] == red.g);
        }
    out.expect((solutions > 0) == hitting, str(solutions) + " solutions in [0,105)^3");
    for (bool s : {false, true})
        out.expect(!red.verify(red.exponents_from({s})), "assignment " + str(s) + " verifies");
}

void two_knapsack_suite(Outcome& out)
{
    Rng rng(1007);
    const std::size_t m = 6;
    std::size_t perturbed = 0;
    for (int t = 0; t < 500; ++t) {
        const auto a1 = random_permutation(m, rng), a2 = random_permutation(m, rng);
        const auto a = t % 2 ? random_permutation(m, rng)
                             : a1.pow(BigInt(rng.below(12))) * a2.pow(BigInt(rng.below(12)));
        const std::string at = "triple " + str(t);
        out.expect(kronecker_factors_commute(a1, a2), "Kronecker factors do not commute, " + at);
        const auto fast = solve_2_knapsack(a1, a2, a);
        const auto general = solve_knapsack(KnapsackInstance{m, a, {a1, a2}, ExponentDomain::natural, 2});
        out.expect(fast.has_value() == general.exponents.has_value(), "answers differ, " + at);
        if (fast) {
            out.expect(a1.pow(fast->first) * a2.pow(fast->second) == a, "wrong exponents, " + at);
            out.expect(check_kronecker_equivalence(a1, a2, a, fast->first, fast->second),
                       "Kronecker check fails on a solution, " + at);
        }
        // a non-solution near the solution, or anywhere for no-instances
        for (int tries = 0; tries < 20; ++tries) {
            const BigInt x1 = (fast ? fast->first : BigInt(0)) + rng.below(13);
            const BigInt x2 = (fast ? fast->second : BigInt(0)) + rng.below(13);
            if (a1.pow(x1) * a2.pow(x2) == a) continue;
            ++perturbed;
            out.expect(!check_kronecker_equivalence(a1, a2, a, x1, x2), "Kronecker check holds off a solution, " + at);
            break;
        }
    }
    out.expect(perturbed >= 500, "only " + str(perturbed) + " perturbed non-solutions");
}

void cfg_k_suite(Outcome& out)
{
    Rng rng(1008);
    const auto sigma = gen::letters(2);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng.below(4);
        auto g = gen::random_cfg<std::string>(rng, n, 2 + rng.below(9),
                                              [&](Rng& r) { return sigma[r.below(2)]; }, 1, 4);
        const std::string at = "grammar " + str(t);
        std::optional<std::size_t> top;
        for (const auto& tree : oracle::acyclic_trees(g)) {
            const auto hs = horton_strahler(tree);
            top = top ? std::max(*top, hs) : hs;
            out.expect(tree.leaf_count() <= strahler_leaf_bound(tree.levels(), hs), "leaf bound fails, " + at);
        }
        for (std::size_t k = 1; k <= 3; ++k)
            out.expect(check_cfg_k(g, k) == (!top || *top <= k), "k=" + str(k) + " differs, " + at);
    }
}

void reduce_generators_suite(Outcome& out)
{
    Rng rng(1009);
    for (int t = 0; t < 200; ++t) {
        std::vector<Permutation> gens;
        const std::size_t count = 1 + rng.below(12);
        for (std::size_t i = 0; i < count; ++i)
            gens.push_back(rng.coin() ? oracle::random_sparse(6, rng) : random_permutation(6, rng));
        const std::string at = "set " + str(t);
        const auto kept = reduce_generators(gens);
        const auto order = oracle::closure(6, gens).size();
        out.expect(kept.size() <= floor_log2(BigInt(order)) && kept.size() <= 9, "too many generators, " + at);
        out.expect(oracle::closure(6, kept).size() == order, "order changed, " + at);
        out.expect(schreier_sims(gens).order() == order, "stabilizer chain order differs, " + at);
    }
}

std::vector<BitString> all_strings(std::size_t len)
{
    std::vector<BitString> out;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << len); ++code) {
        BitString x(len);
        for (std::size_t i = 0; i < len; ++i) x[i] = code >> i & 1;
        out.push_back(std::move(x));
    }
    return out;
}

void blackbox_suite(Outcome& out)
{
    for (std::size_t m = 1; m <= 4; ++m)
        for (bool redundant : {false, true}) {
            PermutationBlackBox box(m, redundant);
            const std::string at = "m=" + str(m) + (redundant ? " redundant" : "");
            std::vector<std::pair<BitString, Permutation>> valid;
            for (const auto& x : all_strings(box.code_length())) {
                // direct decoding: m fields that form a permutation
                std::size_t w = 0;
                while ((std::size_t{1} << w) < m) ++w;
                std::vector<Point> img;
                std::set<std::size_t> seen;
                for (std::size_t i = 0; i < m; ++i) {
                    std::size_t v = 0;
                    for (std::size_t b = 0; b < w; ++b) v |= static_cast<std::size_t>(x[i * w + b]) << b;
                    img.push_back(static_cast<Point>(v));
                    seen.insert(v);
                }
                const bool ok = seen.size() == m && *seen.rbegin() < m;
                out.expect(box.valid(x) == ok, "validity differs, " + at);
                if (ok) valid.emplace_back(x, Permutation::from_images(img));
            }
            out.expect(valid.size() == factorial(m) * box.names_per_element(), "wrong number of names, " + at);
            for (const auto& [x, a] : valid) {
                out.expect(bb_is_identity(box, x) == a.is_identity(), "identity test differs, " + at);
                out.expect(box.decode(box.inv(x)) == a.inverse(), "inverse differs, " + at);
                for (const auto& [y, b] : valid) {
                    out.expect(box.decode(box.prod(x, y)) == a * b, "product differs, " + at);
                    out.expect(bb_equal(box, x, y) == (a == b), "equality differs, " + at);
                }
            }
        }

    Rng rng(1011);
    std::size_t mutations = 0;
    for (int t = 0; t < 200; ++t) {
        PermutationBlackBox box(5, t % 2 == 1);
        const auto gens = oracle::random_generators(5, 1 + rng.below(3), rng);
        Bsgs group(5, gens);
        const auto elements = group.elements();
        const auto& a = elements[rng.below(elements.size())];
        const auto proof = bb_certify(box, group, a);
        const auto target = box.encode(a, rng.next());
        const std::string at = "certificate " + str(t);
        out.expect(proof.certificate.program.size() <= bb_certificate_limit(box), "certificate too large, " + at);
        out.expect(bb_subgroup_verify(box, target, proof.generators, proof.certificate), "rejected, " + at);

        const auto& steps = proof.certificate.program.steps;
        const auto value = eval_slp(proof.certificate.program, group.strong_generators(), 5);
        auto try_mutation = [&](const BbCertificate& bad) {
            if (eval_slp(bad.program, group.strong_generators(), 5) == value) return;
            ++mutations;
            out.expect(!bb_subgroup_verify(box, target, proof.generators, bad), "mutation accepted, " + at);
        };
        // change one field of one step in every possible way
        for (std::size_t i = 0; i < steps.size(); ++i) {
            if (steps[i].kind == SlpStep::Kind::generator) {
                for (std::size_t j = 0; j < proof.generators.size(); ++j) {
                    if (j == steps[i].left) continue;
                    auto bad = proof.certificate;
                    bad.program.steps[i].left = j;
                    try_mutation(bad);
                }
                continue;
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (j != steps[i].left) {
                    auto bad = proof.certificate;
                    bad.program.steps[i].left = j;
                    try_mutation(bad);
                }
                if (j != steps[i].right) {
                    auto bad = proof.certificate;
                    bad.program.steps[i].right = j;
                    try_mutation(bad);
                }
            }
            auto bad = proof.certificate;
            std::swap(bad.program.steps[i].left, bad.program.steps[i].right);
            try_mutation(bad);
        }
    }
    out.expect(mutations >= 200, "only " + str(mutations) + " value-changing mutations");
}

Dfa random_group_dfa(Rng& rng, const std::vector<std::string>& sigma)
{
    return gen::random_dfa(rng, 1 + rng.below(3), sigma, true);
}

void intersection_suite(Outcome& out)
{
    Rng rng(1010);
    for (int t = 0; t < 100; ++t) {
        const auto sigma = gen::letters(1 + rng.below(2));
        auto g = gen::random_cfg<std::string>(rng, 1 + rng.below(3), 2 + rng.below(5),
                                              [&](Rng& r) { return sigma[r.below(sigma.size())]; }, 1, 2);
        std::vector<Dfa> dfas;
        for (std::size_t i = rng.below(4); i > 0; --i) dfas.push_back(random_group_dfa(rng, sigma));
        const bool truth = barhillel_oracle(dfas, g);
        out.expect(decide_reduced_intersection(reduce_intersection_to_cfm(dfas, g)) == truth,
                   "intersection instance " + str(t));
    }
    for (int t = 0; t < 100; ++t) {
        const std::size_t m = 2 + rng.below(2);
        auto g = random_perm_cfg(rng, m, 1 + rng.below(3), 2 + rng.below(5));
        const auto there = reduce_cfm_to_intersection(g);
        const bool truth = barhillel_oracle(there.dfas, there.grammar);
        const std::string at = "membership instance " + str(t);
        out.expect(cf_membership(g, Permutation(m)).member == truth, "forward decision differs, " + at);
        const auto back = reduce_intersection_to_cfm(there.dfas, there.grammar);
        out.expect(decide_reduced_intersection(back) == truth, "round trip differs, " + at);
    }
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<void(Outcome&)> run;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "cycle products [p][q], [q][p]", 1, cycle_products},
        {2, "two-cycle equation residues", 1, two_cycle_sweep},
        {3, "fixed point vs Kleene oracle", 600, fixed_point_suite},
        {4, "spanning-tree generators", 120, spanning_tree_suite},
        {5, "X3HS / Z3 / permutation subset sum", 120, x3hs_chain_suite},
        {6, "3-knapsack completeness", 120, three_knapsack_completeness},
        {6, "3-knapsack soundness at (7,3,5)", 600, three_knapsack_soundness},
        {7, "2-knapsack and Kronecker check", 180, two_knapsack_suite},
        {8, "CFG(k) vs tree enumeration", 300, cfg_k_suite},
        {9, "generator reduction", 30, reduce_generators_suite},
        {10, "intersection reductions", 300, intersection_suite},
        {11, "black-box oracles and certificates", 60, blackbox_suite},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome out;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(out);
        } catch (const std::exception& e) {
            out.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.limit_s;
        const bool ok = out.failures == 0 && in_time;
        failed += !ok;
        std::printf("[%s] %2d %-38s %8zu checks %9.3f s (limit %g s)", ok ? "PASS" : "FAIL", c.id, c.name, out.checks,
                    secs, c.limit_s);
        if (out.failures) std::printf("  %zu failures, first: %s", out.failures, out.first.c_str());
        if (!in_time) std::printf("  over time");
        std::printf("\n");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
