#pragma once

// Seeded random instance generators shared by the CLI `gen` subcommand and
// the test suites.

#include <cstddef>
#include <string>
#include <vector>

#include "grpmem/automata.hpp"
#include "grpmem/cfg.hpp"
#include "grpmem/knapsack.hpp"
#include "grpmem/permutation.hpp"
#include "grpmem/random.hpp"
#include "grpmem/reductions.hpp"

namespace grpmem::gen {

inline std::string nonterminal_name(std::size_t i)
{
    if (i == 0) return "S";
    std::string s(1, static_cast<char>('A' + (i - 1) % 26));
    if (i > 26) s += std::to_string((i - 1) / 26);
    return s;
}

/// Random CNF grammar with `nonterminals` symbols (start = "S") and exactly
/// `productions` rules, a `terminal_share` fraction of them terminal rules.
template <typename Terminal, typename MakeTerminal>
Cfg<Terminal> random_cfg(Rng& rng, std::size_t nonterminals, std::size_t productions, MakeTerminal&& make_terminal,
                         std::uint64_t terminal_num = 1, std::uint64_t terminal_den = 3)
{
    Cfg<Terminal> g;
    for (std::size_t i = 0; i < nonterminals; ++i) g.add_nonterminal(nonterminal_name(i));
    g.set_start(0);
    for (std::size_t p = 0; p < productions; ++p) {
        const auto lhs = rng.below(nonterminals);
        if (rng.coin(terminal_num, terminal_den))
            g.add_terminal(lhs, make_terminal(rng));
        else
            g.add_binary(lhs, rng.below(nonterminals), rng.below(nonterminals));
    }
    return g;
}

inline std::vector<std::string> letters(std::size_t n)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(1, static_cast<char>('a' + i));
    return out;
}

inline Dfa random_dfa(Rng& rng, std::size_t states, const std::vector<std::string>& alphabet, bool group)
{
    Dfa d;
    d.states = states;
    d.letters = alphabet;
    d.delta.assign(states, std::vector<std::size_t>(alphabet.size()));
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
        if (group) {
            auto p = random_permutation(states, rng);
            for (std::size_t q = 0; q < states; ++q) d.delta[q][a] = p[static_cast<Point>(q)];
        } else {
            for (std::size_t q = 0; q < states; ++q) d.delta[q][a] = rng.below(states);
        }
    }
    d.initial = rng.below(states);
    d.final.assign(states, false);
    for (std::size_t q = 0; q < states; ++q) d.final[q] = rng.coin();
    return d;
}

/// Random group NFA. With `base_form` the automaton has one state serving
/// as both initial and final state (state 0).
inline GroupNfa random_group_nfa(Rng& rng, std::size_t degree, std::size_t states, std::size_t transitions,
                                 bool base_form)
{
    GroupNfa a;
    a.degree = degree;
    a.states = states;
    for (std::size_t t = 0; t < transitions; ++t)
        a.transitions.push_back({rng.below(states), random_permutation(degree, rng), rng.below(states)});
    if (base_form) {
        a.initial = {0};
        a.final = {0};
    } else {
        for (std::size_t q = 0; q < states; ++q) {
            if (rng.coin(1, 3)) a.initial.push_back(q);
            if (rng.coin(1, 3)) a.final.push_back(q);
        }
        if (a.initial.empty()) a.initial.push_back(0);
    }
    return a;
}

/// Knapsack instance whose target is a product of random powers of random
/// factors, so the answer is yes. Exponents are below `max_exponent` in the
/// natural domain and 0/1 in the binary one.
inline KnapsackInstance planted_knapsack(Rng& rng, std::size_t degree, std::size_t factors, ExponentDomain domain,
                                         std::uint64_t max_exponent = 8)
{
    KnapsackInstance k;
    k.degree = degree;
    k.domain = domain;
    std::vector<std::uint64_t> x;
    for (std::size_t i = 0; i < factors; ++i) {
        k.factors.push_back(random_permutation(degree, rng));
        x.push_back(domain == ExponentDomain::binary ? rng.below(2) : rng.below(max_exponent));
    }
    k.target = evaluate_exponents(k.factors, x, degree);
    return k;
}

/// Same shape as planted_knapsack with a uniformly random target.
inline KnapsackInstance random_knapsack(Rng& rng, std::size_t degree, std::size_t factors, ExponentDomain domain)
{
    KnapsackInstance k;
    k.degree = degree;
    k.domain = domain;
    for (std::size_t i = 0; i < factors; ++i) k.factors.push_back(random_permutation(degree, rng));
    k.target = random_permutation(degree, rng);
    return k;
}

/// X3HS instance with a planted solution: each set takes one member of a
/// hidden subset and two from its complement. Needs n >= 3.
inline X3hsInstance planted_x3hs(Rng& rng, std::size_t n, std::size_t sets)
{
    detail::require(n >= 3, "planted X3HS needs at least three elements");
    std::vector<std::size_t> in, out;
    for (std::size_t x = 0; x < n; ++x) (x == 0 || (x + 2 < n && rng.coin(1, 3)) ? in : out).push_back(x);
    // keep at least two outside
    while (out.size() < 2) {
        out.push_back(in.back());
        in.pop_back();
    }
    X3hsInstance inst;
    inst.n = n;
    for (std::size_t i = 0; i < sets; ++i) {
        const auto a = in[rng.below(in.size())];
        const auto b = rng.below(out.size());
        auto c = rng.below(out.size() - 1);
        if (c >= b) ++c;
        inst.sets.push_back({a, out[b], out[c]});
    }
    return inst;
}

/// X3HS instance with uniformly random triples of distinct elements.
inline X3hsInstance random_x3hs(Rng& rng, std::size_t n, std::size_t sets)
{
    detail::require(n >= 3, "X3HS needs at least three elements");
    X3hsInstance inst;
    inst.n = n;
    for (std::size_t i = 0; i < sets; ++i) {
        std::array<std::size_t, 3> c{};
        c[0] = rng.below(n);
        do c[1] = rng.below(n);
        while (c[1] == c[0]);
        do c[2] = rng.below(n);
        while (c[2] == c[0] || c[2] == c[1]);
        inst.sets.push_back(c);
    }
    return inst;
}

} // namespace grpmem::gen
