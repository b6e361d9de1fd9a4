#pragma once

// Intersection non-emptiness for one context-free grammar and several group
// DFAs, and its two-way translation to context-free membership in S_m.

#include <algorithm>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "grpmem/automata.hpp"
#include "grpmem/cf_membership.hpp"
#include "grpmem/cfg.hpp"
#include "grpmem/element_set.hpp"
#include "grpmem/errors.hpp"
#include "grpmem/permutation.hpp"

namespace grpmem {

using LetterCfg = Cfg<std::string>;

namespace detail {

inline void check_shared_alphabet(const std::vector<Dfa>& dfas, const LetterCfg& g)
{
    for (const auto& d : dfas) {
        d.validate();
        auto a = d.letters, b = dfas.front().letters;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        detail::require(a == b, "DFAs must share one alphabet");
    }
    if (dfas.empty()) return;
    for (const auto& t : g.terminals()) dfas.front().letter_index(t);
}

} // namespace detail

/// pi(initial_i) must be a final state of DFA i, for every i. States are
/// numbered DFA by DFA in input order.
struct AcceptancePredicate {
    std::vector<std::size_t> initial;
    std::vector<std::vector<bool>> final; // over all |Q| states, one row per DFA

    bool operator()(const Permutation& pi) const
    {
        for (std::size_t i = 0; i < initial.size(); ++i)
            if (!final[i][pi[static_cast<Point>(initial[i])]]) return false;
        return true;
    }
};

struct IntersectionAsCfm {
    Cfg<Permutation> grammar; // over S_Q
    AcceptancePredicate accepts;
    std::vector<std::size_t> offsets;
    std::size_t degree = 0;
};

/// Letter a becomes the permutation pi_a of the disjoint union of the state
/// sets. Throws input_error for a DFA that is not a group DFA.
inline IntersectionAsCfm reduce_intersection_to_cfm(const std::vector<Dfa>& dfas, const LetterCfg& g)
{
    detail::check_shared_alphabet(dfas, g);
    IntersectionAsCfm out;
    for (const auto& d : dfas) {
        detail::require(is_group_dfa(d), "DFA is not a group DFA");
        out.offsets.push_back(out.degree);
        out.degree += d.states;
    }
    for (std::size_t i = 0; i < dfas.size(); ++i) {
        out.accepts.initial.push_back(out.offsets[i] + dfas[i].initial);
        std::vector<bool> fin(out.degree, false);
        for (std::size_t q = 0; q < dfas[i].states; ++q) fin[out.offsets[i] + q] = dfas[i].final[q];
        out.accepts.final.push_back(std::move(fin));
    }
    auto pi = [&](const std::string& a) {
        std::vector<Point> img(out.degree);
        for (std::size_t i = 0; i < dfas.size(); ++i) {
            const auto k = dfas[i].letter_index(a);
            for (std::size_t q = 0; q < dfas[i].states; ++q)
                img[out.offsets[i] + q] = static_cast<Point>(out.offsets[i] + dfas[i].delta[q][k]);
        }
        return Permutation::from_images(std::move(img));
    };
    out.grammar = g.map_terminals(pi);
    out.grammar.set_degree(out.degree);
    return out;
}

/// Decides the reduced instance by computing the evaluated language of the
/// start symbol and testing the predicate on each element.
inline bool decide_reduced_intersection(const IntersectionAsCfm& r)
{
    detail::require(r.degree <= max_dense_degree,
                    "reduced instance has more than " + std::to_string(max_dense_degree) + " states");
    if (r.grammar.nonterminal_count() == 0) return false;
    CfmOptions opt;
    opt.max_degree = max_dense_degree;
    if (r.degree == 0) return !cfg_emptiness(r.grammar).empty;
    const auto langs = oracle_semantics(r.grammar, opt);
    bool found = false;
    langs[r.grammar.start()].for_each_rank([&](std::uint64_t rank) {
        if (!found && r.accepts(lehmer_unrank(rank, r.degree))) found = true;
    });
    return found;
}

struct CfmAsIntersection {
    LetterCfg grammar;
    std::vector<Dfa> dfas;
    std::vector<Permutation> letter_values; // letter a_{i+1} stands for letter_values[i]
};

/// Each distinct terminal pi_i becomes a letter a_i; DFA A_j (j = 1..m) has
/// states 1..m, initial and final state j, and delta(q, a_i) = q^{pi_i}.
inline CfmAsIntersection reduce_cfm_to_intersection(const Cfg<Permutation>& g)
{
    CfmAsIntersection out;
    const std::size_t m = grammar_degree(g);
    std::unordered_map<Permutation, std::string> letter;
    for (const auto& t : g.terminals()) {
        if (letter.contains(t)) continue;
        letter.emplace(t, "a" + std::to_string(out.letter_values.size() + 1));
        out.letter_values.push_back(t);
    }
    out.grammar = g.map_terminals([&](const Permutation& t) { return letter.at(t); });
    Dfa shared;
    shared.states = m;
    for (std::size_t i = 0; i < out.letter_values.size(); ++i) shared.letters.push_back("a" + std::to_string(i + 1));
    shared.delta.assign(m, std::vector<std::size_t>(out.letter_values.size()));
    for (std::size_t i = 0; i < out.letter_values.size(); ++i)
        for (std::size_t q = 0; q < m; ++q) shared.delta[q][i] = out.letter_values[i][static_cast<Point>(q)];
    for (std::size_t j = 0; j < m; ++j) {
        Dfa d = shared;
        d.initial = j;
        d.final.assign(m, false);
        d.final[j] = true;
        out.dfas.push_back(std::move(d));
    }
    return out;
}

struct BarHillelOptions {
    std::uint64_t max_product_states = 512;
};

/// Ground truth by the product construction: for each nonterminal A the set
/// of product-state pairs (p, q) such that some word derived from A leads
/// from p to q in every DFA at once.
inline bool barhillel_oracle(const std::vector<Dfa>& dfas, const LetterCfg& g, const BarHillelOptions& opt = {})
{
    detail::check_shared_alphabet(dfas, g);
    if (g.nonterminal_count() == 0) return false;
    std::uint64_t states = 1;
    for (const auto& d : dfas) {
        states *= d.states;
        if (states > opt.max_product_states) throw cap_exceeded("product automaton exceeds its state cap");
    }
    const std::size_t P = states;
    // product state <-> mixed-radix tuple
    auto step = [&](std::size_t p, const std::string& a) {
        std::size_t out = 0, mul = 1;
        for (const auto& d : dfas) {
            const auto q = p % d.states;
            p /= d.states;
            out += d.delta[q][d.letter_index(a)] * mul;
            mul *= d.states;
        }
        return out;
    };
    std::size_t start_state = 0;
    {
        std::size_t mul = 1;
        for (const auto& d : dfas) {
            start_state += d.initial * mul;
            mul *= d.states;
        }
    }
    auto accepting = [&](std::size_t p) {
        for (const auto& d : dfas) {
            if (!d.final[p % d.states]) return false;
            p /= d.states;
        }
        return true;
    };

    const std::size_t n = g.nonterminal_count();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(P * P, false));
    for (const auto& pr : g.productions()) {
        if (pr.is_binary()) continue;
        for (std::size_t p = 0; p < P; ++p) reach[pr.lhs][p * P + step(p, g.terminal_of(pr))] = true;
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& pr : g.productions()) {
            if (!pr.is_binary()) continue;
            const auto& L = reach[pr.left];
            const auto& R = reach[pr.right];
            auto& out = reach[pr.lhs];
            for (std::size_t p = 0; p < P; ++p)
                for (std::size_t q = 0; q < P; ++q) {
                    if (!L[p * P + q]) continue;
                    for (std::size_t r = 0; r < P; ++r)
                        if (R[q * P + r] && !out[p * P + r]) {
                            out[p * P + r] = true;
                            changed = true;
                        }
                }
        }
    }
    const auto& top = reach[g.start()];
    for (std::size_t f = 0; f < P; ++f)
        if (top[start_state * P + f] && accepting(f)) return true;
    return false;
}

} // namespace grpmem
