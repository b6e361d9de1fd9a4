#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "grpmem/errors.hpp"
#include "grpmem/permutation.hpp"

namespace grpmem {

/// Complete DFA over named letters. States are 0-based internally.
struct Dfa {
    std::size_t states = 0;
    std::vector<std::string> letters;
    std::vector<std::vector<std::size_t>> delta; // delta[state][letter]
    std::size_t initial = 0;
    std::vector<bool> final;

    std::size_t letter_index(const std::string& a) const
    {
        for (std::size_t i = 0; i < letters.size(); ++i)
            if (letters[i] == a) return i;
        throw input_error("letter '" + a + "' is not in the DFA alphabet");
    }

    void validate() const
    {
        detail::require(states >= 1, "DFA needs at least one state");
        detail::require(initial < states, "DFA initial state out of range");
        detail::require(final.size() == states, "DFA final-state table has the wrong size");
        detail::require(delta.size() == states, "DFA transition table has the wrong size");
        for (const auto& row : delta) {
            detail::require(row.size() == letters.size(), "DFA transition function is not total");
            for (std::size_t q : row) detail::require(q < states, "DFA transition target out of range");
        }
    }

    std::size_t run(std::size_t from, const std::vector<std::size_t>& word) const
    {
        for (std::size_t a : word) from = delta[from][a];
        return from;
    }

    bool accepts(const std::vector<std::size_t>& word) const { return final[run(initial, word)]; }
};

/// True iff every letter permutes the states.
///
/// If each letter acts bijectively, the transformation monoid is a
/// submonoid of the finite group S_Q and hence a subgroup. If some letter
/// is not injective, the monoid contains a non-invertible map; since a
/// transformation monoid always contains the identity map, and in a group
/// whose identity is the identity map every element is invertible, the
/// monoid cannot be a group.
inline bool is_group_dfa(const Dfa& d)
{
    for (std::size_t a = 0; a < d.letters.size(); ++a) {
        std::vector<bool> hit(d.states, false);
        for (std::size_t q = 0; q < d.states; ++q) {
            if (hit[d.delta[q][a]]) return false;
            hit[d.delta[q][a]] = true;
        }
    }
    return true;
}

/// The bijection q -> delta(q, a) as a permutation of {1..|Q|}.
inline Permutation letter_permutation(const Dfa& d, std::size_t letter)
{
    detail::require(letter < d.letters.size(), "letter index out of range");
    std::vector<Point> img(d.states);
    for (std::size_t q = 0; q < d.states; ++q) img[q] = static_cast<Point>(d.delta[q][letter]);
    try {
        return Permutation::from_images(std::move(img));
    } catch (const input_error&) {
        throw input_error("letter '" + d.letters[letter] + "' does not permute the states");
    }
}

/// NFA whose transition labels are permutations of a common degree.
struct GroupNfa {
    struct Transition {
        std::size_t from = 0;
        Permutation label;
        std::size_t to = 0;
    };

    std::size_t degree = 0;
    std::size_t states = 0;
    std::vector<Transition> transitions;
    std::vector<std::size_t> initial;
    std::vector<std::size_t> final;

    void validate() const
    {
        for (const auto& t : transitions) {
            detail::require(t.from < states && t.to < states, "NFA transition state out of range");
            detail::require(t.label.degree() == degree, "NFA transition label has the wrong degree");
        }
        for (std::size_t q : initial) detail::require(q < states, "NFA initial state out of range");
        for (std::size_t q : final) detail::require(q < states, "NFA final state out of range");
    }

    /// Initial and final sets are the same single state.
    bool single_base_state() const { return initial.size() == 1 && final.size() == 1 && initial[0] == final[0]; }
};

} // namespace grpmem
