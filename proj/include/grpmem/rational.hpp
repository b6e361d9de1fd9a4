#pragma once

// Rational subsets of S_m given by group-labelled NFAs: membership by
// breadth-first search over (state, element) pairs, and generators for the
// subgroup accepted by an automaton whose only initial and final state
// coincide.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <set>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "grpmem/automata.hpp"
#include "grpmem/bsgs.hpp"
#include "grpmem/element_set.hpp"
#include "grpmem/errors.hpp"
#include "grpmem/permutation.hpp"

namespace grpmem {

/// Automaton with a single base state q0 (initial and final) in which every
/// state is reachable from q0 and reaches q0, closed under inverse
/// transitions. `edges` holds one representative (p, g, q) of every
/// undirected pair {(p, g, q), (q, g^-1, p)}; `original_state[i]` is the
/// input state that state i came from.
struct TrimmedGroupNfa {
    GroupNfa nfa;
    std::size_t base = 0;
    std::vector<GroupNfa::Transition> edges;
    std::vector<std::size_t> original_state;
};

namespace detail {

inline std::vector<bool> reach(std::size_t states, const std::vector<GroupNfa::Transition>& ts, std::size_t from,
                               bool backwards)
{
    std::vector<std::vector<std::size_t>> adj(states);
    for (const auto& t : ts) {
        if (backwards)
            adj[t.to].push_back(t.from);
        else
            adj[t.from].push_back(t.to);
    }
    std::vector<bool> seen(states, false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        const auto p = stack.back();
        stack.pop_back();
        for (auto q : adj[p])
            if (!seen[q]) {
                seen[q] = true;
                stack.push_back(q);
            }
    }
    return seen;
}

using TransitionKey = std::tuple<std::size_t, std::vector<Point>, std::size_t>;

inline TransitionKey key_of(std::size_t from, const Permutation& g, std::size_t to)
{
    return {from, std::vector<Point>(g.images().begin(), g.images().end()), to};
}

} // namespace detail

inline TrimmedGroupNfa trim_and_symmetrize(const GroupNfa& a)
{
    a.validate();
    detail::require(a.single_base_state(), "subgroup form needs one state that is both initial and final");
    const std::size_t q0 = a.initial[0];
    const auto fwd = detail::reach(a.states, a.transitions, q0, false);
    const auto bwd = detail::reach(a.states, a.transitions, q0, true);

    TrimmedGroupNfa out;
    constexpr auto dropped = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> renumber(a.states, dropped);
    for (std::size_t p = 0; p < a.states; ++p)
        if (fwd[p] && bwd[p]) {
            renumber[p] = out.original_state.size();
            out.original_state.push_back(p);
        }
    out.base = renumber[q0];
    out.nfa.degree = a.degree;
    out.nfa.states = out.original_state.size();
    out.nfa.initial = {out.base};
    out.nfa.final = {out.base};

    std::set<detail::TransitionKey> present, paired;
    for (const auto& t : a.transitions) {
        if (renumber[t.from] == dropped || renumber[t.to] == dropped) continue;
        GroupNfa::Transition u{renumber[t.from], t.label, renumber[t.to]};
        if (present.insert(detail::key_of(u.from, u.label, u.to)).second) out.nfa.transitions.push_back(u);
        if (paired.contains(detail::key_of(u.from, u.label, u.to))) continue;
        out.edges.push_back(u);
        paired.insert(detail::key_of(u.from, u.label, u.to));
        paired.insert(detail::key_of(u.to, u.label.inverse(), u.from));
    }
    for (const auto& e : out.edges) {
        GroupNfa::Transition back{e.to, e.label.inverse(), e.from};
        if (present.insert(detail::key_of(back.from, back.label, back.to)).second) out.nfa.transitions.push_back(back);
    }
    return out;
}

/// One generator g_p g g_q^-1 per edge (p, g, q) outside a spanning tree
/// found by breadth-first search from the base state, edges taken in order;
/// g_p is the element read along the tree path from the base to p.
inline std::vector<Permutation> spanning_tree_generators(const TrimmedGroupNfa& a)
{
    const std::size_t n = a.nfa.states;
    std::vector<std::vector<std::size_t>> incident(n);
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        incident[a.edges[i].from].push_back(i);
        if (a.edges[i].to != a.edges[i].from) incident[a.edges[i].to].push_back(i);
    }
    std::vector<std::optional<Permutation>> path(n);
    std::vector<bool> tree_edge(a.edges.size(), false);
    path[a.base] = Permutation(a.nfa.degree);
    std::vector<std::size_t> queue{a.base};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto p = queue[head];
        for (auto i : incident[p]) {
            const auto& e = a.edges[i];
            const bool forward = e.from == p;
            const auto q = forward ? e.to : e.from;
            if (path[q]) continue;
            path[q] = *path[p] * (forward ? e.label : e.label.inverse());
            tree_edge[i] = true;
            queue.push_back(q);
        }
    }
    std::vector<Permutation> out;
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        if (tree_edge[i]) continue;
        const auto& e = a.edges[i];
        detail::ensure(path[e.from] && path[e.to], "trimmed automaton is not connected");
        out.push_back(*path[e.from] * e.label * path[e.to]->inverse());
    }
    return out;
}

struct RationalOptions {
    std::size_t max_degree = 8;
    std::uint64_t max_configurations = 50'000'000;
};

struct RationalResult {
    bool member = false;
    std::vector<std::size_t> witness; // transition indices of an accepting run
    std::uint64_t configurations = 0;
};

/// target in L(a), by breadth-first search over reachable (state, element)
/// configurations starting from every initial state with the identity.
inline RationalResult rational_membership(const GroupNfa& a, const Permutation& target, const RationalOptions& opt = {})
{
    a.validate();
    detail::require(target.degree() == a.degree, "target degree does not match the automaton");
    if (a.degree > opt.max_degree) throw cap_exceeded("rational membership is limited to degree " +
                                                      std::to_string(opt.max_degree));
    const std::uint64_t group = factorial(a.degree);
    if (a.states != 0 && group > opt.max_configurations / a.states)
        throw cap_exceeded("configuration space exceeds the configured cap");

    std::vector<std::vector<std::size_t>> out(a.states);
    for (std::size_t i = 0; i < a.transitions.size(); ++i) out[a.transitions[i].from].push_back(i);
    std::vector<bool> is_final(a.states, false);
    for (auto q : a.final) is_final[q] = true;

    struct Parent {
        std::uint64_t config;
        std::size_t transition;
    };
    constexpr std::uint64_t root = ~std::uint64_t{0};
    std::unordered_map<std::uint64_t, Parent> parent;
    std::vector<std::pair<std::uint64_t, Permutation>> queue;
    const std::uint64_t goal = lehmer_rank(target);
    auto config = [&](std::size_t q, std::uint64_t r) { return static_cast<std::uint64_t>(q) * group + r; };

    RationalResult res;
    auto finish = [&](std::uint64_t c) {
        res.member = true;
        while (parent.at(c).config != root) {
            res.witness.push_back(parent.at(c).transition);
            c = parent.at(c).config;
        }
        std::reverse(res.witness.begin(), res.witness.end());
    };

    const Permutation one(a.degree);
    const std::uint64_t one_rank = lehmer_rank(one);
    for (auto q : a.initial) {
        const auto c = config(q, one_rank);
        if (!parent.emplace(c, Parent{root, 0}).second) continue;
        queue.emplace_back(c, one);
        if (is_final[q] && one_rank == goal) {
            finish(c);
            res.configurations = parent.size();
            return res;
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto [c, x] = queue[head];
        const auto q = static_cast<std::size_t>(c / group);
        for (auto i : out[q]) {
            const auto& t = a.transitions[i];
            Permutation y = x * t.label;
            const auto r = lehmer_rank(y);
            const auto d = config(t.to, r);
            if (!parent.emplace(d, Parent{c, i}).second) continue;
            if (is_final[t.to] && r == goal) {
                finish(d);
                res.configurations = parent.size();
                return res;
            }
            queue.emplace_back(d, std::move(y));
        }
    }
    res.configurations = parent.size();
    return res;
}

/// Product of the labels along a sequence of transitions.
inline Permutation read_run(const GroupNfa& a, const std::vector<std::size_t>& run)
{
    Permutation x(a.degree);
    for (auto i : run) x = x * a.transitions.at(i).label;
    return x;
}

/// The subgroup accepted by a single-base-state automaton.
inline Bsgs accepted_subgroup(const GroupNfa& a)
{
    const auto trimmed = trim_and_symmetrize(a);
    return Bsgs(a.degree, spanning_tree_generators(trimmed));
}

/// Membership through the subgroup route; nullopt when the automaton is not
/// in single-base-state form.
inline std::optional<bool> rational_membership_by_subgroup(const GroupNfa& a, const Permutation& target)
{
    a.validate();
    detail::require(target.degree() == a.degree, "target degree does not match the automaton");
    if (!a.single_base_state()) return std::nullopt;
    return accepted_subgroup(a).contains(target);
}

} // namespace grpmem
