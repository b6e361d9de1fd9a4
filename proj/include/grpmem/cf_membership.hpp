#pragma once

// Context-free membership over S_m. For a nonterminal A let G_A be the pairs
// (u, v) of group values with A =>* u A v; these form a subgroup of G x G^,
// where G^ is G with reversed multiplication. Two operators drive the
// computation:
//   delta: subgroup tuple -> language tuple. L_A collects the values of
//          acyclic derivation trees rooted at A, where each node labelled B
//          may sandwich its value as h1 x h2 for any (h1, h2) in H_B.
//   gamma: language tuple -> subgroup tuple. H_A is the subgroup accepted by
//          the automaton over the nonterminals with a transition B -> C
//          labelled (1, h) for B -> C D, h in L_D, and (g, 1) for B -> D C,
//          g in L_D, with A as the only initial and final state.
// Iterating gamma(delta(.)) from trivial subgroups reaches (G_A), and then
// delta gives the exact languages.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grpmem/bsgs.hpp"
#include "grpmem/cfg.hpp"
#include "grpmem/element_set.hpp"
#include "grpmem/errors.hpp"
#include "grpmem/permutation.hpp"
#include "grpmem/rational.hpp"

namespace grpmem {

/// Element of G x G^; products reverse the second coordinate.
struct GroupPair {
    Permutation g;
    Permutation h;

    static GroupPair identity(std::size_t m) { return {Permutation(m), Permutation(m)}; }

    GroupPair operator*(const GroupPair& o) const { return {g * o.g, o.h * h}; }
    GroupPair inverse() const { return {g.inverse(), h.inverse()}; }
    bool operator==(const GroupPair&) const = default;

    /// h1 x h2.
    Permutation sandwich(const Permutation& x) const { return g * x * h; }

    std::string to_string() const { return "(" + g.to_string() + ", " + h.to_string() + ")"; }
};

/// Injective homomorphism G x G^ -> S_2m, (g, h) -> g + shifted(h^-1).
inline Permutation embed(const GroupPair& p) { return p.g.direct_sum(p.h.inverse()); }

inline GroupPair unembed(const Permutation& x)
{
    detail::require(x.degree() % 2 == 0, "pair embedding has odd degree");
    const std::size_t m = x.degree() / 2;
    return {x.restrict(0, m), x.restrict(m, m).inverse()};
}

/// H_A for every nonterminal, as subgroups of S_2m.
using SubgroupTuple = std::vector<Bsgs>;
/// L_A for every nonterminal.
using LanguageTuple = std::vector<ElementSet>;

struct CfmOptions {
    std::size_t max_degree = 5;
};

/// Common degree of the permutation terminals (or the declared degree).
inline std::size_t grammar_degree(const Cfg<Permutation>& g)
{
    std::size_t m = g.degree();
    for (const auto& t : g.terminals()) {
        if (m == 0) m = t.degree();
        detail::require(t.degree() == m, "grammar terminals have different degrees");
    }
    detail::require(m >= 1, "grammar degree is unknown");
    return m;
}

namespace detail {

inline std::size_t checked_degree(const Cfg<Permutation>& g, const CfmOptions& opt)
{
    const auto m = grammar_degree(g);
    if (m > opt.max_degree)
        throw cap_exceeded("context-free membership is limited to degree " + std::to_string(opt.max_degree));
    return m;
}

} // namespace detail

inline SubgroupTuple trivial_tuple(const Cfg<Permutation>& g)
{
    return SubgroupTuple(g.nonterminal_count(), Bsgs(2 * grammar_degree(g)));
}

/// Decorated acyclic derivation tree; decorations follow the nodes in
/// preorder, one sandwich pair per node.
struct CfmCertificate {
    DerivationTree tree;
    std::vector<GroupPair> decorations;
};

/// Memoized evaluation of delta over (nonterminal, forbidden ancestors).
class DeltaEvaluator {
public:
    DeltaEvaluator(const Cfg<Permutation>& g, const SubgroupTuple& s, const CfmOptions& opt = {})
        : g_(g), m_(detail::checked_degree(g, opt))
    {
        detail::require(s.size() == g.nonterminal_count(), "subgroup tuple has the wrong size");
        for (const auto& h : s) {
            detail::require(h.degree() == 2 * m_, "subgroup tuple has the wrong degree");
            std::vector<GroupPair> gens;
            for (const auto& x : h.strong_generators()) gens.push_back(unembed(x));
            pairs_.push_back(std::move(gens));
        }
    }

    std::size_t degree() const noexcept { return m_; }

    /// Values of acyclic trees rooted at a whose nodes avoid `forbidden`.
    const ElementSet& language(std::size_t a, NonterminalSet forbidden = 0)
    {
        const auto key = std::make_pair(forbidden, a);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        ElementSet seeds(m_);
        for (std::size_t pi : g_.productions_of(a)) add_seeds(seeds, pi, forbidden);
        ElementSet out = orbit(a, seeds, nullptr);
        return memo_.emplace(key, std::move(out)).first->second;
    }

    LanguageTuple tuple()
    {
        LanguageTuple t;
        for (std::size_t a = 0; a < g_.nonterminal_count(); ++a) t.push_back(language(a));
        return t;
    }

    /// A decorated tree rooted at a with value x, or nullopt if x is not in
    /// language(a, forbidden).
    std::optional<CfmCertificate> explain(std::size_t a, const Permutation& x, NonterminalSet forbidden = 0)
    {
        if (!language(a, forbidden).contains(x)) return std::nullopt;
        CfmCertificate cert;
        build(a, x, forbidden, cert.tree, cert.decorations);
        return cert;
    }

private:
    struct Trace {
        std::map<std::uint64_t, std::pair<std::uint64_t, std::size_t>> parent; // rank -> (rank, generator)
    };

    void add_seeds(ElementSet& seeds, std::size_t pi, NonterminalSet forbidden)
    {
        const auto& p = g_.productions()[pi];
        if (!p.is_binary()) {
            seeds.insert(g_.terminal_of(p));
            return;
        }
        const NonterminalSet below = forbidden | bit(p.lhs);
        if ((below & bit(p.left)) || (below & bit(p.right))) return;
        const auto left = language(p.left, below).elements();
        if (left.empty()) return;
        const auto right = language(p.right, below).elements();
        for (const auto& x : left)
            for (const auto& y : right) seeds.insert(x * y);
    }

    // Closure of the seeds under x -> h1 x h2 for the generators of H_a.
    ElementSet orbit(std::size_t a, const ElementSet& seeds, Trace* trace)
    {
        ElementSet out = seeds;
        std::vector<Permutation> queue = seeds.elements();
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const auto from = lehmer_rank(queue[head]);
            for (std::size_t k = 0; k < pairs_[a].size(); ++k) {
                Permutation y = pairs_[a][k].sandwich(queue[head]);
                const auto r = lehmer_rank(y);
                if (!out.insert_rank(r)) continue;
                if (trace) trace->parent.emplace(r, std::make_pair(from, k));
                queue.push_back(std::move(y));
            }
        }
        return out;
    }

    void build(std::size_t a, const Permutation& x, NonterminalSet forbidden, DerivationTree& node,
               std::vector<GroupPair>& decorations)
    {
        node.nonterminal = a;
        const std::size_t slot = decorations.size();
        decorations.push_back(GroupPair::identity(m_));
        const auto target = lehmer_rank(x);
        for (std::size_t pi : g_.productions_of(a)) {
            ElementSet seeds(m_);
            add_seeds(seeds, pi, forbidden);
            if (seeds.empty()) continue;
            Trace trace;
            if (!orbit(a, seeds, &trace).contains_rank(target)) continue;
            // walk back to a seed, accumulating the sandwich pair
            GroupPair acc = GroupPair::identity(m_);
            std::uint64_t r = target;
            for (auto it = trace.parent.find(r); it != trace.parent.end(); it = trace.parent.find(r)) {
                acc = acc * pairs_[a][it->second.second];
                r = it->second.first;
            }
            decorations[slot] = acc;
            node.production = pi;
            const auto& p = g_.productions()[pi];
            if (!p.is_binary()) return;
            const Permutation y = lehmer_unrank(r, m_);
            const NonterminalSet below = forbidden | bit(a);
            const auto& right = language(p.right, below);
            for (const auto& u : language(p.left, below).elements()) {
                const Permutation v = u.inverse() * y;
                if (!right.contains(v)) continue;
                node.children.resize(2);
                build(p.left, u, below, node.children[0], decorations);
                build(p.right, v, below, node.children[1], decorations);
                return;
            }
            throw invariant_error("seed has no factorization");
        }
        throw invariant_error("element vanished from its language");
    }

    const Cfg<Permutation>& g_;
    std::size_t m_;
    std::vector<std::vector<GroupPair>> pairs_;
    std::map<std::pair<NonterminalSet, std::size_t>, ElementSet> memo_;
};

inline LanguageTuple delta(const Cfg<Permutation>& g, const SubgroupTuple& s, const CfmOptions& opt = {})
{
    return DeltaEvaluator(g, s, opt).tuple();
}

/// The automaton of gamma over G x G^ embedded in S_2m, with every
/// nonterminal as a state and the base state left unset.
inline GroupNfa loop_automaton(const Cfg<Permutation>& g, const LanguageTuple& t)
{
    const auto m = grammar_degree(g);
    detail::require(t.size() == g.nonterminal_count(), "language tuple has the wrong size");
    GroupNfa a;
    a.degree = 2 * m;
    a.states = g.nonterminal_count();
    const Permutation one(m);
    for (const auto& p : g.productions()) {
        if (!p.is_binary()) continue;
        for (const auto& h : t[p.right].elements()) a.transitions.push_back({p.lhs, embed({one, h}), p.left});
        for (const auto& x : t[p.left].elements()) a.transitions.push_back({p.lhs, embed({x, one}), p.right});
    }
    return a;
}

inline SubgroupTuple gamma(const Cfg<Permutation>& g, const LanguageTuple& t)
{
    GroupNfa a = loop_automaton(g, t);
    SubgroupTuple out;
    for (std::size_t q = 0; q < g.nonterminal_count(); ++q) {
        a.initial = a.final = {q};
        Bsgs h(a.degree);
        for (const auto& x : spanning_tree_generators(trim_and_symmetrize(a))) h.extend(x);
        out.push_back(std::move(h));
    }
    return out;
}

/// Componentwise inclusion s <= s'.
inline bool tuple_leq(const SubgroupTuple& s, const SubgroupTuple& t)
{
    detail::require(s.size() == t.size(), "tuples differ in length");
    for (std::size_t i = 0; i < s.size(); ++i)
        if (!t[i].contains_group(s[i])) return false;
    return true;
}

inline bool tuple_equal(const SubgroupTuple& s, const SubgroupTuple& t)
{
    if (s.size() != t.size()) return false;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i].order() != t[i].order()) return false;
    return tuple_leq(s, t) && tuple_leq(t, s);
}

/// 2 |N| floor(log2 m!).
inline std::size_t fixed_point_bound(std::size_t nonterminals, std::size_t m)
{
    return 2 * nonterminals * floor_log2(BigInt(factorial(m)));
}

struct FixedPointResult {
    SubgroupTuple subgroups;  // (G_A)
    LanguageTuple languages;  // delta of the fixed point
    std::size_t iterations = 0; // strict-growth rounds
    std::vector<std::vector<BigInt>> orders; // per round, per nonterminal
};

inline FixedPointResult fixed_point(const Cfg<Permutation>& g, const CfmOptions& opt = {})
{
    const auto m = detail::checked_degree(g, opt);
    FixedPointResult res;
    SubgroupTuple s = trivial_tuple(g);
    auto record = [&](const SubgroupTuple& t) {
        std::vector<BigInt> row;
        for (const auto& h : t) row.push_back(h.order());
        res.orders.push_back(std::move(row));
    };
    record(s);
    const auto bound = fixed_point_bound(g.nonterminal_count(), m);
    for (;;) {
        LanguageTuple t = delta(g, s, opt);
        SubgroupTuple next = gamma(g, t);
        detail::ensure(tuple_leq(s, next), "gamma-delta iteration is not monotone");
        if (tuple_equal(s, next)) {
            res.subgroups = std::move(s);
            res.languages = std::move(t);
            return res;
        }
        ++res.iterations;
        detail::ensure(res.iterations <= bound, "fixed point not reached within 2|N|log2|G| rounds");
        record(next);
        s = std::move(next);
    }
}

struct CfmResult {
    bool member = false;
    FixedPointResult fixed;
    std::optional<CfmCertificate> certificate;
};

inline CfmResult cf_membership(const Cfg<Permutation>& g, const Permutation& target, const CfmOptions& opt = {})
{
    const auto m = detail::checked_degree(g, opt);
    detail::require(target.degree() == m, "target degree does not match the grammar");
    CfmResult res;
    res.fixed = fixed_point(g, opt);
    res.member = res.fixed.languages[g.start()].contains(target);
    if (res.member) res.certificate = DeltaEvaluator(g, res.fixed.subgroups, opt).explain(g.start(), target);
    return res;
}

/// Evaluated languages by the least fixpoint of
/// L(A) = {x : A -> x} u L(B) L(C) over A -> B C.
inline LanguageTuple oracle_semantics(const Cfg<Permutation>& g, const CfmOptions& opt = {})
{
    const auto m = detail::checked_degree(g, opt);
    LanguageTuple l(g.nonterminal_count(), ElementSet(m));
    for (const auto& p : g.productions())
        if (!p.is_binary()) l[p.lhs].insert(g.terminal_of(p));
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& p : g.productions()) {
            if (!p.is_binary()) continue;
            const auto left = l[p.left].elements(), right = l[p.right].elements();
            ElementSet fresh(m);
            for (const auto& x : left)
                for (const auto& y : right) fresh.insert(x * y);
            changed |= l[p.lhs].merge(fresh);
        }
    }
    return l;
}

/// Root value of a decorated tree, checking every decoration against its
/// subgroup. Throws input_error for malformed trees or foreign decorations.
inline Permutation evaluate_decorated_tree(const Cfg<Permutation>& g, const DerivationTree& tree,
                                           const std::vector<GroupPair>& decorations, const SubgroupTuple& s)
{
    detail::require(tree.matches(g) && tree.is_complete(), "tree does not match the grammar");
    detail::require(tree.is_acyclic(), "tree is not acyclic");
    detail::require(s.size() == g.nonterminal_count(), "subgroup tuple has the wrong size");
    std::size_t next = 0;
    std::function<Permutation(const DerivationTree&)> eval = [&](const DerivationTree& v) {
        detail::require(next < decorations.size(), "too few decorations");
        const GroupPair& d = decorations[next++];
        detail::require(s[v.nonterminal].contains(embed(d)), "decoration is not in its subgroup");
        const auto& p = g.productions()[v.production];
        if (!p.is_binary()) return d.sandwich(g.terminal_of(p));
        const Permutation left = eval(v.children[0]);
        const Permutation right = eval(v.children[1]);
        return d.sandwich(left * right);
    };
    Permutation value = eval(tree);
    detail::require(next == decorations.size(), "too many decorations");
    return value;
}

inline Permutation evaluate_decorated_tree(const Cfg<Permutation>& g, const CfmCertificate& cert,
                                           const SubgroupTuple& s)
{
    return evaluate_decorated_tree(g, cert.tree, cert.decorations, s);
}

/// A walk A = A_1 -> A_2 -> ... -> A_{k+1} = A down the production graph:
/// productions[i] has lhs A_i, and directions[i] picks the child A_{i+1}
/// (0 = left, 1 = right).
struct LoopWitness {
    std::vector<std::size_t> productions;
    std::vector<int> directions;

    bool is_loop(const Cfg<Permutation>& g, std::size_t a) const
    {
        if (productions.size() != directions.size()) return false;
        std::size_t at = a;
        for (std::size_t i = 0; i < productions.size(); ++i) {
            if (productions[i] >= g.productions().size()) return false;
            const auto& p = g.productions()[productions[i]];
            if (!p.is_binary() || p.lhs != at || (directions[i] != 0 && directions[i] != 1)) return false;
            at = directions[i] == 0 ? p.left : p.right;
        }
        return at == a;
    }

    /// The element of M(p, d) obtained by choosing picks[i] from the
    /// language of the sibling left behind at step i.
    GroupPair product(const Cfg<Permutation>& g, const std::vector<Permutation>& picks) const
    {
        detail::require(picks.size() == productions.size(), "one pick per step is needed");
        GroupPair acc = GroupPair::identity(grammar_degree(g));
        const Permutation one(acc.g.degree());
        for (std::size_t i = 0; i < productions.size(); ++i)
            acc = acc * (directions[i] == 1 ? GroupPair{picks[i], one} : GroupPair{one, picks[i]});
        return acc;
    }
};

} // namespace grpmem
