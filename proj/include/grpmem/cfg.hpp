#pragma once

// Context-free grammars in Chomsky normal form, derivation trees, emptiness,
// and the Horton-Strahler classes CFG(k).
//
// A derivation tree is acyclic when no nonterminal repeats on a root-to-leaf
// path. CFG(k) holds the grammars all of whose acyclic derivation trees
// rooted at the start symbol have Horton-Strahler number at most k, with the
// number taken on the tree after the terminal leaves are removed.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "grpmem/errors.hpp"
#include "grpmem/tree.hpp"

namespace grpmem {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// Bit set over nonterminal indices.
using NonterminalSet = std::uint64_t;

constexpr NonterminalSet bit(std::size_t i) noexcept { return NonterminalSet{1} << i; }

template <typename Terminal>
class Cfg {
public:
    struct Production {
        std::size_t lhs = 0;
        std::size_t left = npos;     // binary: A -> left right
        std::size_t right = npos;
        std::size_t terminal = npos; // terminal: A -> terminals()[terminal]

        bool is_binary() const noexcept { return terminal == npos; }
    };

    /// Returns the index of `name`, declaring it if needed.
    std::size_t add_nonterminal(const std::string& name)
    {
        if (auto it = index_.find(name); it != index_.end()) return it->second;
        if (names_.size() >= 63) throw cap_exceeded("grammars are limited to 63 nonterminals");
        index_.emplace(name, names_.size());
        names_.push_back(name);
        by_lhs_.emplace_back();
        return names_.size() - 1;
    }

    std::optional<std::size_t> find(const std::string& name) const
    {
        if (auto it = index_.find(name); it != index_.end()) return it->second;
        return std::nullopt;
    }

    void add_binary(std::size_t lhs, std::size_t left, std::size_t right)
    {
        check_index(lhs);
        check_index(left);
        check_index(right);
        push({lhs, left, right, npos});
    }

    void add_terminal(std::size_t lhs, const Terminal& t)
    {
        check_index(lhs);
        std::size_t ti = npos;
        for (std::size_t i = 0; i < terminals_.size() && ti == npos; ++i)
            if (terminals_[i] == t) ti = i;
        if (ti == npos) {
            ti = terminals_.size();
            terminals_.push_back(t);
        }
        push({lhs, npos, npos, ti});
    }

    void set_start(std::size_t s)
    {
        check_index(s);
        start_ = s;
    }

    std::size_t start() const
    {
        detail::require(start_ != npos, "grammar has no start symbol");
        return start_;
    }

    std::size_t nonterminal_count() const noexcept { return names_.size(); }
    const std::string& name(std::size_t a) const { return names_.at(a); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::vector<Production>& productions() const noexcept { return productions_; }
    const std::vector<std::size_t>& productions_of(std::size_t a) const { return by_lhs_.at(a); }
    const std::vector<Terminal>& terminals() const noexcept { return terminals_; }
    const Terminal& terminal_of(const Production& p) const { return terminals_.at(p.terminal); }

    bool has_terminal_production(std::size_t a) const
    {
        for (std::size_t pi : by_lhs_.at(a))
            if (!productions_[pi].is_binary()) return true;
        return false;
    }

    /// Degree of the permutation terminals; unused for letter grammars.
    std::size_t degree() const noexcept { return degree_; }
    void set_degree(std::size_t m) noexcept { degree_ = m; }

    /// Same nonterminals and productions with every terminal replaced by f(t).
    template <typename F>
    auto map_terminals(F&& f) const -> Cfg<std::decay_t<std::invoke_result_t<F, const Terminal&>>>
    {
        Cfg<std::decay_t<std::invoke_result_t<F, const Terminal&>>> out;
        for (const auto& n : names_) out.add_nonterminal(n);
        for (const auto& p : productions_) {
            if (p.is_binary())
                out.add_binary(p.lhs, p.left, p.right);
            else
                out.add_terminal(p.lhs, f(terminals_[p.terminal]));
        }
        if (start_ != npos) out.set_start(start_);
        out.set_degree(degree_);
        return out;
    }

private:
    void check_index(std::size_t a) const { detail::require(a < names_.size(), "undeclared nonterminal"); }

    void push(Production p)
    {
        by_lhs_[p.lhs].push_back(productions_.size());
        productions_.push_back(p);
    }

    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<Production> productions_;
    std::vector<std::vector<std::size_t>> by_lhs_;
    std::vector<Terminal> terminals_;
    std::size_t start_ = npos;
    std::size_t degree_ = 0;
};

/// Derivation tree node. `production` is npos for an unexpanded leaf of a
/// partial tree; terminal productions have no children (their terminal leaf
/// is implicit), binary productions have two.
struct DerivationTree {
    std::size_t nonterminal = 0;
    std::size_t production = npos;
    std::vector<DerivationTree> children;

    /// The binary tree left after removing terminal-labelled leaves.
    BinaryTree shape() const
    {
        BinaryTree t;
        for (const auto& c : children) t.children.push_back(c.shape());
        return t;
    }

    bool is_acyclic() const { return acyclic_below(0); }

    template <typename T>
    bool matches(const Cfg<T>& g) const
    {
        if (nonterminal >= g.nonterminal_count()) return false;
        if (production == npos) return children.empty();
        if (production >= g.productions().size()) return false;
        const auto& p = g.productions()[production];
        if (p.lhs != nonterminal) return false;
        if (!p.is_binary()) return children.empty();
        return children.size() == 2 && children[0].nonterminal == p.left && children[1].nonterminal == p.right &&
               children[0].matches(g) && children[1].matches(g);
    }

    bool is_complete() const
    {
        if (production == npos) return false;
        for (const auto& c : children)
            if (!c.is_complete()) return false;
        return true;
    }

    /// Terminal indices at the leaves, left to right.
    template <typename T>
    std::vector<std::size_t> yield(const Cfg<T>& g) const
    {
        std::vector<std::size_t> out;
        collect(g, out);
        return out;
    }

private:
    bool acyclic_below(NonterminalSet ancestors) const
    {
        if (ancestors & bit(nonterminal)) return false;
        for (const auto& c : children)
            if (!c.acyclic_below(ancestors | bit(nonterminal))) return false;
        return true;
    }

    template <typename T>
    void collect(const Cfg<T>& g, std::vector<std::size_t>& out) const
    {
        if (children.empty()) {
            if (production != npos) out.push_back(g.productions()[production].terminal);
            return;
        }
        for (const auto& c : children) c.collect(g, out);
    }
};

/// Nonterminals (outside `excluded`) deriving at least one terminal word in
/// the grammar with the excluded nonterminals and their productions removed.
template <typename T>
NonterminalSet productive_nonterminals(const Cfg<T>& g, NonterminalSet excluded = 0)
{
    NonterminalSet prod = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& p : g.productions()) {
            if ((excluded & bit(p.lhs)) || (prod & bit(p.lhs))) continue;
            bool ok = !p.is_binary() || ((prod & bit(p.left)) && (prod & bit(p.right)) &&
                                         !(excluded & (bit(p.left) | bit(p.right))));
            if (ok) {
                prod |= bit(p.lhs);
                changed = true;
            }
        }
    }
    return prod;
}

struct EmptinessResult {
    bool empty = true;
    std::optional<DerivationTree> witness; // acyclic, rooted at the start symbol
};

/// Emptiness by the productive-nonterminal fixpoint. The witness expands
/// each nonterminal with the production that first made it productive; the
/// round numbers strictly decrease downwards, so the tree is acyclic.
template <typename T>
EmptinessResult cfg_emptiness(const Cfg<T>& g)
{
    const std::size_t n = g.nonterminal_count();
    std::vector<std::size_t> round(n, npos), via(n, npos);
    for (std::size_t r = 0;; ++r) {
        std::vector<std::pair<std::size_t, std::size_t>> fresh;
        for (std::size_t pi = 0; pi < g.productions().size(); ++pi) {
            const auto& p = g.productions()[pi];
            if (round[p.lhs] != npos) continue;
            bool ok = !p.is_binary() || (round[p.left] != npos && round[p.right] != npos);
            if (ok) fresh.emplace_back(p.lhs, pi);
        }
        if (fresh.empty()) break;
        for (auto [a, pi] : fresh) {
            if (round[a] != npos) continue;
            round[a] = r;
            via[a] = pi;
        }
    }
    EmptinessResult res;
    const std::size_t s = g.start();
    if (round[s] == npos) return res;
    res.empty = false;
    std::function<DerivationTree(std::size_t)> build = [&](std::size_t a) {
        DerivationTree t;
        t.nonterminal = a;
        t.production = via[a];
        const auto& p = g.productions()[via[a]];
        if (p.is_binary()) {
            t.children.push_back(build(p.left));
            t.children.push_back(build(p.right));
        }
        return t;
    };
    res.witness = build(s);
    return res;
}

/// Exact maximum Horton-Strahler number over complete acyclic derivation
/// trees rooted at the start symbol; nullopt if there is no such tree.
///
/// Dynamic program over (A, F) with F the set of forbidden ancestors:
///   ranks(A, F) = {0 : A has a terminal production}
///               u {combine(s, t) : A -> B C, B, C not in F+A,
///                  s in ranks(B, F+A), t in ranks(C, F+A)}.
/// Ranks never exceed |N|, so each set is a 64-bit mask.
template <typename T>
class AcyclicRanks {
public:
    explicit AcyclicRanks(const Cfg<T>& g) : g_(g)
    {
        if (g.nonterminal_count() > 40) throw cap_exceeded("rank table limited to 40 nonterminals");
    }

    /// Bit s is set iff some acyclic tree rooted at a, avoiding `forbidden`,
    /// has Horton-Strahler number s.
    std::uint64_t ranks(std::size_t a, NonterminalSet forbidden)
    {
        const std::uint64_t key = (forbidden << 6) | a;
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        std::uint64_t res = 0;
        const NonterminalSet below = forbidden | bit(a);
        for (std::size_t pi : g_.productions_of(a)) {
            const auto& p = g_.productions()[pi];
            if (!p.is_binary()) {
                res |= 1;
                continue;
            }
            if ((below & bit(p.left)) || (below & bit(p.right))) continue;
            const std::uint64_t l = ranks(p.left, below);
            if (!l) continue;
            const std::uint64_t r = ranks(p.right, below);
            for (std::size_t s = 0; s < 64; ++s) {
                if (!(l >> s & 1)) continue;
                for (std::size_t t = 0; t < 64; ++t)
                    if (r >> t & 1) res |= std::uint64_t{1} << strahler_combine(s, t);
            }
        }
        memo_.emplace(key, res);
        return res;
    }

private:
    const Cfg<T>& g_;
    std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

template <typename T>
std::optional<std::size_t> max_acyclic_hs(const Cfg<T>& g)
{
    AcyclicRanks<T> table(g);
    const std::uint64_t r = table.ranks(g.start(), 0);
    if (!r) return std::nullopt;
    std::size_t top = 0;
    for (std::size_t s = 0; s < 64; ++s)
        if (r >> s & 1) top = s;
    return top;
}

/// Membership in CFG(k).
template <typename T>
bool check_cfg_k(const Cfg<T>& g, std::size_t k)
{
    detail::require(k >= 1, "CFG(k) needs k >= 1");
    const auto top = max_acyclic_hs(g);
    return !top || *top <= k;
}

/// Shape statistics of an enumerated tree (terminal leaves removed).
struct TreeSummary {
    std::size_t nodes = 1;
    std::size_t leaves = 1;
    std::size_t height = 0;
    std::size_t hs = 0;
};

namespace detail {

// Visits acyclic trees rooted at a (complete, or partial when open leaves
// are allowed) with at most max_nodes nodes. The visitor returns true to
// stop; the function returns true if it was stopped.
template <typename T>
class TreeWalker {
public:
    using Visit = std::function<bool(const TreeSummary&)>;

    TreeWalker(const Cfg<T>& g, bool partial) : g_(g), partial_(partial) {}

    bool walk(std::size_t a, NonterminalSet forbidden, std::size_t max_nodes, const Visit& visit)
    {
        if (max_nodes == 0) return false;
        if (partial_) {
            // An unexpanded leaf stands for any completion inside the
            // subgrammar without the ancestors; terminal leaves are among them.
            if ((productive_nonterminals(g_, forbidden) & bit(a)) && visit(TreeSummary{})) return true;
        } else if (g_.has_terminal_production(a) && visit(TreeSummary{})) {
            return true;
        }
        if (max_nodes < 3) return false;
        const NonterminalSet below = forbidden | bit(a);
        for (std::size_t pi : g_.productions_of(a)) {
            const auto& p = g_.productions()[pi];
            if (!p.is_binary() || (below & bit(p.left)) || (below & bit(p.right))) continue;
            bool stop = walk(p.left, below, max_nodes - 2, [&](const TreeSummary& l) {
                return walk(p.right, below, max_nodes - 1 - l.nodes, [&](const TreeSummary& r) {
                    TreeSummary t;
                    t.nodes = 1 + l.nodes + r.nodes;
                    t.leaves = l.leaves + r.leaves;
                    t.height = 1 + std::max(l.height, r.height);
                    t.hs = strahler_combine(l.hs, r.hs);
                    return visit(t);
                });
            });
            if (stop) return true;
        }
        return false;
    }

private:
    const Cfg<T>& g_;
    bool partial_;
};

} // namespace detail

/// Which part of the two-case search refuted membership in CFG(k).
enum class CfgKWitness { none, small_tree_with_large_rank, large_partial_tree };

struct CfgKCertificateResult {
    bool in_class = true;
    CfgKWitness witness = CfgKWitness::none;
};

/// Decides membership in CFG(k) by searching for a refutation of one of two
/// kinds, with bound = 2 |N|^k:
///   1. a complete acyclic tree with at most `bound` nodes and rank > k;
///   2. a partial acyclic tree with bound < nodes <= bound + 2 whose
///      unexpanded leaves each admit a completion avoiding their ancestors.
/// The search is exhaustive; only use it on tiny grammars.
template <typename T>
CfgKCertificateResult check_cfg_k_by_certificates(const Cfg<T>& g, std::size_t k)
{
    detail::require(k >= 1, "CFG(k) needs k >= 1");
    std::size_t bound = 2;
    for (std::size_t i = 0; i < k; ++i) {
        bound *= g.nonterminal_count();
        if (bound > (std::size_t{1} << 40)) throw cap_exceeded("node bound too large for certificate search");
    }
    CfgKCertificateResult res;
    detail::TreeWalker<T> complete(g, false);
    if (complete.walk(g.start(), 0, bound, [&](const TreeSummary& t) { return t.hs > k; })) {
        res.in_class = false;
        res.witness = CfgKWitness::small_tree_with_large_rank;
        return res;
    }
    detail::TreeWalker<T> partial(g, true);
    if (partial.walk(g.start(), 0, bound + 2, [&](const TreeSummary& t) { return t.nodes > bound; })) {
        res.in_class = false;
        res.witness = CfgKWitness::large_partial_tree;
    }
    return res;
}

} // namespace grpmem
