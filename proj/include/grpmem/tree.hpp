#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "grpmem/errors.hpp"

namespace grpmem {

/// Plain rooted tree; Horton-Strahler numbers are only defined when every
/// inner node has exactly two children.
struct BinaryTree {
    std::vector<BinaryTree> children;

    static BinaryTree leaf() { return {}; }
    static BinaryTree node(BinaryTree l, BinaryTree r)
    {
        BinaryTree t;
        t.children.push_back(std::move(l));
        t.children.push_back(std::move(r));
        return t;
    }

    std::size_t node_count() const
    {
        std::size_t n = 1;
        for (const auto& c : children) n += c.node_count();
        return n;
    }

    std::size_t leaf_count() const
    {
        if (children.empty()) return 1;
        std::size_t n = 0;
        for (const auto& c : children) n += c.leaf_count();
        return n;
    }

    /// Number of edges on a longest root-to-leaf path.
    std::size_t height() const
    {
        std::size_t h = 0;
        for (const auto& c : children) h = std::max(h, c.height() + 1);
        return h;
    }

    /// Number of nodes on a longest root-to-leaf path.
    std::size_t levels() const { return height() + 1; }
};

/// Rank of a parent whose children have ranks s and t.
constexpr std::size_t strahler_combine(std::size_t s, std::size_t t) noexcept
{
    return s == t ? s + 1 : std::max(s, t);
}

inline std::size_t horton_strahler(const BinaryTree& t)
{
    if (t.children.empty()) return 0;
    detail::require(t.children.size() == 2, "Horton-Strahler number needs a binary tree");
    return strahler_combine(horton_strahler(t.children[0]), horton_strahler(t.children[1]));
}

/// Leaf bound d^s for a tree with Horton-Strahler number s and d nodes on a
/// longest root-to-leaf path. Measured in edges instead, the bound fails
/// already for a root with two leaves (d = 1, s = 1); with d counted in
/// nodes the usual spine induction goes through: 1 + (d-1) (d-1)^(s-1) <= d^s.
constexpr std::size_t strahler_leaf_bound(std::size_t height, std::size_t hs) noexcept
{
    std::size_t r = 1;
    for (std::size_t i = 0; i < hs; ++i) r *= height;
    return r;
}

} // namespace grpmem
