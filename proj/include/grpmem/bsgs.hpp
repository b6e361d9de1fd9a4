#pragma once

// Base and strong generating set, built with the deterministic Schreier-Sims
// algorithm (the variant in Holt, Eick & O'Brien, "Handbook of Computational
// Group Theory", 4.4.2). Products are left-to-right, see permutation.hpp.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <utility>
#include <vector>

#include "grpmem/bigint.hpp"
#include "grpmem/errors.hpp"
#include "grpmem/permutation.hpp"

namespace grpmem {

class Bsgs {
public:
    /// One level of the stabilizer chain. `generators` indexes the strong
    /// generators fixing every earlier base point; `orbit` is the orbit of
    /// `base_point` under them, in breadth-first order, and `reps[k]` maps
    /// the base point to `orbit[k]`.
    struct Level {
        Point base_point = 0;
        std::vector<std::size_t> generators;
        std::vector<Point> orbit;
        std::vector<Permutation> reps;
        std::vector<std::int64_t> position;  // point -> index into orbit, or -1
        std::vector<Point> parent;           // Schreier tree parent
        std::vector<std::size_t> via;        // strong generator on the tree edge
    };

    explicit Bsgs(std::size_t degree = 0) : degree_(degree) {}

    /// Runs Schreier-Sims on a degree-consistent generator list.
    Bsgs(std::size_t degree, const std::vector<Permutation>& generators) : degree_(degree)
    {
        for (const auto& g : generators) {
            detail::require(g.degree() == degree, "degree mismatch in generator list");
            if (g.is_identity()) continue;
            bool dup = false;
            for (const auto& s : strong_) dup = dup || s == g;
            if (!dup) strong_.push_back(g);
        }
        for (const auto& s : strong_) ensure_moves_base(s);
        rebuild_levels(0);
        complete();
    }

    std::size_t degree() const noexcept { return degree_; }
    const std::vector<Permutation>& strong_generators() const noexcept { return strong_; }
    const std::vector<Level>& levels() const noexcept { return levels_; }

    std::vector<Point> base() const
    {
        std::vector<Point> b;
        for (const auto& lv : levels_) b.push_back(lv.base_point);
        return b;
    }

    BigInt order() const
    {
        BigInt o = 1;
        for (const auto& lv : levels_) o *= lv.orbit.size();
        return o;
    }

    /// Sifts g through levels [from, end). Returns the residue and the level
    /// where sifting stopped (levels().size() if it passed every level).
    std::pair<Permutation, std::size_t> strip(Permutation g, std::size_t from = 0) const
    {
        for (std::size_t k = from; k < levels_.size(); ++k) {
            const auto& lv = levels_[k];
            const Point beta = g[lv.base_point];
            const auto pos = lv.position[beta];
            if (pos < 0) return {std::move(g), k};
            g = g * lv.reps[static_cast<std::size_t>(pos)].inverse();
        }
        return {std::move(g), levels_.size()};
    }

    bool contains(const Permutation& a) const
    {
        detail::require(a.degree() == degree_, "degree mismatch in membership test");
        return strip(a).first.is_identity();
    }

    /// Adds a generator. Returns false (and changes nothing) if it was
    /// already a member.
    bool extend(const Permutation& g)
    {
        if (contains(g)) return false;
        strong_.push_back(g);
        ensure_moves_base(g);
        rebuild_levels(0);
        complete();
        return true;
    }

    /// Strong generator indices whose product (left to right) is the
    /// transversal element of orbit point beta at the given level.
    std::vector<std::size_t> transversal_word(std::size_t level, Point beta) const
    {
        const auto& lv = levels_.at(level);
        std::vector<std::size_t> rev;
        for (Point p = beta; p != lv.base_point; p = lv.parent[p]) rev.push_back(lv.via[p]);
        return {rev.rbegin(), rev.rend()};
    }

    /// Strong generator indices whose product is a, or nullopt for non-members.
    std::optional<std::vector<std::size_t>> factor(const Permutation& a) const
    {
        detail::require(a.degree() == degree_, "degree mismatch in factorization");
        std::vector<std::vector<std::size_t>> pieces;
        Permutation g = a;
        for (std::size_t k = 0; k < levels_.size(); ++k) {
            const auto& lv = levels_[k];
            const Point beta = g[lv.base_point];
            const auto pos = lv.position[beta];
            if (pos < 0) return std::nullopt;
            pieces.push_back(transversal_word(k, beta));
            g = g * lv.reps[static_cast<std::size_t>(pos)].inverse();
        }
        if (!g.is_identity()) return std::nullopt;
        // a = u_{L-1} ... u_1 u_0
        std::vector<std::size_t> word;
        for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) word.insert(word.end(), it->begin(), it->end());
        return word;
    }

    /// Every element of the group. Throws cap_exceeded above `cap` elements.
    std::vector<Permutation> elements(std::size_t cap = 1'000'000) const
    {
        if (order() > cap) throw cap_exceeded("group order " + order().str() + " exceeds enumeration cap");
        std::vector<Permutation> out{Permutation(degree_)};
        for (std::size_t k = levels_.size(); k-- > 0;) {
            std::vector<Permutation> next;
            next.reserve(out.size() * levels_[k].reps.size());
            for (const auto& x : out)
                for (const auto& u : levels_[k].reps) next.push_back(x * u);
            out = std::move(next);
        }
        return out;
    }

    /// Subgroup test: every generator of `other` is a member of this group.
    bool contains_group(const Bsgs& other) const
    {
        for (const auto& s : other.strong_generators())
            if (!contains(s)) return false;
        return true;
    }

private:
    void ensure_moves_base(const Permutation& g)
    {
        for (Point b : base_points_)
            if (g[b] != b) return;
        for (Point p = 0; p < degree_; ++p) {
            if (g[p] != p) {
                base_points_.push_back(p);
                return;
            }
        }
    }

    void rebuild_levels(std::size_t from)
    {
        levels_.resize(base_points_.size());
        for (std::size_t i = from; i < levels_.size(); ++i) build_level(i);
    }

    void build_level(std::size_t i)
    {
        Level lv;
        lv.base_point = base_points_[i];
        for (std::size_t s = 0; s < strong_.size(); ++s) {
            bool fixes = true;
            for (std::size_t k = 0; k < i && fixes; ++k) fixes = strong_[s][base_points_[k]] == base_points_[k];
            if (fixes) lv.generators.push_back(s);
        }
        lv.position.assign(degree_, -1);
        lv.parent.assign(degree_, 0);
        lv.via.assign(degree_, 0);
        lv.orbit.push_back(lv.base_point);
        lv.reps.emplace_back(degree_);
        lv.position[lv.base_point] = 0;
        for (std::size_t head = 0; head < lv.orbit.size(); ++head) {
            const Point x = lv.orbit[head];
            for (std::size_t s : lv.generators) {
                const Point y = strong_[s][x];
                if (lv.position[y] >= 0) continue;
                lv.position[y] = static_cast<std::int64_t>(lv.orbit.size());
                lv.parent[y] = x;
                lv.via[y] = s;
                lv.orbit.push_back(y);
                lv.reps.push_back(lv.reps[head] * strong_[s]);
            }
        }
        levels_[i] = std::move(lv);
    }

    // Checks every Schreier generator, deepest level first, and repairs the
    // chain whenever one fails to sift.
    void complete()
    {
        std::size_t i = levels_.size();
        while (i > 0) {
            const std::size_t lvl = i - 1;
            bool restarted = false;
            for (std::size_t oi = 0; oi < levels_[lvl].orbit.size() && !restarted; ++oi) {
                // copy: levels_ may be rebuilt below
                const std::vector<std::size_t> gens = levels_[lvl].generators;
                for (std::size_t s : gens) {
                    const auto& lv = levels_[lvl];
                    const Point beta = lv.orbit[oi];
                    const Point img = strong_[s][beta];
                    Permutation y = lv.reps[oi] * strong_[s] *
                                    lv.reps[static_cast<std::size_t>(lv.position[img])].inverse();
                    if (y.is_identity()) continue;
                    auto [h, j] = strip(std::move(y), lvl + 1);
                    if (h.is_identity()) continue;
                    if (j == levels_.size()) {
                        ensure_moves_base(h);
                        levels_.resize(base_points_.size());
                    }
                    strong_.push_back(std::move(h));
                    for (std::size_t k = lvl + 1; k <= j && k < levels_.size(); ++k) build_level(k);
                    i = j + 1;
                    restarted = true;
                    break;
                }
            }
            if (!restarted) --i;
        }
    }

    std::size_t degree_ = 0;
    std::vector<Point> base_points_;
    std::vector<Permutation> strong_;
    std::vector<Level> levels_;
};

inline Bsgs schreier_sims(const std::vector<Permutation>& generators)
{
    detail::require(!generators.empty(), "schreier_sims needs at least one generator");
    return Bsgs(generators.front().degree(), generators);
}

/// A subset of the input generating the same group, of size at most
/// floor(log2 |G|): each generator is kept iff it enlarges the group
/// generated by those kept before it.
inline std::vector<Permutation> reduce_generators(const std::vector<Permutation>& generators)
{
    detail::require(!generators.empty(), "reduce_generators needs at least one generator");
    Bsgs group(generators.front().degree());
    std::vector<Permutation> kept;
    for (const auto& g : generators) {
        detail::require(g.degree() == group.degree(), "degree mismatch in generator list");
        if (group.extend(g)) kept.push_back(g);
    }
    return kept;
}

} // namespace grpmem
