#pragma once

// Straight-line programs over a generator list. Definition i is either a
// generator or the product of two earlier definitions; the program produces
// the value of its last definition (the identity when it has none).

#include <cmath>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "grpmem/bsgs.hpp"
#include "grpmem/errors.hpp"
#include "grpmem/permutation.hpp"

namespace grpmem {

struct SlpStep {
    enum class Kind { generator, product };
    Kind kind = Kind::generator;
    std::size_t left = 0;  // generator index, or first factor
    std::size_t right = 0; // second factor (product steps only)

    static SlpStep gen(std::size_t index) { return {Kind::generator, index, 0}; }
    static SlpStep mul(std::size_t j, std::size_t k) { return {Kind::product, j, k}; }

    friend bool operator==(const SlpStep&, const SlpStep&) = default;
};

struct Slp {
    std::vector<SlpStep> steps;
    Permutation claimed_result;

    std::size_t size() const noexcept { return steps.size(); }

    /// Back-references must point strictly backwards.
    bool well_formed() const
    {
        for (std::size_t i = 0; i < steps.size(); ++i)
            if (steps[i].kind == SlpStep::Kind::product && (steps[i].left >= i || steps[i].right >= i)) return false;
        return true;
    }
};

/// Evaluates every definition with a caller-supplied multiplication, so the
/// same routine drives both concrete permutations and black-box encodings.
template <typename Element, typename Multiply>
std::vector<Element> eval_slp_with(const Slp& program, const std::vector<Element>& generators, Multiply&& mul)
{
    std::vector<Element> values;
    values.reserve(program.steps.size());
    for (std::size_t i = 0; i < program.steps.size(); ++i) {
        const auto& st = program.steps[i];
        if (st.kind == SlpStep::Kind::generator) {
            detail::require(st.left < generators.size(), "generator index out of range in straight-line program");
            values.push_back(generators[st.left]);
        } else {
            detail::require(st.left < i && st.right < i,
                            "straight-line program back-reference does not point backwards at step " +
                                std::to_string(i));
            values.push_back(mul(values[st.left], values[st.right]));
        }
    }
    return values;
}

inline Permutation eval_slp(const Slp& program, const std::vector<Permutation>& generators, std::size_t degree)
{
    auto values = eval_slp_with(program, generators, [](const Permutation& a, const Permutation& b) { return a * b; });
    if (values.empty()) return Permutation(degree);
    return values.back();
}

inline Permutation eval_slp(const Slp& program, const std::vector<Permutation>& generators)
{
    detail::require(!generators.empty() || program.steps.empty(), "no generators supplied");
    return eval_slp(program, generators, generators.empty() ? 0 : generators.front().degree());
}

/// The size bound (1 + log2 |G|)^2 of the reachability theorem.
inline double reachability_bound(const BigInt& group_order)
{
    const double lg = std::log2(group_order.convert_to<double>());
    return (1.0 + lg) * (1.0 + lg);
}

/// Builds a program over the strong generators of `group` producing `a`,
/// from the transversal words of the stabilizer chain. Each generator used
/// is defined once, then the word is folded left to right.
inline Slp factor_as_slp(const Bsgs& group, const Permutation& a)
{
    auto word = group.factor(a);
    if (!word) throw input_error("element " + a.to_string() + " is not in the group");
    Slp prog;
    prog.claimed_result = a;
    std::unordered_map<std::size_t, std::size_t> defined;
    for (std::size_t g : *word) {
        if (defined.contains(g)) continue;
        defined[g] = prog.steps.size();
        prog.steps.push_back(SlpStep::gen(g));
    }
    if (word->empty()) return prog;
    std::size_t acc = defined.at(word->front());
    for (std::size_t k = 1; k < word->size(); ++k) {
        prog.steps.push_back(SlpStep::mul(acc, defined.at((*word)[k])));
        acc = prog.steps.size() - 1;
    }
    return prog;
}

} // namespace grpmem
