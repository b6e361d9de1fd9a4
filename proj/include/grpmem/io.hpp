#pragma once

// Text formats. All points and states are 1-based; '#' starts a comment.
//
//   group / knapsack    degree m
//                       target (1 2)          knapsack only
//                       (1 2 3)(4 5)          one permutation per line
//   grammar             degree m              when terminals are permutations
//                       start S
//                       prod A -> B C
//                       prod A -> (1 2)(3 4)
//                       prod A -> 'x'
//   DFA                 states n / initial i / final j k ... / trans p a q
//   group NFA           degree m / states n / initial i ... / final j ... / trans p (1 2) q
//   X3HS                n, then one triple "a b c" per line

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grpmem/automata.hpp"
#include "grpmem/cfg.hpp"
#include "grpmem/errors.hpp"
#include "grpmem/knapsack.hpp"
#include "grpmem/permutation.hpp"
#include "grpmem/reductions.hpp"

namespace grpmem::io {

struct Line {
    std::size_t number = 0;
    std::string text; // comment stripped, trimmed
};

inline std::string trim(std::string_view s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline std::vector<Line> lines_of(std::string_view text)
{
    std::vector<Line> out;
    std::size_t number = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        auto t = trim(raw);
        if (!t.empty()) out.push_back({number, std::move(t)});
    }
    return out;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

namespace detail {

[[noreturn]] inline void fail(const Line& l, const std::string& what)
{
    throw input_error("line " + std::to_string(l.number) + ": " + what);
}

// Splits off the first word: "trans 1 a 2" -> ("trans", "1 a 2").
inline std::pair<std::string, std::string> keyword(const Line& l)
{
    auto sp = l.text.find_first_of(" \t");
    if (sp == std::string::npos) return {l.text, ""};
    return {l.text.substr(0, sp), trim(std::string_view(l.text).substr(sp))};
}

inline std::vector<std::string> words(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

inline std::size_t number(const Line& l, const std::string& w)
{
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(w, &pos);
    } catch (const std::exception&) {
        fail(l, "expected a number, got '" + w + "'");
    }
    if (pos != w.size()) fail(l, "expected a number, got '" + w + "'");
    return static_cast<std::size_t>(v);
}

// 1-based index in 1..n, returned 0-based.
inline std::size_t index(const Line& l, const std::string& w, std::size_t n, const char* what)
{
    const auto v = number(l, w);
    if (v < 1 || v > n) fail(l, std::string(what) + " " + w + " is outside 1.." + std::to_string(n));
    return v - 1;
}

inline Permutation permutation(const Line& l, const std::string& text, std::optional<std::size_t> degree)
{
    if (!degree) fail(l, "a 'degree m' line must come before any permutation");
    try {
        return parse_permutation(text, *degree);
    } catch (const input_error& e) {
        fail(l, e.what());
    }
}

} // namespace detail

struct PermutationList {
    std::size_t degree = 0;
    std::optional<Permutation> target;
    std::vector<Permutation> items;
};

/// Group and knapsack files.
inline PermutationList parse_permutation_list(std::string_view text)
{
    PermutationList out;
    std::optional<std::size_t> degree;
    for (const auto& l : lines_of(text)) {
        auto [key, rest] = detail::keyword(l);
        if (key == "degree") {
            if (degree) detail::fail(l, "duplicate degree line");
            degree = detail::number(l, rest);
            out.degree = *degree;
        } else if (key == "target") {
            if (out.target) detail::fail(l, "duplicate target line");
            out.target = detail::permutation(l, rest, degree);
        } else {
            out.items.push_back(detail::permutation(l, l.text, degree));
        }
    }
    if (!degree) throw input_error("missing 'degree m' line");
    return out;
}

inline std::vector<Permutation> parse_group(std::string_view text, std::size_t* degree = nullptr)
{
    auto list = parse_permutation_list(text);
    if (list.target) throw input_error("group files have no target line");
    if (degree) *degree = list.degree;
    return list.items;
}

inline KnapsackInstance parse_knapsack(std::string_view text, ExponentDomain domain)
{
    auto list = parse_permutation_list(text);
    if (!list.target) throw input_error("knapsack file needs a 'target' line");
    KnapsackInstance k;
    k.degree = list.degree;
    k.target = *list.target;
    k.factors = std::move(list.items);
    k.domain = domain;
    k.validate();
    return k;
}

inline std::string write_permutation_list(std::size_t degree, const std::optional<Permutation>& target,
                                          const std::vector<Permutation>& items)
{
    std::string s = "degree " + std::to_string(degree) + "\n";
    if (target) s += "target " + target->to_string() + "\n";
    for (const auto& a : items) s += a.to_string() + "\n";
    return s;
}

inline std::string write_knapsack(const KnapsackInstance& k)
{
    return write_permutation_list(k.degree, k.target, k.factors);
}

/// A grammar file holds either permutation or letter terminals.
struct ParsedGrammar {
    bool permutations = false;
    Cfg<Permutation> perm;
    Cfg<std::string> letters;
};

inline ParsedGrammar parse_grammar(std::string_view text)
{
    ParsedGrammar out;
    std::optional<std::size_t> degree;
    std::optional<bool> kind; // true = permutation terminals
    std::optional<std::string> start;
    // rules are buffered until the terminal kind is known; without a start
    // line the first left-hand side is the start symbol
    struct Rule {
        Line line;
        std::string lhs;
        std::vector<std::string> rhs; // two names, or one terminal token
        bool terminal = false;
    };
    std::vector<Rule> rules;
    for (const auto& l : lines_of(text)) {
        auto [key, rest] = detail::keyword(l);
        if (key == "degree") {
            if (degree) detail::fail(l, "duplicate degree line");
            degree = detail::number(l, rest);
        } else if (key == "start") {
            if (start) detail::fail(l, "duplicate start line");
            if (rest.empty() || detail::words(rest).size() != 1) detail::fail(l, "expected 'start NAME'");
            start = rest;
        } else if (key == "prod") {
            auto arrow = rest.find("->");
            if (arrow == std::string::npos) detail::fail(l, "expected 'prod A -> ...'");
            Rule r{l, trim(std::string_view(rest).substr(0, arrow)), {}, false};
            auto rhs = trim(std::string_view(rest).substr(arrow + 2));
            if (r.lhs.empty() || detail::words(r.lhs).size() != 1) detail::fail(l, "bad left-hand side");
            if (rhs.empty()) detail::fail(l, "empty right-hand side (CNF has no epsilon rules)");
            bool is_perm = rhs.front() == '(';
            bool is_letter = rhs.front() == '\'';
            if (is_perm || is_letter) {
                if (is_letter && (rhs.size() < 3 || rhs.back() != '\''))
                    detail::fail(l, "letters are written as 'x'");
                if (kind && *kind != is_perm) detail::fail(l, "grammar mixes permutation and letter terminals");
                kind = is_perm;
                r.terminal = true;
                r.rhs = {is_letter ? rhs.substr(1, rhs.size() - 2) : rhs};
            } else {
                r.rhs = detail::words(rhs);
                if (r.rhs.size() != 2) detail::fail(l, "binary rules need exactly two nonterminals");
            }
            rules.push_back(std::move(r));
        } else {
            detail::fail(l, "unknown keyword '" + key + "'");
        }
    }
    out.permutations = kind.value_or(degree.has_value());
    if (out.permutations && !degree) throw input_error("permutation grammars need a 'degree m' line");

    auto build = [&](auto& g, auto&& terminal) {
        if (start) g.add_nonterminal(*start);
        for (const auto& r : rules) g.add_nonterminal(r.lhs);
        for (const auto& r : rules) {
            const auto lhs = *g.find(r.lhs);
            if (r.terminal) {
                g.add_terminal(lhs, terminal(r));
            } else {
                g.add_binary(lhs, g.add_nonterminal(r.rhs[0]), g.add_nonterminal(r.rhs[1]));
            }
        }
        if (g.nonterminal_count() == 0) throw input_error("grammar declares no nonterminals");
        g.set_start(0);
    };
    if (out.permutations) {
        build(out.perm, [&](const Rule& r) { return detail::permutation(r.line, r.rhs[0], degree); });
        out.perm.set_degree(*degree);
    } else {
        build(out.letters, [](const Rule& r) { return r.rhs[0]; });
    }
    return out;
}

template <typename T, typename Show>
std::string write_grammar(const Cfg<T>& g, Show&& show, std::optional<std::size_t> degree)
{
    std::string s;
    if (degree) s += "degree " + std::to_string(*degree) + "\n";
    s += "start " + g.name(g.start()) + "\n";
    for (const auto& p : g.productions()) {
        s += "prod " + g.name(p.lhs) + " -> ";
        s += p.is_binary() ? g.name(p.left) + " " + g.name(p.right) : show(g.terminal_of(p));
        s += "\n";
    }
    return s;
}

inline std::string write_grammar(const Cfg<Permutation>& g)
{
    return write_grammar(g, [](const Permutation& a) { return a.to_string(); }, g.degree());
}

inline std::string write_grammar(const Cfg<std::string>& g)
{
    return write_grammar(g, [](const std::string& a) { return "'" + a + "'"; }, std::nullopt);
}

inline Dfa parse_dfa(std::string_view text)
{
    Dfa d;
    std::optional<std::size_t> states;
    std::vector<std::pair<Line, std::string>> deferred; // initial/final/trans need `states`
    for (const auto& l : lines_of(text)) {
        auto [key, rest] = detail::keyword(l);
        if (key == "states") {
            if (states) detail::fail(l, "duplicate states line");
            states = detail::number(l, rest);
            if (*states == 0) detail::fail(l, "a DFA needs at least one state");
        } else if (key == "initial" || key == "final" || key == "trans") {
            deferred.emplace_back(l, key);
        } else {
            detail::fail(l, "unknown keyword '" + key + "'");
        }
    }
    if (!states) throw input_error("missing 'states n' line");
    d.states = *states;
    d.final.assign(d.states, false);
    bool have_initial = false;
    std::vector<std::pair<Line, std::vector<std::string>>> trans;
    for (const auto& [l, key] : deferred) {
        auto w = detail::words(detail::keyword(l).second);
        if (key == "initial") {
            if (have_initial || w.size() != 1) detail::fail(l, "a DFA has exactly one initial state");
            d.initial = detail::index(l, w[0], d.states, "state");
            have_initial = true;
        } else if (key == "final") {
            for (const auto& x : w) d.final[detail::index(l, x, d.states, "state")] = true;
        } else {
            if (w.size() != 3) detail::fail(l, "expected 'trans p a q'");
            if (std::find(d.letters.begin(), d.letters.end(), w[1]) == d.letters.end()) d.letters.push_back(w[1]);
            trans.emplace_back(l, std::move(w));
        }
    }
    if (!have_initial) throw input_error("missing 'initial i' line");
    d.delta.assign(d.states, std::vector<std::size_t>(d.letters.size(), grpmem::npos));
    for (const auto& [l, w] : trans) {
        const auto p = detail::index(l, w[0], d.states, "state"), q = detail::index(l, w[2], d.states, "state");
        const auto a = static_cast<std::size_t>(std::find(d.letters.begin(), d.letters.end(), w[1]) - d.letters.begin());
        if (d.delta[p][a] != grpmem::npos && d.delta[p][a] != q)
            detail::fail(l, "second transition for the same state and letter");
        d.delta[p][a] = q;
    }
    for (std::size_t p = 0; p < d.states; ++p)
        for (std::size_t a = 0; a < d.letters.size(); ++a)
            if (d.delta[p][a] == grpmem::npos)
                throw input_error("DFA has no transition from state " + std::to_string(p + 1) + " on '" +
                                  d.letters[a] + "'");
    d.validate();
    return d;
}

inline std::string write_dfa(const Dfa& d)
{
    std::string s = "states " + std::to_string(d.states) + "\ninitial " + std::to_string(d.initial + 1) + "\nfinal";
    for (std::size_t q = 0; q < d.states; ++q)
        if (d.final[q]) s += " " + std::to_string(q + 1);
    s += "\n";
    for (std::size_t q = 0; q < d.states; ++q)
        for (std::size_t a = 0; a < d.letters.size(); ++a)
            s += "trans " + std::to_string(q + 1) + " " + d.letters[a] + " " + std::to_string(d.delta[q][a] + 1) + "\n";
    return s;
}

inline GroupNfa parse_nfa(std::string_view text)
{
    GroupNfa a;
    std::optional<std::size_t> degree, states;
    std::vector<std::pair<Line, std::string>> deferred; // initial/final/trans need `states`
    for (const auto& l : lines_of(text)) {
        auto [key, rest] = detail::keyword(l);
        if (key == "degree") {
            if (degree) detail::fail(l, "duplicate degree line");
            degree = detail::number(l, rest);
        } else if (key == "states") {
            if (states) detail::fail(l, "duplicate states line");
            states = detail::number(l, rest);
        } else if (key == "initial" || key == "final" || key == "trans") {
            deferred.emplace_back(l, key);
        } else {
            detail::fail(l, "unknown keyword '" + key + "'");
        }
    }
    if (!degree) throw input_error("missing 'degree m' line");
    if (!states) throw input_error("missing 'states n' line");
    a.degree = *degree;
    a.states = *states;
    for (const auto& [l, key] : deferred) {
        const auto rest = detail::keyword(l).second;
        if (key == "trans") {
            auto open = rest.find('('), close = rest.rfind(')');
            if (open == std::string::npos || close == std::string::npos || close < open)
                detail::fail(l, "expected 'trans p (cycles) q'");
            auto from = detail::words(rest.substr(0, open)), to = detail::words(rest.substr(close + 1));
            if (from.size() != 1 || to.size() != 1) detail::fail(l, "expected 'trans p (cycles) q'");
            a.transitions.push_back({detail::index(l, from[0], a.states, "state"),
                                     detail::permutation(l, rest.substr(open, close - open + 1), degree),
                                     detail::index(l, to[0], a.states, "state")});
        } else {
            auto& into = key == "initial" ? a.initial : a.final;
            for (const auto& w : detail::words(rest)) into.push_back(detail::index(l, w, a.states, "state"));
        }
    }
    a.validate();
    return a;
}

inline std::string write_nfa(const GroupNfa& a)
{
    std::string s = "degree " + std::to_string(a.degree) + "\nstates " + std::to_string(a.states) + "\ninitial";
    for (auto q : a.initial) s += " " + std::to_string(q + 1);
    s += "\nfinal";
    for (auto q : a.final) s += " " + std::to_string(q + 1);
    s += "\n";
    for (const auto& t : a.transitions)
        s += "trans " + std::to_string(t.from + 1) + " " + t.label.to_string() + " " + std::to_string(t.to + 1) + "\n";
    return s;
}

/// Rejects triples with repeated members.
inline X3hsInstance parse_x3hs(std::string_view text)
{
    X3hsInstance inst;
    auto ls = lines_of(text);
    if (ls.empty()) throw input_error("empty X3HS file");
    auto head = detail::words(ls[0].text);
    if (head.size() != 1) detail::fail(ls[0], "first line must be the ground set size n");
    inst.n = detail::number(ls[0], head[0]);
    for (std::size_t i = 1; i < ls.size(); ++i) {
        auto w = detail::words(ls[i].text);
        if (w.size() != 3) detail::fail(ls[i], "expected three elements");
        std::array<std::size_t, 3> c{};
        for (std::size_t k = 0; k < 3; ++k) c[k] = detail::index(ls[i], w[k], inst.n, "element");
        if (c[0] == c[1] || c[0] == c[2] || c[1] == c[2]) detail::fail(ls[i], "set has a repeated element");
        inst.sets.push_back(c);
    }
    return inst;
}

inline std::string write_x3hs(const X3hsInstance& inst)
{
    std::string s = std::to_string(inst.n) + "\n";
    for (const auto& c : inst.sets)
        s += std::to_string(c[0] + 1) + " " + std::to_string(c[1] + 1) + " " + std::to_string(c[2] + 1) + "\n";
    return s;
}

} // namespace grpmem::io
