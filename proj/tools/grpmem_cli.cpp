// grpmem: command-line front end. Every subcommand prints one JSON report
// and exits with
//   0 decided, 1 decided "no" under --fail-on-no, 2 input error,
//   3 cap exceeded, 4 oracle disagreement or internal invariant failure.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grpmem/blackbox.hpp"
#include "grpmem/bsgs.hpp"
#include "grpmem/cf_membership.hpp"
#include "grpmem/cfg.hpp"
#include "grpmem/generate.hpp"
#include "grpmem/intersection.hpp"
#include "grpmem/io.hpp"
#include "grpmem/knapsack.hpp"
#include "grpmem/rational.hpp"
#include "grpmem/reductions.hpp"
#include "grpmem/slp.hpp"

#ifndef GRPMEM_VERSION
#define GRPMEM_VERSION "0.0.0"
#endif

namespace {

using json = nlohmann::ordered_json;
using namespace grpmem;

enum Exit { decided = 0, answered_no = 1, bad_input = 2, over_cap = 3, disagreement = 4 };

// 64-bit FNV-1a
std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL)
{
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex(std::uint64_t v)
{
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 15];
    return s;
}

// Cap default: GRPMEM_CAP_<NAME> from the environment, else `fallback`.
std::uint64_t cap_default(const char* name, std::uint64_t fallback)
{
    const std::string var = std::string("GRPMEM_CAP_") + name;
    if (const char* v = std::getenv(var.c_str())) {
        try {
            return std::stoull(v);
        } catch (const std::exception&) {
            throw input_error(var + " is not a number");
        }
    }
    return fallback;
}

struct Caps {
    std::uint64_t cfm_degree = 5;
    std::uint64_t rational_degree = 8;
    std::uint64_t configurations = 50'000'000;
    std::uint64_t knapsack_states = 5'000'000;
    std::uint64_t outer = 10'000'000;
    std::uint64_t product_states = 512;
    std::uint64_t elements = 1'000'000;
    std::uint64_t blackbox = 100'000;

    void load_env()
    {
        cfm_degree = cap_default("CFM_DEGREE", cfm_degree);
        rational_degree = cap_default("RATIONAL_DEGREE", rational_degree);
        configurations = cap_default("CONFIGURATIONS", configurations);
        knapsack_states = cap_default("KNAPSACK_STATES", knapsack_states);
        outer = cap_default("OUTER", outer);
        product_states = cap_default("PRODUCT_STATES", product_states);
        elements = cap_default("ELEMENTS", elements);
        blackbox = cap_default("BLACKBOX", blackbox);
    }
};

struct Report {
    json j;
    std::string hashed; // instance bytes
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit Report(std::string problem)
    {
        j["tool"] = "grpmem";
        j["version"] = GRPMEM_VERSION;
        j["problem"] = std::move(problem);
        j["instance_hash"] = nullptr;
        j["decision"] = nullptr;
        j["stats"] = json::object();
    }

    void hash(const std::string& bytes)
    {
        hashed += bytes;
        hashed += '\0';
    }

    void oracle(bool agree, const std::string& what)
    {
        j["oracle_agreement"] = agree;
        if (!agree) j["disagreement"] = what;
    }

    json finish()
    {
        j["instance_hash"] = hex(fnv1a(hashed));
        j["stats"]["elapsed_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return j;
    }
};

std::string big(const BigInt& v) { return v.str(); }

json exponents_json(const std::vector<std::uint64_t>& e)
{
    json a = json::array();
    for (auto x : e) a.push_back(x);
    return a;
}

json tree_json(const Cfg<Permutation>& g, const DerivationTree& t, const std::vector<GroupPair>& deco, std::size_t& next)
{
    json node;
    node["nonterminal"] = g.name(t.nonterminal);
    const auto& p = g.productions()[t.production];
    node["production"] = t.production + 1;
    node["g"] = deco[next].g.to_string();
    node["h"] = deco[next].h.to_string();
    ++next;
    if (!p.is_binary()) {
        node["terminal"] = g.terminal_of(p).to_string();
    } else {
        node["children"] = json::array();
        for (const auto& c : t.children) node["children"].push_back(tree_json(g, c, deco, next));
    }
    return node;
}

json orders_json(const std::vector<BigInt>& orders)
{
    json a = json::array();
    for (const auto& o : orders) a.push_back(big(o));
    return a;
}

// Breadth-first closure of the generators, independent of the stabilizer chain.
std::unordered_set<Permutation> closure(std::size_t m, const std::vector<Permutation>& gens, std::uint64_t cap)
{
    std::unordered_set<Permutation> seen{Permutation(m)};
    std::vector<Permutation> queue{Permutation(m)};
    for (std::size_t head = 0; head < queue.size(); ++head)
        for (const auto& g : gens) {
            auto y = queue[head] * g;
            if (!seen.insert(y).second) continue;
            if (seen.size() > cap) throw cap_exceeded("group enumeration exceeds the element cap");
            queue.push_back(std::move(y));
        }
    return seen;
}

// ---- subcommands ------------------------------------------------------

struct MemberArgs {
    std::string group, elem;
    bool oracle = false;
};

json run_member(const MemberArgs& a, const Caps& caps)
{
    Report r("member");
    const auto text = io::read_file(a.group);
    r.hash(text);
    r.hash(a.elem);
    std::size_t m = 0;
    const auto gens = io::parse_group(text, &m);
    const auto target = parse_permutation(a.elem, m);
    const Bsgs group(m, gens);
    const auto word = group.factor(target);
    r.j["decision"] = word.has_value();
    r.j["stats"]["order"] = big(group.order());
    r.j["stats"]["base_length"] = group.base().size();
    if (word) {
        json strong = json::array();
        for (const auto& s : group.strong_generators()) strong.push_back(s.to_string());
        json w = json::array();
        for (auto i : *word) w.push_back(i + 1);
        r.j["certificate"] = {{"strong_generators", strong}, {"word", w}, {"slp_size", factor_as_slp(group, target).size()}};
    }
    if (a.oracle) {
        const bool brute = closure(m, gens, caps.elements).contains(target);
        r.oracle(brute == word.has_value(), "element enumeration disagrees with the stabilizer chain");
    }
    return r.finish();
}

struct RationalArgs {
    std::string nfa, target, method = "bfs";
};

json run_rational(const RationalArgs& a, const Caps& caps)
{
    Report r("rational");
    const auto text = io::read_file(a.nfa);
    r.hash(text);
    r.hash(a.target);
    const auto nfa = io::parse_nfa(text);
    const auto target = parse_permutation(a.target, nfa.degree);
    std::optional<bool> bfs, sub;
    if (a.method == "bfs" || a.method == "both") {
        RationalOptions opt;
        opt.max_degree = caps.rational_degree;
        opt.max_configurations = caps.configurations;
        const auto res = rational_membership(nfa, target, opt);
        bfs = res.member;
        r.j["stats"]["configurations"] = res.configurations;
        if (res.member) {
            json run = json::array();
            for (auto i : res.witness) run.push_back(i + 1);
            r.j["certificate"] = {{"run", run}};
        }
    }
    if (a.method == "subgroup" || a.method == "both") {
        sub = rational_membership_by_subgroup(nfa, target);
        if (!sub) {
            r.j["stats"]["subgroup_method"] = "not applicable: automaton is not in single-base-state form";
            if (a.method == "subgroup") throw input_error("subgroup method needs initial = final = one state");
        } else {
            r.j["stats"]["subgroup_order"] = big(accepted_subgroup(nfa).order());
        }
    }
    r.j["decision"] = bfs ? *bfs : *sub;
    if (bfs && sub) r.oracle(*bfs == *sub, "subgroup method disagrees with breadth-first search");
    return r.finish();
}

struct CfmArgs {
    std::string grammar, target;
    bool oracle = false;
};

json run_cfm(const CfmArgs& a, const Caps& caps)
{
    Report r("cfm");
    const auto text = io::read_file(a.grammar);
    r.hash(text);
    r.hash(a.target);
    auto parsed = io::parse_grammar(text);
    if (!parsed.permutations) throw input_error("cfm needs a grammar with permutation terminals");
    const auto& g = parsed.perm;
    const auto target = parse_permutation(a.target, g.degree());
    CfmOptions opt;
    opt.max_degree = caps.cfm_degree;
    const auto res = cf_membership(g, target, opt);
    r.j["decision"] = res.member;
    r.j["stats"]["iterations"] = res.fixed.iterations;
    r.j["stats"]["bound"] = fixed_point_bound(g.nonterminal_count(), g.degree());
    json orders = json::object();
    for (std::size_t i = 0; i < g.nonterminal_count(); ++i) orders[g.name(i)] = big(res.fixed.subgroups[i].order());
    r.j["stats"]["orders"] = orders;
    json rounds = json::array();
    for (const auto& o : res.fixed.orders) rounds.push_back(orders_json(o));
    r.j["stats"]["orders_per_round"] = rounds;
    if (res.certificate) {
        std::size_t next = 0;
        r.j["certificate"] = tree_json(g, res.certificate->tree, res.certificate->decorations, next);
        const auto value = evaluate_decorated_tree(g, *res.certificate, res.fixed.subgroups);
        if (value != target) throw invariant_error("certificate does not evaluate to the target");
    }
    if (a.oracle) {
        const auto langs = oracle_semantics(g, opt);
        bool same = langs[g.start()].contains(target) == res.member;
        for (std::size_t i = 0; i < langs.size(); ++i) same = same && langs[i] == res.fixed.languages[i];
        r.oracle(same, "fixed point disagrees with the direct language fixpoint");
    }
    return r.finish();
}

struct CfgkArgs {
    std::string grammar, method = "dp";
    std::size_t k = 1;
};

template <typename T>
void cfgk_on(Report& r, const Cfg<T>& g, const CfgkArgs& a)
{
    std::optional<bool> dp, cert;
    if (a.method == "dp" || a.method == "both") dp = check_cfg_k(g, a.k);
    if (a.method == "certificate" || a.method == "both") {
        const auto res = check_cfg_k_by_certificates(g, a.k);
        cert = res.in_class;
        static const char* kinds[] = {"none", "small tree with large rank", "large partial tree"};
        r.j["certificate"] = {{"refutation", kinds[static_cast<int>(res.witness)]}};
    }
    const auto hs = max_acyclic_hs(g);
    r.j["stats"]["max_acyclic_hs"] = hs ? json(*hs) : json(nullptr);
    r.j["decision"] = dp ? *dp : *cert;
    if (dp && cert) r.oracle(*dp == *cert, "certificate search disagrees with the rank program");
}

json run_cfgk(const CfgkArgs& a)
{
    Report r("cfgk");
    const auto text = io::read_file(a.grammar);
    r.hash(text);
    r.hash(std::to_string(a.k));
    auto parsed = io::parse_grammar(text);
    if (parsed.permutations)
        cfgk_on(r, parsed.perm, a);
    else
        cfgk_on(r, parsed.letters, a);
    return r.finish();
}

struct KnapsackArgs {
    std::string instance, method = "dfs";
    std::size_t k = 0;
    bool oracle = false;
};

// Exhaustive check over exponents below the factor orders (or 0/1).
bool knapsack_by_enumeration(const KnapsackInstance& k, std::uint64_t cap)
{
    std::vector<std::uint64_t> bound, e(k.factors.size(), 0);
    std::uint64_t total = 1;
    for (const auto& f : k.factors) {
        const std::uint64_t b = k.domain == ExponentDomain::binary ? 2 : f.order().convert_to<std::uint64_t>();
        bound.push_back(b);
        if (total > cap / b) throw cap_exceeded("exhaustive exponent search exceeds the element cap");
        total *= b;
    }
    for (;;) {
        if (evaluate_exponents(k.factors, e, k.degree) == k.target) return true;
        std::size_t i = 0;
        while (i < e.size() && ++e[i] == bound[i]) e[i++] = 0;
        if (i == e.size()) return false;
    }
}

json run_knapsack(const std::string& problem, const KnapsackArgs& a, const Caps& caps)
{
    Report r(problem);
    const auto text = io::read_file(a.instance);
    r.hash(text);
    const auto domain = problem == "subsetsum" ? ExponentDomain::binary : ExponentDomain::natural;
    auto inst = io::parse_knapsack(text, domain);
    if (problem == "kknapsack") {
        inst.fixed_k = a.k;
        inst.validate();
    }
    KnapsackOptions opt;
    opt.max_states = caps.knapsack_states;
    KnapsackResult res;
    if (problem == "subsetsum") {
        const auto method = a.method == "mitm"         ? SubsetSumMethod::meet_in_middle
                            : a.method == "exhaustive" ? SubsetSumMethod::exhaustive
                                                       : SubsetSumMethod::memo_dfs;
        res = solve_subset_sum(inst, method, opt);
    } else {
        res = solve_knapsack(inst, opt);
    }
    r.j["decision"] = res.exponents.has_value();
    r.j["stats"]["states"] = res.states;
    if (res.exponents) r.j["certificate"] = {{"assignment", exponents_json(*res.exponents)}};
    if (a.oracle) r.oracle(knapsack_by_enumeration(inst, caps.elements) == res.exponents.has_value(),
                           "solver disagrees with exhaustive exponent search");
    return r.finish();
}

json run_2knapsack(const KnapsackArgs& a, const Caps& caps)
{
    Report r("2knapsack");
    const auto text = io::read_file(a.instance);
    r.hash(text);
    auto inst = io::parse_knapsack(text, ExponentDomain::natural);
    inst.fixed_k = 2;
    inst.validate();
    TwoKnapsackOptions opt;
    opt.max_outer = caps.outer;
    const auto res = solve_2_knapsack(inst.factors[0], inst.factors[1], inst.target, opt);
    r.j["decision"] = res.has_value();
    r.j["stats"]["factor_orders"] = {big(inst.factors[0].order()), big(inst.factors[1].order())};
    if (res) r.j["certificate"] = {{"assignment", {big(res->first), big(res->second)}}};
    if (a.oracle) {
        KnapsackOptions kopt;
        kopt.max_states = caps.knapsack_states;
        bool agree = solve_knapsack(inst, kopt).exponents.has_value() == res.has_value();
        if (res) agree = agree && check_kronecker_equivalence(inst.factors[0], inst.factors[1], inst.target, res->first,
                                                              res->second);
        r.oracle(agree, "2-knapsack disagrees with the general solver or the Kronecker identity");
    }
    return r.finish();
}

struct ReduceArgs {
    std::string kind, instance, g, h, target, output;
    bool verify = false;
};

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write '" + path + "'");
    out << text;
}

json run_reduce(const ReduceArgs& a, const Caps& caps)
{
    Report r("reduce " + a.kind);
    KnapsackOptions kopt;
    kopt.max_states = caps.knapsack_states;
    if (a.kind == "x3hs-subsetsum" || a.kind == "x3hs-3knapsack") {
        if (a.instance.empty()) throw input_error("--instance is required");
        const auto text = io::read_file(a.instance);
        r.hash(text);
        const auto inst = io::parse_x3hs(text);
        r.j["stats"]["n"] = inst.n;
        r.j["stats"]["sets"] = inst.sets.size();
        std::optional<std::vector<std::size_t>> truth;
        if (a.verify) {
            truth = solve_x3hs(inst);
            r.j["decision"] = truth.has_value();
            if (truth) {
                json s = json::array();
                for (auto x : *truth) s.push_back(x + 1);
                r.j["certificate"] = {{"hitting_set", s}};
            }
        }
        if (a.kind == "x3hs-subsetsum") {
            const auto z3 = reduce_x3hs_to_subsetsum_z3(inst);
            const auto sym = embed_z3_subset_sum(z3);
            r.j["stats"]["degree"] = sym.degree;
            r.j["stats"]["items"] = sym.factors.size();
            write_output(a.output, io::write_knapsack(sym));
            if (a.verify) {
                const bool additive = solve_z3_subset_sum(z3).has_value();
                const bool perm = solve_subset_sum(sym, SubsetSumMethod::memo_dfs, kopt).exponents.has_value();
                r.oracle(additive == truth.has_value() && perm == truth.has_value(),
                         "X3HS, Z3 subset sum and permutation subset sum disagree");
            }
        } else {
            const auto red = reduce_x3hs_to_3knapsack(inst);
            r.j["stats"]["degree"] = red.degree;
            json blocks = json::array();
            for (const auto& b : red.blocks) blocks.push_back({{"name", b.name}, {"first", b.offset + 1}, {"size", b.size}});
            r.j["stats"]["blocks"] = blocks;
            json primes;
            primes["p"] = red.p;
            primes["r"] = red.r;
            primes["q"] = red.q;
            r.j["stats"]["primes"] = primes;
            write_output(a.output, io::write_knapsack(red.instance()));
            if (a.verify) {
                const auto sigma = red.residue_solve();
                bool agree = sigma.has_value() == truth.has_value();
                if (truth) {
                    std::vector<bool> chosen(inst.n, false);
                    for (auto x : *truth) chosen[x] = true;
                    const auto z = red.exponents_from(chosen);
                    agree = agree && red.verify(z);
                    r.j["certificate"]["exponents"] = {big(z[0]), big(z[1]), big(z[2])};
                }
                r.oracle(agree, "3-knapsack residue check disagrees with X3HS");
            }
        }
    } else if (a.kind == "ghg-knapsack") {
        if (a.g.empty() || a.h.empty() || a.target.empty()) throw input_error("--group-g, --group-h and --target are required");
        const auto gt = io::read_file(a.g), ht = io::read_file(a.h);
        r.hash(gt);
        r.hash(ht);
        r.hash(a.target);
        std::size_t mg = 0, mh = 0;
        const auto gens_g = io::parse_group(gt, &mg), gens_h = io::parse_group(ht, &mh);
        if (mg != mh) throw input_error("the two groups have different degrees");
        const auto s = parse_permutation(a.target, mg);
        const auto k = reduce_product_membership_to_knapsack(gens_g, gens_h, s);
        r.j["stats"]["factors"] = k.factors.size();
        write_output(a.output, io::write_knapsack(k));
        if (a.verify) {
            const auto res = solve_knapsack(k, kopt);
            r.j["decision"] = res.exponents.has_value();
            if (res.exponents) r.j["certificate"] = {{"assignment", exponents_json(*res.exponents)}};
            const auto G = closure(mg, gens_g, caps.elements), H = closure(mg, gens_h, caps.elements);
            bool brute = false;
            for (auto x = G.begin(); x != G.end() && !brute; ++x)
                for (auto y = H.begin(); y != H.end() && !brute; ++y) brute = G.contains((*x * *y).inverse() * s);
            r.oracle(brute == res.exponents.has_value(), "knapsack disagrees with enumeration of G H G");
        }
    } else {
        throw input_error("unknown reduction '" + a.kind + "'");
    }
    return r.finish();
}

struct IntersectArgs {
    std::string grammar;
    std::vector<std::string> dfas;
    bool oracle = false;
};

json run_intersect(const IntersectArgs& a, const Caps& caps)
{
    Report r("intersect");
    const auto text = io::read_file(a.grammar);
    r.hash(text);
    auto parsed = io::parse_grammar(text);
    if (parsed.permutations) throw input_error("intersect needs a grammar over letters");
    std::vector<Dfa> dfas;
    for (const auto& f : a.dfas) {
        const auto t = io::read_file(f);
        r.hash(t);
        dfas.push_back(io::parse_dfa(t));
    }
    BarHillelOptions bopt;
    bopt.max_product_states = caps.product_states;
    bool all_group = true;
    std::size_t states = 0;
    for (const auto& d : dfas) {
        all_group = all_group && is_group_dfa(d);
        states += d.states;
    }
    std::optional<bool> via_cfm, via_product;
    if (all_group && states <= max_dense_degree) {
        const auto red = reduce_intersection_to_cfm(dfas, parsed.letters);
        via_cfm = decide_reduced_intersection(red);
        r.j["stats"]["method"] = "permutation grammar";
        r.j["stats"]["degree"] = red.degree;
    }
    if (!via_cfm || a.oracle) {
        via_product = barhillel_oracle(dfas, parsed.letters, bopt);
        if (!via_cfm) r.j["stats"]["method"] = "product construction";
    }
    r.j["decision"] = via_cfm ? *via_cfm : *via_product;
    if (a.oracle) {
        if (!via_cfm) throw input_error("--oracle needs group DFAs with at most " + std::to_string(max_dense_degree) +
                                        " states in total");
        r.oracle(*via_cfm == *via_product, "reduction disagrees with the product construction");
    }
    return r.finish();
}

struct GenArgs {
    std::string problem, output;
    std::size_t degree = 5, n = 4, states = 3, sets = 3, nonterminals = 3, productions = 6, letters = 2;
    std::uint64_t seed = 1;
    bool planted = false, group = true, base_form = false;
};

std::string run_gen(const GenArgs& a)
{
    Rng rng(a.seed);
    std::string out;
    if (a.problem == "knapsack" || a.problem == "subsetsum") {
        const auto d = a.problem == "subsetsum" ? ExponentDomain::binary : ExponentDomain::natural;
        out = io::write_knapsack(a.planted ? gen::planted_knapsack(rng, a.degree, a.n, d)
                                           : gen::random_knapsack(rng, a.degree, a.n, d));
    } else if (a.problem == "group") {
        std::vector<Permutation> gens;
        for (std::size_t i = 0; i < a.n; ++i) gens.push_back(random_permutation(a.degree, rng));
        out = io::write_permutation_list(a.degree, std::nullopt, gens);
    } else if (a.problem == "x3hs") {
        out = io::write_x3hs(a.planted ? gen::planted_x3hs(rng, a.n, a.sets) : gen::random_x3hs(rng, a.n, a.sets));
    } else if (a.problem == "grammar") {
        auto g = gen::random_cfg<Permutation>(rng, a.nonterminals, a.productions,
                                              [&](Rng& r) { return random_permutation(a.degree, r); });
        g.set_degree(a.degree);
        out = io::write_grammar(g);
    } else if (a.problem == "letter-grammar") {
        const auto sigma = gen::letters(a.letters);
        out = io::write_grammar(gen::random_cfg<std::string>(rng, a.nonterminals, a.productions,
                                                             [&](Rng& r) { return sigma[r.below(sigma.size())]; }));
    } else if (a.problem == "dfa") {
        out = io::write_dfa(gen::random_dfa(rng, a.states, gen::letters(a.letters), a.group));
    } else if (a.problem == "nfa") {
        out = io::write_nfa(gen::random_group_nfa(rng, a.degree, a.states, a.n, a.base_form));
    } else {
        throw input_error("unknown problem '" + a.problem + "'");
    }
    return out;
}

struct BlackboxArgs {
    std::string group, elem;
    bool redundant = false;
};

json run_blackbox(const BlackboxArgs& a, const Caps& caps)
{
    Report r("blackbox-demo");
    const auto text = io::read_file(a.group);
    r.hash(text);
    r.hash(a.elem);
    std::size_t m = 0;
    const auto gens = io::parse_group(text, &m);
    const auto target = parse_permutation(a.elem, m);
    const PermutationBlackBox box(m, a.redundant);
    const CountingBlackBox counted(box);
    std::vector<BitString> encoded;
    for (std::size_t i = 0; i < gens.size(); ++i) encoded.push_back(box.encode(gens[i], i));
    BbClosureStats st;
    const bool member = bb_exhaustive_decide(counted, box.encode(target), encoded, caps.blackbox, &st);
    r.j["decision"] = member;
    r.j["stats"]["code_length"] = box.code_length();
    r.j["stats"]["closure_elements"] = st.elements;
    r.j["stats"]["oracle_calls"] = counted.calls();
    if (member) {
        const Bsgs group(m, gens);
        const auto proof = bb_certify(box, group, target);
        const bool ok = bb_subgroup_verify(box, box.encode(target), proof.generators, proof.certificate);
        r.j["certificate"] = {{"program_size", proof.certificate.program.size()},
                              {"size_limit", bb_certificate_limit(box)},
                              {"verified", ok}};
        r.oracle(ok, "membership certificate failed verification");
    }
    return r.finish();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Membership problems in permutation groups"};
    app.require_subcommand(1);
    bool fail_on_no = false, quiet = false, compact = false;
    app.add_flag("--fail-on-no", fail_on_no, "exit 1 when the decision is no");
    app.add_flag("--quiet", quiet, "print nothing; rely on the exit status");
    app.add_flag("--json", compact, "print the report as one line of JSON");

    Caps caps;
    try {
        caps.load_env();
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bad_input;
    }
    std::function<json()> action;
    std::function<std::string()> text_action;

    MemberArgs member;
    auto* c = app.add_subcommand("member", "subgroup membership by Schreier-Sims");
    c->add_option("--group", member.group, "group file")->required();
    c->add_option("--elem", member.elem, "element in cycle notation")->required();
    c->add_flag("--oracle", member.oracle, "cross-check by element enumeration");
    c->callback([&] { action = [&] { return run_member(member, caps); }; });

    RationalArgs rational;
    c = app.add_subcommand("rational", "rational subset membership");
    c->add_option("--nfa", rational.nfa, "group NFA file")->required();
    c->add_option("--target", rational.target, "target element")->required();
    c->add_option("--method", rational.method, "bfs, subgroup or both")
        ->check(CLI::IsMember({"bfs", "subgroup", "both"}));
    c->add_option("--max-degree", caps.rational_degree, "degree cap");
    c->callback([&] { action = [&] { return run_rational(rational, caps); }; });

    CfmArgs cfm;
    c = app.add_subcommand("cfm", "context-free membership in S_m");
    c->add_option("--grammar", cfm.grammar, "grammar file")->required();
    c->add_option("--target", cfm.target, "target element")->required();
    c->add_flag("--oracle", cfm.oracle, "cross-check by the direct language fixpoint");
    c->add_option("--max-degree", caps.cfm_degree, "degree cap");
    c->callback([&] { action = [&] { return run_cfm(cfm, caps); }; });

    CfgkArgs cfgk;
    c = app.add_subcommand("cfgk", "is every acyclic derivation tree of Horton-Strahler number <= k");
    c->add_option("--grammar", cfgk.grammar, "grammar file")->required();
    c->add_option("--k", cfgk.k, "k >= 1")->required();
    c->add_option("--method", cfgk.method, "dp, certificate or both")
        ->check(CLI::IsMember({"dp", "certificate", "both"}));
    c->callback([&] { action = [&] { return run_cfgk(cfgk); }; });

    KnapsackArgs knap;
    for (const char* name : {"subsetsum", "knapsack", "kknapsack"}) {
        c = app.add_subcommand(name, std::string(name) + " over permutations");
        c->add_option("--instance", knap.instance, "knapsack file")->required();
        c->add_flag("--oracle", knap.oracle, "cross-check by exhaustive exponent search");
        c->add_option("--max-states", caps.knapsack_states, "search state cap");
        if (std::string(name) == "subsetsum")
            c->add_option("--method", knap.method, "dfs, mitm or exhaustive")
                ->check(CLI::IsMember({"dfs", "mitm", "exhaustive"}));
        if (std::string(name) == "kknapsack") c->add_option("--k", knap.k, "number of factors")->required();
        c->callback([&, name] {
            action = [&, name] { return run_knapsack(name, knap, caps); };
        });
    }
    c = app.add_subcommand("2knapsack", "a = a1^x1 a2^x2");
    c->add_option("--instance", knap.instance, "knapsack file with two factors")->required();
    c->add_flag("--oracle", knap.oracle, "cross-check with the general solver and the Kronecker identity");
    c->add_option("--max-outer", caps.outer, "cap on the order of the first factor");
    c->callback([&] { action = [&] { return run_2knapsack(knap, caps); }; });

    ReduceArgs reduce;
    c = app.add_subcommand("reduce", "run a reduction: x3hs-subsetsum, x3hs-3knapsack or ghg-knapsack");
    c->add_option("kind", reduce.kind, "reduction")
        ->required()
        ->check(CLI::IsMember({"x3hs-subsetsum", "x3hs-3knapsack", "ghg-knapsack"}));
    c->add_option("--instance", reduce.instance, "X3HS file");
    c->add_option("--group-g", reduce.g, "group file for G (ghg-knapsack)");
    c->add_option("--group-h", reduce.h, "group file for H (ghg-knapsack)");
    c->add_option("--target", reduce.target, "target element (ghg-knapsack)");
    c->add_option("--output", reduce.output, "write the reduced knapsack instance here");
    c->add_flag("--verify", reduce.verify, "decide both sides by brute force and compare");
    c->callback([&] { action = [&] { return run_reduce(reduce, caps); }; });

    IntersectArgs inter;
    c = app.add_subcommand("intersect", "intersection of a grammar with DFAs");
    c->add_option("--grammar", inter.grammar, "letter grammar file")->required();
    c->add_option("--dfa", inter.dfas, "DFA file (repeatable)");
    c->add_flag("--oracle", inter.oracle, "cross-check with the product construction");
    c->add_option("--max-product-states", caps.product_states, "product automaton cap");
    c->callback([&] { action = [&] { return run_intersect(inter, caps); }; });

    GenArgs gen_args;
    c = app.add_subcommand("gen", "write a random instance");
    c->add_option("--problem", gen_args.problem, "knapsack, subsetsum, group, x3hs, grammar, letter-grammar, dfa, nfa")
        ->required();
    c->add_option("--degree", gen_args.degree, "permutation degree");
    c->add_option("--n", gen_args.n, "factors, generators, ground set size or NFA transitions");
    c->add_option("--states", gen_args.states, "automaton states");
    c->add_option("--sets", gen_args.sets, "X3HS sets");
    c->add_option("--nonterminals", gen_args.nonterminals, "grammar nonterminals");
    c->add_option("--productions", gen_args.productions, "grammar productions");
    c->add_option("--letters", gen_args.letters, "alphabet size");
    c->add_option("--seed", gen_args.seed, "random seed");
    c->add_flag("--planted", gen_args.planted, "plant a solution (knapsack, subsetsum, x3hs)");
    c->add_flag("!--any-dfa", gen_args.group, "allow DFAs that are not group DFAs");
    c->add_flag("--base-form", gen_args.base_form, "NFA with one state as initial and final state");
    c->add_option("--output", gen_args.output, "output file (default: standard output)");
    c->callback([&] { text_action = [&] { return run_gen(gen_args); }; });

    BlackboxArgs bb;
    c = app.add_subcommand("blackbox-demo", "membership through black-box oracles");
    c->add_option("--group", bb.group, "group file")->required();
    c->add_option("--elem", bb.elem, "element")->required();
    c->add_flag("--redundant", bb.redundant, "give every element several encodings");
    c->add_option("--max-elements", caps.blackbox, "closure cap");
    c->callback([&] { action = [&] { return run_blackbox(bb, caps); }; });

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? decided : bad_input;
    }

    auto print = [&](const json& j) {
        if (quiet) return;
        std::cout << (compact ? j.dump() : j.dump(2)) << "\n";
    };
    auto fail = [&](int code, const char* kind, const std::string& msg) {
        std::cerr << "error: " << msg << "\n";
        if (!quiet) print(json{{"tool", "grpmem"}, {"version", GRPMEM_VERSION}, {"error", kind}, {"message", msg}});
        return code;
    };
    try {
        if (text_action) {
            const auto text = text_action();
            if (gen_args.output.empty())
                std::cout << text;
            else
                write_output(gen_args.output, text);
            return decided;
        }
        const auto report = action();
        print(report);
        if (report.contains("oracle_agreement") && !report["oracle_agreement"].get<bool>()) {
            std::cerr << "error: " << report["disagreement"].get<std::string>() << "\n";
            return disagreement;
        }
        if (fail_on_no && report["decision"].is_boolean() && !report["decision"].get<bool>()) return answered_no;
        return decided;
    } catch (const invariant_error& e) {
        return fail(disagreement, "invariant", e.what());
    } catch (const cap_exceeded& e) {
        return fail(over_cap, "cap_exceeded", e.what());
    } catch (const input_error& e) {
        return fail(bad_input, "input", e.what());
    }
}
