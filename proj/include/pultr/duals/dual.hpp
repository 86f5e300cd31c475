#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pultr/core/error.hpp"
#include "pultr/core/homomorphism.hpp"
#include "pultr/core/structure.hpp"
#include "pultr/terms/term.hpp"
#include "pultr/terms/tree.hpp"

namespace pultr {

// A vertex of a dual: one truth value per V-subterm, indexed like
// SubtermSet::v_terms (so position 0 is `vertex`, which is always true).
using DualVertex = std::vector<bool>;

// &_t(v^1, ..., v^k) for t = edge_R(t_1, ..., t_k).
inline bool conj(const Term& t, std::span<const DualVertex> vs, const SubtermSet& index) {
    if (t.kind() != Term::Kind::edge) throw MalformedTerm("& is only defined on edge terms: " + t.str());
    if (vs.size() != t.arity()) throw MalformedTerm("& of " + t.str() + " needs " + std::to_string(t.arity()) + " vertices");
    bool all = true;
    for (std::size_t i = 0; i < t.arity(); ++i) {
        const auto pos = index.v_position(t.children()[i]);
        if (pos >= vs[i].size()) throw MalformedTerm("vertex assignment too short for " + t.children()[i].str());
        all = all && vs[i][pos];
    }
    return all;
}

// Bit-string id of a dual vertex, one character per V-subterm.
inline std::string dual_vertex_id(const DualVertex& v) {
    std::string s;
    for (bool b : v) s += b ? '1' : '0';
    return s;
}

struct DualOptions {
    // Keep only vertices with u_t => u_s whenever T(s) maps to T(t) root to root.
    bool monotone = false;
    // Cap on the number of candidate tuples examined for a single symbol.
    std::uint64_t budget = std::uint64_t{1} << 26;
};

namespace detail {

inline Structure dual_structure(std::span<const Term> roots, const Signature& signature, const DualOptions& opt) {
    for (const auto& t : roots) {
        if (t.is_v_term()) throw MalformedTerm("duals are built from edge-rooted terms, got " + t.str());
        check_term(t, signature);
    }
    const auto index = subterms(roots);
    const std::size_t n = index.v_terms.size();
    if (n > 24) throw BudgetExceeded("dual has 2^" + std::to_string(n - 1) + " vertices");

    // Pairs (s, t) with u_t => u_s forced under the monotone filter.
    std::vector<std::pair<std::size_t, std::size_t>> implied;
    if (opt.monotone) {
        std::vector<RootedTree> trees;
        for (const auto& t : index.v_terms) trees.push_back(tree_of_term(t, signature));
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t t = 0; t < n; ++t) {
                if (s == t) continue;
                HomSolver solver(trees[s].structure, trees[t].structure);
                HomSolver::Fixed fixed(trees[s].structure.size());
                fixed[*trees[s].root.vertex] = *trees[t].root.vertex;
                if (solver.exists(fixed)) implied.emplace_back(s, t);
            }
    }

    // Bit i of a mask is the value at v_terms[i]; bit 0 is always set.
    std::vector<std::uint64_t> masks;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << (n - 1)); ++m) {
        const std::uint64_t mask = (m << 1) | 1;
        bool keep = true;
        for (auto [s, t] : implied)
            if ((mask >> t & 1) && !(mask >> s & 1)) keep = false;
        if (keep) masks.push_back(mask);
    }
    auto id_of = [&](std::uint64_t mask) {
        std::string s;
        for (std::size_t i = 0; i < n; ++i) s += (mask >> i & 1) ? '1' : '0';
        return s;
    };
    std::sort(masks.begin(), masks.end(), [&](auto a, auto b) { return id_of(a) < id_of(b); });
    std::vector<std::string> domain;
    for (auto m : masks) domain.push_back(id_of(m));

    std::vector<std::vector<Tuple>> relations(signature.size());
    for (std::size_t k = 0; k < signature.size(); ++k) {
        const auto& symbol = signature[k];
        // Per S-subterm: child positions, and the (i, pr_i(t)) pairs required by (D1).
        struct Check {
            std::vector<std::size_t> children;
            std::vector<std::pair<std::size_t, std::size_t>> projections;
            bool forbidden = false;
        };
        std::vector<Check> checks;
        for (const auto& t : index.of_symbol(symbol.name)) {
            Check c;
            for (const auto& child : t.children()) c.children.push_back(index.v_position(child));
            for (std::size_t i = 0; i < t.arity(); ++i) {
                auto p = Term::pr(i + 1, t);
                if (index.contains(p)) c.projections.emplace_back(i, index.v_position(p));
            }
            c.forbidden = std::find(roots.begin(), roots.end(), t) != roots.end();
            checks.push_back(std::move(c));
        }

        const std::size_t arity = symbol.arity;
        double candidates = 1;
        for (std::size_t i = 0; i < arity; ++i) candidates *= static_cast<double>(masks.size());
        if (candidates > static_cast<double>(opt.budget))
            throw BudgetExceeded("dual has too many candidate " + symbol.name + "-tuples");
        if (masks.empty()) continue;

        Tuple tuple(arity, 0);
        while (true) {
            bool ok = true;
            for (const auto& c : checks) {
                bool all = true;
                for (std::size_t i = 0; i < arity && all; ++i) all = masks[tuple[i]] >> c.children[i] & 1;
                if (!all) continue;
                if (c.forbidden) ok = false;
                for (auto [i, pos] : c.projections)
                    if (!(masks[tuple[i]] >> pos & 1)) ok = false;
                if (!ok) break;
            }
            if (ok) relations[k].push_back(tuple);
            std::size_t i = arity;
            while (i > 0 && ++tuple[i - 1] == masks.size()) tuple[--i] = 0;
            if (i == 0) break;
        }
    }
    return Structure(signature, std::move(domain), std::move(relations));
}

}  // namespace detail

// D(t_Q) over the given signature, or over the symbols of t_Q if none is given.
inline Structure dual_of_term(const Term& t, const Signature& signature, const DualOptions& opt = {}) {
    return detail::dual_structure(std::span<const Term>(&t, 1), signature, opt);
}

inline Structure dual_of_term(const Term& t, const DualOptions& opt = {}) {
    return dual_of_term(t, signature_of(std::span<const Term>(&t, 1)), opt);
}

// D(t_1, ..., t_n): A -> D iff no T(t_i) maps to A.
inline Structure dual_of_forest(std::span<const Term> terms, const Signature& signature, const DualOptions& opt = {}) {
    if (terms.empty()) throw PreconditionFailed("dual of an empty list of trees");
    return detail::dual_structure(terms, signature, opt);
}

inline Structure dual_of_forest(std::span<const Term> terms, const DualOptions& opt = {}) {
    if (terms.empty()) throw PreconditionFailed("dual of an empty list of trees");
    return dual_of_forest(terms, signature_of(terms), opt);
}

// The path term of length k rooted in its last edge.
inline Term path_term(std::size_t k) {
    if (k == 0) throw PreconditionFailed("path term needs at least one edge");
    Term s = Term::vertex();
    Term t = Term::edge("E", {s, Term::vertex()});
    for (std::size_t i = 1; i < k; ++i) {
        s = Term::pr(2, t);
        t = Term::edge("E", {s, Term::vertex()});
    }
    return t;
}

}  // namespace pultr
