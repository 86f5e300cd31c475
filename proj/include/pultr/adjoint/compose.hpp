#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pultr/adjoint/omega.hpp"
#include "pultr/core/homomorphism.hpp"
#include "pultr/core/stock.hpp"
#include "pultr/functors/lambda.hpp"
#include "pultr/functors/template.hpp"

namespace pultr {

// P and every Q_R are trees, each ε is injective, and for a fixed R the images
// of P under two different ε share at most one element.
inline CaseReport admits_composed_case(const PultrTemplate& t) {
    if (auto r = detail::templates_are_trees(t); !r) return r;
    if (!is_tree(t.p)) return CaseReport::fail("P is not a tree");
    for (std::size_t k = 0; k < t.target.size(); ++k) {
        const auto& name = t.target[k].name;
        std::vector<std::set<Index>> images;
        for (std::size_t i = 0; i < t.epsilon[k].size(); ++i) {
            std::set<Index> image(t.epsilon[k][i].begin(), t.epsilon[k][i].end());
            if (image.size() != t.p.size())
                return CaseReport::fail("epsilon " + name + " " + std::to_string(i + 1) + " is not injective");
            images.push_back(std::move(image));
        }
        for (std::size_t i = 0; i < images.size(); ++i)
            for (std::size_t j = i + 1; j < images.size(); ++j) {
                std::size_t shared = 0;
                for (Index x : images[i]) shared += images[j].count(x);
                if (shared > 1)
                    return CaseReport::fail("images of epsilon " + name + " " + std::to_string(i + 1) + " and " +
                                            std::to_string(j + 1) + " share " + std::to_string(shared) + " elements");
            }
    }
    return {};
}

struct Decomposition {
    // Adds the relation defined by P; single-element P, so Ω comes from the vertex case.
    PultrTemplate first;
    // Takes the new relation as its universe; Ω comes from the edge case.
    PultrTemplate second;
    std::string symbol;
};

// A name for the new relation: "S" unless taken, then "S1", "S2", ...
inline std::string fresh_symbol(const Signature& sig) {
    if (!sig.contains("S")) return "S";
    for (std::size_t i = 1;; ++i)
        if (auto name = "S" + std::to_string(i); !sig.contains(name)) return name;
}

// Γ = Γ_2 ∘ Γ_1, where Γ_1 adds a p-ary relation S holding the images of P
// (listed in naming_order(P)) and Γ_2 reads Q'_R: Q_R with the tuples inside
// each ε-image of P replaced by one S-tuple.
inline Decomposition decompose_template(const PultrTemplate& t) {
    if (auto r = admits_composed_case(t); !r) throw PreconditionFailed(r.reason);
    const auto& sigma = t.source;
    const std::size_t p = t.p.size();
    const auto order = naming_order(t.p);
    const std::string s_name = fresh_symbol(sigma);
    const Signature upsilon = sigma.with(Symbol{s_name, p});
    const std::size_t s_index = upsilon.index_of(s_name);

    PultrTemplate first{sigma, upsilon, stock::v1(sigma), {}, {}, {}};
    for (const auto& symbol : sigma) {
        first.q.push_back(stock::s1(sigma, symbol.name));
        std::vector<ElementMap> eps;
        for (Index i = 0; i < symbol.arity; ++i) eps.push_back(ElementMap{i});
        first.epsilon.push_back(std::move(eps));
    }
    first.q.push_back(t.p);
    std::vector<ElementMap> eps_s;
    for (Index x : order) eps_s.push_back(ElementMap{x});
    first.epsilon.push_back(std::move(eps_s));
    validate_template(first);

    PultrTemplate second{upsilon, t.target, stock::s1(upsilon, s_name), {}, {}, {}};
    for (std::size_t k = 0; k < t.target.size(); ++k) {
        const auto& q = t.q[k];
        std::vector<std::set<Tuple>> removed(sigma.size());
        for (const auto& e : t.epsilon[k])
            for (std::size_t r = 0; r < sigma.size(); ++r)
                for (const auto& tuple : t.p.relation(r)) {
                    Tuple image;
                    for (Index x : tuple) image.push_back(e[x]);
                    removed[r].insert(image);
                }
        std::vector<std::vector<Tuple>> relations(upsilon.size());
        for (std::size_t r = 0; r < sigma.size(); ++r)
            for (const auto& tuple : q.relation(r))
                if (!removed[r].count(tuple)) relations[r].push_back(tuple);
        std::vector<ElementMap> eps;
        for (const auto& e : t.epsilon[k]) {
            ElementMap m;
            for (Index j = 0; j < p; ++j) m.push_back(e[order[j]]);
            relations[s_index].push_back(m);
            eps.push_back(std::move(m));
        }
        second.q.push_back(Structure(upsilon, q.domain(), std::move(relations)));
        second.epsilon.push_back(std::move(eps));
    }
    validate_template(second);
    for (std::size_t k = 0; k < second.q.size(); ++k)
        if (!is_tree(second.q[k])) throw PreconditionFailed("Q'_" + t.target[k].name + " is not a tree");
    return Decomposition{std::move(first), std::move(second), s_name};
}

inline Structure omega_composed(const PultrTemplate& t, const Structure& b, const OmegaOptions& opt = {}) {
    auto d = decompose_template(t);
    auto middle = omega_edge_apply(d.second, b, opt);
    return omega_vertex_apply(d.first, middle, opt);
}

enum class OmegaChoice { automatic, vertex, edge, composed };

// Ω(B) by the requested construction; automatic picks the first of vertex,
// edge, composed whose hypotheses hold.
inline Structure omega_apply(const PultrTemplate& t, const Structure& b, OmegaChoice choice = OmegaChoice::automatic,
                             const OmegaOptions& opt = {}) {
    if (choice == OmegaChoice::automatic) {
        if (admits_vertex_case(t))
            choice = OmegaChoice::vertex;
        else if (admits_edge_case(t))
            choice = OmegaChoice::edge;
        else if (auto r = admits_composed_case(t))
            choice = OmegaChoice::composed;
        else
            throw PreconditionFailed("no right adjoint construction applies: " + r.reason);
    }
    switch (choice) {
        case OmegaChoice::vertex:
            return omega_vertex_apply(t, b, opt);
        case OmegaChoice::edge:
            return omega_edge_apply(t, b, opt);
        default:
            return omega_composed(t, b, opt);
    }
}

// Whether A -> Ω(B), deciding it on the materialized Ω(B).
inline bool hom_into_omega(const Structure& a, const PultrTemplate& t, const Structure& b,
                           OmegaChoice choice = OmegaChoice::automatic, const OmegaOptions& opt = {}) {
    return hom_exists(a, omega_apply(t, b, choice, opt));
}

// Repeatedly drops an element x whenever A maps into A - x.
inline Structure core_of(Structure a) {
    bool shrunk = true;
    while (shrunk) {
        shrunk = false;
        for (Index x = 0; x < a.size() && !shrunk; ++x) {
            std::vector<std::string> domain;
            for (Index y = 0; y < a.size(); ++y)
                if (y != x) domain.push_back(a.id(y));
            std::vector<std::vector<Tuple>> relations(a.signature().size());
            for (std::size_t k = 0; k < relations.size(); ++k)
                for (auto tuple : a.relation(k)) {
                    if (std::find(tuple.begin(), tuple.end(), x) != tuple.end()) continue;
                    for (auto& y : tuple) y -= y > x;
                    relations[k].push_back(tuple);
                }
            Structure smaller(a.signature(), std::move(domain), std::move(relations));
            if (hom_exists(a, smaller)) {
                a = std::move(smaller);
                shrunk = true;
            }
        }
    }
    return a;
}

struct NecessaryCheck {
    enum class Status { passed, refuted, budget_exhausted };
    Status status = Status::passed;
    std::size_t checked = 0;
    // The τ-tree T whose Λ(T) is not equivalent to a tree, when refuted.
    std::optional<Structure> counterexample;
};

// Every V-term over a signature whose tree has at most max_edges tuples.
inline std::vector<Term> v_terms_up_to(const Signature& sig, std::size_t max_edges) {
    std::vector<std::vector<Term>> v(max_edges + 1);
    v[0].push_back(Term::vertex());
    for (std::size_t e = 1; e <= max_edges; ++e)
        for (const auto& symbol : sig) {
            // Children with edge counts summing to e - 1.
            std::vector<Term> children;
            auto go = [&](auto&& self, std::size_t i, std::size_t left) -> void {
                if (i == symbol.arity) {
                    if (left != 0) return;
                    auto t = Term::edge(symbol.name, children);
                    for (std::size_t j = 1; j <= symbol.arity; ++j) v[e].push_back(Term::pr(j, t));
                    return;
                }
                for (std::size_t c = 0; c <= left; ++c)
                    for (const auto& child : v[c]) {
                        children.push_back(child);
                        self(self, i + 1, left - c);
                        children.pop_back();
                    }
            };
            go(go, 0, e - 1);
        }
    std::vector<Term> out;
    for (auto& level : v)
        for (auto& t : level) out.push_back(std::move(t));
    return out;
}

// Λ(T) must be homomorphically equivalent to a tree for every tree T, i.e.
// its core must be a tree.  Checks the trees with at most max_edges tuples,
// giving up after `budget` of them.
inline NecessaryCheck necessary_condition_check(const PultrTemplate& t, std::size_t max_edges,
                                                std::size_t budget = 10000) {
    validate_template(t);
    NecessaryCheck out;
    std::set<std::string> seen;
    for (const auto& term : v_terms_up_to(t.target, max_edges)) {
        auto tree = tree_of_term(term, t.target).structure;
        // Structures from different terms often coincide; check each once.
        std::string key;
        for (std::size_t k = 0; k < tree.signature().size(); ++k)
            for (const auto& tuple : tree.relation(k)) key += std::to_string(k) + render_tuple(ids_of(tree, tuple));
        key += "/" + std::to_string(tree.size());
        if (!seen.insert(key).second) continue;
        if (out.checked == budget) {
            out.status = NecessaryCheck::Status::budget_exhausted;
            return out;
        }
        ++out.checked;
        auto core = core_of(lambda_apply(t, tree));
        if (!is_tree(core)) {
            out.status = NecessaryCheck::Status::refuted;
            out.counterexample = std::move(tree);
            return out;
        }
    }
    return out;
}

}  // namespace pultr
