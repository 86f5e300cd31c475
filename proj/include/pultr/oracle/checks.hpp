#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pultr/adjoint/omega.hpp"
#include "pultr/core/error.hpp"
#include "pultr/core/homomorphism.hpp"
#include "pultr/core/stock.hpp"
#include "pultr/duals/dual.hpp"
#include "pultr/terms/tree.hpp"

namespace pultr::oracle {

using Functor = std::function<Structure(const Structure&)>;

struct AdjunctionReport {
    bool passed = true;
    std::size_t checked = 0;
    // Pairs not checked because an applier ran out of budget.
    std::size_t skipped = 0;
    std::optional<std::pair<Structure, Structure>> counterexample;
};

// left(A) -> B iff A -> right(B), for every A in as and B in bs.  Stops at the
// first failure in enumeration order (A outer, B inner).
inline AdjunctionReport check_adjunction(const Functor& left, const Functor& right, const std::vector<Structure>& as,
                                         const std::vector<Structure>& bs) {
    AdjunctionReport r;
    std::vector<std::optional<Structure>> right_b;
    for (const auto& b : bs) {
        try {
            right_b.emplace_back(right(b));
        } catch (const BudgetExceeded&) {
            right_b.emplace_back(std::nullopt);
        }
    }
    for (const auto& a : as) {
        std::optional<Structure> left_a;
        try {
            left_a = left(a);
        } catch (const BudgetExceeded&) {
            r.skipped += bs.size();
            continue;
        }
        for (std::size_t j = 0; j < bs.size(); ++j) {
            if (!right_b[j]) {
                ++r.skipped;
                continue;
            }
            ++r.checked;
            if (hom_exists(*left_a, bs[j]) != hom_exists(a, *right_b[j])) {
                r.passed = false;
                r.counterexample.emplace(a, bs[j]);
                return r;
            }
        }
    }
    return r;
}

struct DualityReport {
    bool passed = true;
    std::size_t checked = 0;
    std::string reason;
    std::optional<Structure> counterexample;
};

// Exactly one of T -> A and A -> D for every A; T -> D is ruled out first.
inline DualityReport check_duality_pair(const Structure& t, const Structure& d, const std::vector<Structure>& as) {
    DualityReport r;
    if (hom_exists(t, d)) {
        r.passed = false;
        r.reason = "T maps to D, so the two sides are not exclusive";
        return r;
    }
    for (const auto& a : as) {
        ++r.checked;
        if (hom_exists(t, a) == hom_exists(a, d)) {
            r.passed = false;
            r.reason = hom_exists(t, a) ? "A admits maps from T and to D" : "A admits neither a map from T nor to D";
            r.counterexample = a;
            return r;
        }
    }
    return r;
}

struct IsomorphismReport {
    bool passed = true;
    std::string reason;
};

// With P one element, one target symbol and t_R minimal (Q_R maps to no tree of
// a proper subterm), Ω(V_1) is D(t_R) under U_t = ∅ ↔ false, U_t = {the only
// map} ↔ true.  Builds that correspondence and checks it is an isomorphism.
inline IsomorphismReport check_omega_v1_is_dual(const PultrTemplate& tmpl) {
    if (tmpl.target.size() != 1) throw PreconditionFailed("template must have a single target symbol");
    const auto term = chosen_terms(tmpl).front();
    if (term.is_v_term()) throw PreconditionFailed("the term for Q_R must be edge-rooted");
    for (const auto& s : subterms(term).all)
        if (s != term && hom_exists(tmpl.q[0], tree_of_term(s, tmpl.source).structure))
            throw PreconditionFailed("term is not minimal: Q_R maps to the tree of " + s.str());

    const auto v1 = stock::v1(tmpl.target);
    OmegaBuilder builder(tmpl, v1, OmegaCase::vertex);
    const auto omega = builder.build();
    const auto dual = dual_of_term(term, tmpl.source);
    const auto& vterms = builder.index().v_terms;
    for (const auto& t : vterms)
        if (builder.homs_of(t).size() != 1)
            return {false, "Γ(T(" + t.str() + ")) does not map to V1 in exactly one way"};

    ElementMap map;
    for (Index x = 0; x < dual.size(); ++x) {
        OmegaVertex u;
        for (char c : dual.id(x)) u.entries.push_back(c == '1' ? 1 : 0);
        auto it = std::find(omega.vertices.begin(), omega.vertices.end(), u);
        if (it == omega.vertices.end()) return {false, "no vertex of Ω(V1) for " + dual.id(x)};
        map.push_back(static_cast<Index>(it - omega.vertices.begin()));
    }
    if (!is_isomorphism(dual, omega.structure, map)) return {false, "the correspondence is not an isomorphism"};
    return {};
}

}  // namespace pultr::oracle
