#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pultr/core/error.hpp"
#include "pultr/core/homomorphism.hpp"
#include "pultr/core/stock.hpp"
#include "pultr/core/structure.hpp"
#include "pultr/terms/term.hpp"
#include "pultr/terms/tree.hpp"

namespace pultr {

// A (source, target) Pultr template.  P and every Q_R are source-structures;
// epsilon[k][i] is the homomorphism P -> Q_R for the (i+1)-th coordinate of the
// k-th target symbol.  terms[k] optionally fixes the term chosen to represent
// Q_R when a right adjoint is built; a V-term is allowed, e.g. `vertex` for a
// one-element Q_R.
struct PultrTemplate {
    Signature source;
    Signature target;
    Structure p;
    std::vector<Structure> q;
    std::vector<std::vector<ElementMap>> epsilon;
    std::vector<std::optional<Term>> terms;

    const Structure& q_of(std::string_view symbol) const { return q.at(target.index_of(symbol)); }
};

namespace detail {

// Only used to confirm that a supplied term represents its Q; scans the
// homomorphisms for a bijective one.
inline bool isomorphic(const Structure& a, const Structure& b) {
    if (a.size() != b.size() || a.signature() != b.signature()) return false;
    for (std::size_t k = 0; k < a.signature().size(); ++k)
        if (a.relation(k).size() != b.relation(k).size()) return false;
    bool found = false;
    HomSolver(a, b).for_each([&](const ElementMap& f) { return !(found = is_isomorphism(a, b, f)); });
    return found;
}

}  // namespace detail

inline void validate_template(const PultrTemplate& t) {
    auto fail = [](const std::string& message) { throw InvalidTemplate(message); };
    if (t.p.signature() != t.source) fail("P is not over the source signature");
    if (t.q.size() != t.target.size()) fail("need exactly one Q per target symbol");
    if (t.epsilon.size() != t.target.size()) fail("need epsilon maps for every target symbol");
    if (!t.terms.empty() && t.terms.size() != t.target.size()) fail("term list does not match the target signature");
    for (std::size_t k = 0; k < t.target.size(); ++k) {
        const auto& name = t.target[k].name;
        if (t.q[k].signature() != t.source) fail("Q_" + name + " is not over the source signature");
        if (t.epsilon[k].size() != t.target[k].arity)
            fail("Q_" + name + " needs " + std::to_string(t.target[k].arity) + " epsilon maps");
        for (std::size_t i = 0; i < t.epsilon[k].size(); ++i)
            if (!is_hom(t.p, t.q[k], t.epsilon[k][i]))
                fail("epsilon " + name + " " + std::to_string(i + 1) + " is not a homomorphism P -> Q_" + name);
        if (!t.terms.empty() && t.terms[k]) {
            const auto& term = *t.terms[k];
            try {
                check_term(term, t.source);
            } catch (const MalformedTerm& e) {
                fail("term for " + name + ": " + e.what());
            }
            if (!detail::isomorphic(tree_of_term(term, t.source).structure, t.q[k]))
                fail("term for " + name + " does not represent Q_" + name);
        }
    }
}

// Element positions of P in the order used to name Γ's universe: the entries
// of the single tuple when P is a lone tuple on distinct elements, otherwise
// the domain order.
inline std::vector<Index> naming_order(const Structure& p) {
    if (p.tuple_count() == 1) {
        for (const auto& rel : p.relations()) {
            if (rel.empty()) continue;
            auto t = rel.front();
            auto sorted = t;
            std::sort(sorted.begin(), sorted.end());
            if (t.size() == p.size() && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) return t;
        }
    }
    std::vector<Index> order(p.size());
    for (Index a = 0; a < p.size(); ++a) order[a] = a;
    return order;
}

// Name of the element of Γ(B) given by a homomorphism h: P -> B.
inline std::string hom_name(const Structure& b, std::span<const Index> order, std::span<const Index> h) {
    std::vector<std::string> ids;
    ids.reserve(order.size());
    for (Index x : order) ids.push_back(b.id(h[x]));
    return render_tuple(ids);
}

namespace templates {

inline ElementMap map_of(const Structure& from, const Structure& to,
                         std::initializer_list<std::pair<const char*, const char*>> pairs) {
    ElementMap f(from.size(), 0);
    for (auto [x, y] : pairs) f[from.index_of(x)] = to.index_of(y);
    return f;
}

inline Structure digraph_on(std::vector<std::string> domain, std::vector<std::pair<std::string, std::string>> edges) {
    RawStructure raw{stock::digraph(), std::move(domain), {}};
    for (auto& [a, b] : edges) raw.tuples.push_back({"E", {a, b}});
    return build_structure(raw);
}

// Arc graph: vertices of the image are edges, consecutive edges adjacent.
// Q_E is read as the path rooted in its second edge.
inline PultrTemplate arc_graph() {
    auto p = digraph_on({"0", "1"}, {{"0", "1"}});
    auto q = digraph_on({"0", "1", "2"}, {{"0", "1"}, {"1", "2"}});
    auto t1 = Term::edge("E", {Term::vertex(), Term::vertex()});
    PultrTemplate t{stock::digraph(),
                    stock::digraph(),
                    p,
                    {q},
                    {{map_of(p, q, {{"0", "0"}, {"1", "1"}}), map_of(p, q, {{"0", "1"}, {"1", "2"}})}},
                    {Term::edge("E", {Term::pr(2, t1), Term::vertex()})}};
    validate_template(t);
    return t;
}

// Single-vertex P; Q_E is the oriented path 0 <- 1 -> 2 -> 3 with the ends marked.
inline const Term& oriented_path_term() {
    static const Term t = [] {
        auto s1 = Term::pr(1, Term::edge("E", {Term::vertex(), Term::vertex()}));
        return Term::edge("E", {s1, s1});
    }();
    return t;
}

inline Structure oriented_path_q() {
    return digraph_on({"0", "1", "2", "3"}, {{"1", "0"}, {"1", "2"}, {"2", "3"}});
}

inline PultrTemplate oriented_path() {
    auto p = stock::v1(stock::digraph());
    auto q = oriented_path_q();
    PultrTemplate t{stock::digraph(), stock::digraph(), p, {q},
                    {{map_of(p, q, {{"1", "0"}}), map_of(p, q, {{"1", "3"}})}}, {oriented_path_term()}};
    validate_template(t);
    return t;
}

// Same Q as oriented_path, target symbol R of arity 4 marking all four vertices.
inline PultrTemplate oriented_path_4ary() {
    auto p = stock::v1(stock::digraph());
    auto q = oriented_path_q();
    std::vector<ElementMap> eps;
    for (const char* x : {"0", "1", "2", "3"}) eps.push_back(map_of(p, q, {{"1", x}}));
    PultrTemplate t{stock::digraph(), Signature{{"R", 4}}, p, {q}, {eps}, {oriented_path_term()}};
    validate_template(t);
    return t;
}

inline Signature arc_structure_signature() { return Signature{{"D", 2}, {"I", 2}, {"O", 2}}; }

// Arc structure: D as in the arc graph, I relating edges with a common head,
// O relating edges with a common tail.
inline PultrTemplate arc_structure() {
    auto p = digraph_on({"0", "1"}, {{"0", "1"}});
    auto qd = digraph_on({"0", "1", "2"}, {{"0", "1"}, {"1", "2"}});
    auto qi = digraph_on({"0", "1", "2"}, {{"0", "1"}, {"2", "1"}});
    auto qo = digraph_on({"0", "1", "2"}, {{"1", "0"}, {"1", "2"}});
    auto s = [](std::size_t i) { return Term::pr(i, Term::edge("E", {Term::vertex(), Term::vertex()})); };
    PultrTemplate t{stock::digraph(),
                    arc_structure_signature(),
                    p,
                    {qd, qi, qo},
                    {{map_of(p, qd, {{"0", "0"}, {"1", "1"}}), map_of(p, qd, {{"0", "1"}, {"1", "2"}})},
                     {map_of(p, qi, {{"0", "0"}, {"1", "1"}}), map_of(p, qi, {{"0", "2"}, {"1", "1"}})},
                     {map_of(p, qo, {{"0", "1"}, {"1", "0"}}), map_of(p, qo, {{"0", "1"}, {"1", "2"}})}},
                    {Term::edge("E", {s(2), Term::vertex()}), Term::edge("E", {Term::vertex(), s(2)}),
                     Term::edge("E", {s(1), Term::vertex()})}};
    validate_template(t);
    return t;
}

// P = V1 and Q_R = T(term) for a binary target symbol R whose two coordinates
// mark the given addresses of T(term).
inline PultrTemplate from_term(const Term& term, const std::string& first, const std::string& second,
                               const Signature& source = stock::digraph()) {
    auto p = stock::v1(source);
    auto q = tree_of_term(term, source).structure;
    PultrTemplate t{source,
                    Signature{{"R", 2}},
                    p,
                    {q},
                    {{ElementMap{q.index_of(first)}, ElementMap{q.index_of(second)}}},
                    {term}};
    validate_template(t);
    return t;
}

}  // namespace templates

}  // namespace pultr
