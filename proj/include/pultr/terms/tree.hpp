#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pultr/core/error.hpp"
#include "pultr/core/structure.hpp"
#include "pultr/terms/term.hpp"

namespace pultr {

// Root of a rooted tree: either an element or a tuple of some relation.
struct Root {
    std::optional<Index> vertex;
    std::size_t symbol = 0;
    Tuple tuple;

    static Root at_vertex(Index a) { return Root{a, 0, {}}; }
    static Root at_edge(std::size_t symbol, Tuple t) { return Root{std::nullopt, symbol, std::move(t)}; }

    bool is_vertex() const noexcept { return vertex.has_value(); }

    friend bool operator==(const Root&, const Root&) = default;
};

// T(t) together with its root.  Element ids are AST addresses: "v" for the
// whole term and "<parent>.<i>" for the i-th argument of an edge node; pr nodes
// do not extend the address, so T(pr_i(t)) and T(t) have the same domain.
struct RootedTree {
    Structure structure;
    Root root;
};

inline RootedTree tree_of_term(const Term& t, const Signature& signature) {
    check_term(t, signature);
    StructureBuilder b(signature);
    auto build = [&](auto&& self, const Term& s, const std::string& address) -> Root {
        switch (s.kind()) {
            case Term::Kind::vertex:
                return Root::at_vertex(b.add_element(address));
            case Term::Kind::pr: {
                auto r = self(self, s.child(), address);
                return Root::at_vertex(r.tuple[s.index() - 1]);
            }
            case Term::Kind::edge: {
                Tuple tuple;
                for (std::size_t i = 0; i < s.arity(); ++i) {
                    auto r = self(self, s.children()[i], address + "." + std::to_string(i + 1));
                    tuple.push_back(*r.vertex);
                }
                const auto k = signature.index_of(s.symbol());
                b.add_tuple(k, tuple);
                return Root::at_edge(k, std::move(tuple));
            }
        }
        throw MalformedTerm("unknown term kind");
    };
    auto root = build(build, t, "v");
    return RootedTree{std::move(b).build(), std::move(root)};
}

// Connected and acyclic incidence multigraph.  The empty structure is not a tree.
inline bool is_tree(const Structure& a) {
    const std::size_t n = a.size();
    if (n == 0) return false;
    std::size_t nodes = n, edges = 0;
    std::vector<std::size_t> parent(n + a.tuple_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t components = n + a.tuple_count();
    for (const auto& rel : a.relations()) {
        for (const auto& t : rel) {
            const std::size_t node = nodes++;
            for (Index x : t) {
                ++edges;
                auto p = find(node), q = find(x);
                if (p == q) return false;  // cycle, including repeated entries
                parent[p] = q;
                --components;
            }
        }
    }
    return components == 1 && edges + 1 == nodes;
}

struct TermOfTree {
    Term term;
    // witness[x] is the element of the input tree corresponding to element x of T(term).
    ElementMap witness;
};

// Reads a term off a tree.  An edge root contributes edge_R over the terms of
// the components left after deleting the root tuple; a vertex root with an
// unused incident tuple becomes pr_i of that tuple's edge term.  Among several
// incident tuples the earliest symbol wins, then the smallest tuple, then the
// smallest coordinate equal to the root.
inline TermOfTree term_of_tree(const Structure& a, const Root& root) {
    if (!is_tree(a)) throw PreconditionFailed("structure is not a tree");
    const auto& signature = a.signature();
    std::optional<std::size_t> root_position;
    if (root.is_vertex()) {
        if (*root.vertex >= a.size()) throw PreconditionFailed("root element is not in the structure");
    } else {
        if (root.symbol >= signature.size() || !(root_position = a.position(root.symbol, root.tuple)))
            throw PreconditionFailed("root tuple is not in the structure");
    }

    // Incident tuples of each element, already in tie-breaking order.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> incident(a.size());
    for (std::size_t k = 0; k < signature.size(); ++k)
        for (std::size_t j = 0; j < a.relation(k).size(); ++j)
            for (Index x : a.relation(k)[j])
                if (incident[x].empty() || incident[x].back() != std::pair{k, j}) incident[x].emplace_back(k, j);

    std::vector<std::vector<bool>> used(signature.size());
    for (std::size_t k = 0; k < signature.size(); ++k) used[k].assign(a.relation(k).size(), false);
    std::map<std::string, Index> at_address;

    auto edge_term = [&](auto&& vertex_term, std::size_t k, std::size_t j, const std::string& address) -> Term {
        used[k][j] = true;
        const auto& t = a.relation(k)[j];
        std::vector<Term> children;
        for (std::size_t i = 0; i < t.size(); ++i)
            children.push_back(vertex_term(vertex_term, t[i], address + "." + std::to_string(i + 1)));
        return Term::edge(signature[k].name, std::move(children));
    };
    auto vertex_term = [&](auto&& self, Index x, const std::string& address) -> Term {
        for (auto [k, j] : incident[x]) {
            if (used[k][j]) continue;
            const auto& t = a.relation(k)[j];
            const std::size_t i = static_cast<std::size_t>(std::find(t.begin(), t.end(), x) - t.begin());
            return Term::pr(i + 1, edge_term(self, k, j, address));
        }
        at_address.emplace(address, x);
        return Term::vertex();
    };

    Term term = root.is_vertex() ? vertex_term(vertex_term, *root.vertex, "v")
                                 : edge_term(vertex_term, root.symbol, *root_position, "v");
    auto tree = tree_of_term(term, signature);
    ElementMap witness(tree.structure.size());
    for (Index x = 0; x < tree.structure.size(); ++x) witness[x] = at_address.at(tree.structure.id(x));
    return TermOfTree{std::move(term), std::move(witness)};
}

}  // namespace pultr
