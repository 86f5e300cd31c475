#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pultr/core/error.hpp"
#include "pultr/core/structure.hpp"

namespace pultr {

// Sort of a term: "V" for vertex-rooted terms, otherwise the relation symbol
// of the root edge.  "V" never collides with a symbol name.
using Sort = std::string;
inline const Sort vertex_sort = "V";

// Immutable AST of the tree calculus:
//   vertex | edge_R(t1, ..., tk) | pr_i(t)
// Children of edge are V-terms and the child of pr is an edge term, so every
// Term that can be constructed is well formed up to the arities of a signature.
class Term {
public:
    enum class Kind { vertex, edge, pr };

    static Term vertex() {
        static const Term v{std::make_shared<const Node>(Node{Kind::vertex, "", 0, {}, "vertex", 1})};
        return v;
    }

    static Term edge(std::string symbol, std::vector<Term> children) {
        if (!is_symbol_name(symbol) || symbol == "V") throw MalformedTerm("bad relation symbol '" + symbol + "'");
        if (children.empty()) throw MalformedTerm("edge_" + symbol + " needs at least one argument");
        std::string text = "edge_" + symbol + "(";
        std::size_t size = 1;
        for (std::size_t i = 0; i < children.size(); ++i) {
            if (!children[i].is_v_term())
                throw MalformedTerm("argument " + std::to_string(i + 1) + " of edge_" + symbol +
                                    " is not a V-term: " + children[i].str());
            if (i) text += ',';
            text += children[i].str();
            size += children[i].size();
        }
        text += ')';
        return Term{std::make_shared<const Node>(
            Node{Kind::edge, std::move(symbol), 0, std::move(children), std::move(text), size})};
    }

    static Term pr(std::size_t i, Term child) {
        if (child.kind() != Kind::edge) throw MalformedTerm("pr_" + std::to_string(i) + " applied to a V-term");
        if (i < 1 || i > child.arity())
            throw MalformedTerm("pr_" + std::to_string(i) + " out of range for " + child.str());
        std::string text = "pr_" + std::to_string(i) + "(" + child.str() + ")";
        const std::size_t size = child.size() + 1;
        return Term{std::make_shared<const Node>(Node{Kind::pr, "", i, {std::move(child)}, std::move(text), size})};
    }

    Kind kind() const noexcept { return node_->kind; }
    bool is_v_term() const noexcept { return node_->kind != Kind::edge; }
    const std::string& symbol() const noexcept { return node_->symbol; }
    std::size_t arity() const noexcept { return node_->children.size(); }
    std::size_t index() const noexcept { return node_->index; }
    const std::vector<Term>& children() const noexcept { return node_->children; }
    const Term& child() const { return node_->children.at(0); }

    // Number of AST nodes.
    std::size_t size() const noexcept { return node_->size; }

    // Canonical concrete syntax, without whitespace.
    const std::string& str() const noexcept { return node_->text; }

    Sort sort() const { return is_v_term() ? vertex_sort : node_->symbol; }

    friend bool operator==(const Term& a, const Term& b) { return a.node_ == b.node_ || a.str() == b.str(); }

    // Ascending by size, ties broken by printed form.
    friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
        if (auto c = a.size() <=> b.size(); c != 0) return c;
        return a.str() <=> b.str();
    }

private:
    struct Node {
        Kind kind;
        std::string symbol;
        std::size_t index;
        std::vector<Term> children;
        std::string text;
        std::size_t size;
    };

    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

inline Sort sort_of(const Term& t) { return t.sort(); }

// Checks every edge node against the arities of a signature.
inline void check_term(const Term& t, const Signature& signature) {
    switch (t.kind()) {
        case Term::Kind::vertex:
            return;
        case Term::Kind::pr:
            check_term(t.child(), signature);
            return;
        case Term::Kind::edge: {
            auto k = signature.find(t.symbol());
            if (!k) throw MalformedTerm("symbol '" + t.symbol() + "' is not in the signature");
            if (signature[*k].arity != t.arity())
                throw MalformedTerm("edge_" + t.symbol() + " has " + std::to_string(t.arity()) +
                                    " arguments, arity is " + std::to_string(signature[*k].arity));
            for (const auto& c : t.children()) check_term(c, signature);
            return;
        }
    }
}

// Signature of the symbols used by a list of terms, in order of first use.
inline Signature signature_of(std::span<const Term> terms) {
    std::vector<Symbol> symbols;
    auto visit = [&](auto&& self, const Term& t) -> void {
        if (t.kind() == Term::Kind::edge) {
            auto it = std::find_if(symbols.begin(), symbols.end(), [&](const Symbol& s) { return s.name == t.symbol(); });
            if (it == symbols.end())
                symbols.push_back({t.symbol(), t.arity()});
            else if (it->arity != t.arity())
                throw MalformedTerm("symbol '" + t.symbol() + "' used with two arities");
        }
        for (const auto& c : t.children()) self(self, c);
    };
    for (const auto& t : terms) visit(visit, t);
    return Signature(std::move(symbols));
}

// All subterms of one or more terms, duplicates collapsed, each list in the
// canonical (size, printed form) order.
struct SubtermSet {
    std::vector<Term> all;
    std::vector<Term> v_terms;
    std::map<std::string, std::vector<Term>> by_symbol;

    bool contains(const Term& t) const { return std::binary_search(all.begin(), all.end(), t); }

    std::size_t v_position(const Term& t) const {
        auto it = std::lower_bound(v_terms.begin(), v_terms.end(), t);
        if (it == v_terms.end() || *it != t) throw MalformedTerm("not a V-subterm: " + t.str());
        return static_cast<std::size_t>(it - v_terms.begin());
    }

    const std::vector<Term>& of_symbol(const std::string& symbol) const {
        static const std::vector<Term> none;
        auto it = by_symbol.find(symbol);
        return it == by_symbol.end() ? none : it->second;
    }
};

inline SubtermSet subterms(std::span<const Term> roots) {
    std::set<Term> seen;
    auto visit = [&](auto&& self, const Term& t) -> void {
        if (!seen.insert(t).second) return;
        for (const auto& c : t.children()) self(self, c);
    };
    for (const auto& t : roots) visit(visit, t);
    SubtermSet out;
    out.all.assign(seen.begin(), seen.end());
    for (const auto& t : out.all) {
        if (t.is_v_term())
            out.v_terms.push_back(t);
        else
            out.by_symbol[t.symbol()].push_back(t);
    }
    return out;
}

inline SubtermSet subterms(const Term& t) { return subterms(std::span<const Term>(&t, 1)); }

inline bool is_subterm(const Term& s, const Term& t) {
    if (s == t) return true;
    if (s.size() >= t.size()) return false;
    return std::any_of(t.children().begin(), t.children().end(), [&](const Term& c) { return is_subterm(s, c); });
}

inline bool is_proper_subterm(const Term& s, const Term& t) { return s != t && is_subterm(s, t); }

}  // namespace pultr
