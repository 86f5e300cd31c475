#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pultr/core/stock.hpp"
#include "pultr/core/structure.hpp"

// Closed-form right adjoints for particular templates, written out directly
// from their set descriptions.  They share no code with the general
// construction so that comparing the two is a real cross-check.
namespace pultr::oracle {

namespace detail {

inline std::string subset_name(const Structure& b, std::uint64_t mask) {
    std::string s = "{";
    bool first = true;
    for (Index x = 0; x < b.size(); ++x) {
        if (!(mask >> x & 1)) continue;
        if (!first) s += ",";
        first = false;
        s += b.id(x);
    }
    return s + "}";
}

// X × Y ⊆ R for the binary relation k of b, X and Y given as masks.
inline bool product_inside(const Structure& b, std::size_t k, std::uint64_t xs, std::uint64_t ys) {
    for (Index x = 0; x < b.size(); ++x)
        for (Index y = 0; y < b.size(); ++y)
            if ((xs >> x & 1) && (ys >> y & 1) && !b.contains(k, Tuple{x, y})) return false;
    return true;
}

inline void require_small(const Structure& b) {
    if (b.size() > 16) throw BudgetExceeded("fixture over more than 16 elements");
}

}  // namespace detail

// Vertices (a, A) with a ∈ H, A ⊆ H; an edge (a, A) -> (b, B) iff b ∈ A and A × B ⊆ E.
inline Structure omega_prime(const Structure& h) {
    detail::require_small(h);
    const auto e = h.signature().index_of("E");
    const std::uint64_t subsets = std::uint64_t{1} << h.size();
    std::vector<std::string> domain;
    std::vector<std::pair<Index, std::uint64_t>> vs;
    for (Index a = 0; a < h.size(); ++a)
        for (std::uint64_t m = 0; m < subsets; ++m) {
            vs.emplace_back(a, m);
            domain.push_back("(" + h.id(a) + "," + detail::subset_name(h, m) + ")");
        }
    std::vector<Tuple> edges;
    for (Index u = 0; u < vs.size(); ++u)
        for (Index v = 0; v < vs.size(); ++v)
            if ((vs[u].second >> vs[v].first & 1) && detail::product_inside(h, e, vs[u].second, vs[v].second))
                edges.push_back({u, v});
    return Structure(stock::digraph(), std::move(domain), {std::move(edges)});
}

// Complete bipartite pairs (U-, U+) with U- × U+ ⊆ E; an edge iff U+ ∩ V- ≠ ∅.
inline Structure delta_r(const Structure& b) {
    detail::require_small(b);
    const auto e = b.signature().index_of("E");
    const std::uint64_t subsets = std::uint64_t{1} << b.size();
    std::vector<std::string> domain;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> vs;
    for (std::uint64_t minus = 0; minus < subsets; ++minus)
        for (std::uint64_t plus = 0; plus < subsets; ++plus)
            if (detail::product_inside(b, e, minus, plus)) {
                vs.emplace_back(minus, plus);
                domain.push_back("(" + detail::subset_name(b, minus) + "," + detail::subset_name(b, plus) + ")");
            }
    std::vector<Tuple> edges;
    for (Index u = 0; u < vs.size(); ++u)
        for (Index v = 0; v < vs.size(); ++v)
            if (vs[u].second & vs[v].first) edges.push_back({u, v});
    return Structure(stock::digraph(), std::move(domain), {std::move(edges)});
}

// Over a D/I/O structure: pairs (U+, U-) with U- × U+ ⊆ D, U- × U- ⊆ I and
// U+ × U+ ⊆ O; an edge iff U+ ∩ V- ≠ ∅.
inline Structure omega_arc_structure(const Structure& b) {
    detail::require_small(b);
    const auto& sig = b.signature();
    const auto d = sig.index_of("D"), i = sig.index_of("I"), o = sig.index_of("O");
    const std::uint64_t subsets = std::uint64_t{1} << b.size();
    std::vector<std::string> domain;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> vs;
    for (std::uint64_t plus = 0; plus < subsets; ++plus)
        for (std::uint64_t minus = 0; minus < subsets; ++minus)
            if (detail::product_inside(b, d, minus, plus) && detail::product_inside(b, i, minus, minus) &&
                detail::product_inside(b, o, plus, plus)) {
                vs.emplace_back(plus, minus);
                domain.push_back("(" + detail::subset_name(b, plus) + "," + detail::subset_name(b, minus) + ")");
            }
    std::vector<Tuple> edges;
    for (Index u = 0; u < vs.size(); ++u)
        for (Index v = 0; v < vs.size(); ++v)
            if (vs[u].first & vs[v].second) edges.push_back({u, v});
    return Structure(stock::digraph(), std::move(domain), {std::move(edges)});
}

}  // namespace pultr::oracle
