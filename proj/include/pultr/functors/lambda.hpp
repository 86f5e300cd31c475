#pragma once

#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "pultr/core/structure.hpp"
#include "pultr/functors/template.hpp"

namespace pultr {

// Gadget replacement Λ(A): a copy P_a per element, a copy Q_{R,e} per tuple e of
// R^A, with ε_{i,R}(P) in Q_{R,e} glued onto P_{e_i}.
//
// Copies are numbered P_a (by a, then p) before Q_{R,e} (by R, the position of
// e in R^A, then q); each class of the quotient is represented by its least
// member and named "<a>_<p>" or "<R><e>_<q>", e.g. "E(0,1)_2".
inline Structure lambda_apply(const PultrTemplate& tmpl, const Structure& a) {
    if (a.signature() != tmpl.target) throw SignatureMismatch("Λ expects a structure over the template's target");
    const std::size_t np = tmpl.p.size();
    std::vector<std::size_t> q_offset;
    std::size_t slots = a.size() * np;
    for (std::size_t k = 0; k < tmpl.target.size(); ++k) {
        q_offset.push_back(slots);
        slots += a.relation(k).size() * tmpl.q[k].size();
    }

    std::vector<std::size_t> parent(slots);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t x, std::size_t y) {
        x = find(x), y = find(y);
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
    };
    auto q_slot = [&](std::size_t k, std::size_t j, Index q) { return q_offset[k] + j * tmpl.q[k].size() + q; };

    for (std::size_t k = 0; k < tmpl.target.size(); ++k)
        for (std::size_t j = 0; j < a.relation(k).size(); ++j) {
            const auto& e = a.relation(k)[j];
            for (std::size_t i = 0; i < e.size(); ++i)
                for (Index p = 0; p < np; ++p) unite(q_slot(k, j, tmpl.epsilon[k][i][p]), e[i] * np + p);
        }

    auto slot_name = [&](std::size_t s) {
        if (s < a.size() * np) return a.id(static_cast<Index>(s / np)) + "_" + tmpl.p.id(static_cast<Index>(s % np));
        std::size_t k = tmpl.target.size() - 1;
        while (q_offset[k] > s) --k;
        const std::size_t nq = tmpl.q[k].size();
        const std::size_t j = (s - q_offset[k]) / nq;
        return tmpl.target[k].name + render_tuple(ids_of(a, a.relation(k)[j])) + "_" +
               tmpl.q[k].id(static_cast<Index>((s - q_offset[k]) % nq));
    };

    StructureBuilder b(tmpl.source);
    std::vector<Index> element(slots);
    std::set<std::string> used;
    for (std::size_t s = 0; s < slots; ++s) {
        if (find(s) != s) continue;
        std::string name = slot_name(s);
        while (!used.insert(name).second) name += "'";
        element[s] = b.add_element(name);
    }
    for (std::size_t s = 0; s < slots; ++s) element[s] = element[find(s)];

    for (Index x = 0; x < a.size(); ++x)
        for (std::size_t k = 0; k < tmpl.source.size(); ++k)
            for (const auto& t : tmpl.p.relation(k)) {
                Tuple image;
                for (Index p : t) image.push_back(element[x * np + p]);
                b.add_tuple(k, std::move(image));
            }
    for (std::size_t r = 0; r < tmpl.target.size(); ++r)
        for (std::size_t j = 0; j < a.relation(r).size(); ++j)
            for (std::size_t k = 0; k < tmpl.source.size(); ++k)
                for (const auto& t : tmpl.q[r].relation(k)) {
                    Tuple image;
                    for (Index q : t) image.push_back(element[q_slot(r, j, q)]);
                    b.add_tuple(k, std::move(image));
                }
    return std::move(b).build();
}

}  // namespace pultr
