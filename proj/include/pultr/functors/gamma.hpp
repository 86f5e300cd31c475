#pragma once

#include <map>
#include <optional>
#include <vector>

#include "pultr/core/homomorphism.hpp"
#include "pultr/core/structure.hpp"
#include "pultr/functors/template.hpp"

namespace pultr {

struct GammaResult {
    Structure structure;
    // homs[x] is the homomorphism P -> B that element x of Γ(B) stands for.
    std::vector<ElementMap> homs;

    std::optional<Index> element_of(const ElementMap& h) const {
        auto it = std::lower_bound(homs.begin(), homs.end(), h);
        if (it == homs.end() || *it != h) return std::nullopt;
        return static_cast<Index>(it - homs.begin());
    }
};

// The pp-construction Γ(B).  The universe is hom(P, B) ordered by image
// vector; (h_1, ..., h_k) is an R-tuple iff some g: Q_R -> B has g∘ε_i = h_i.
// Tuples are found coordinate by coordinate, each prefix being extended only
// while a compatible g still exists.
inline GammaResult gamma_with_homs(const PultrTemplate& tmpl, const Structure& b) {
    if (b.signature() != tmpl.source) throw SignatureMismatch("Γ expects a structure over the template's source");
    GammaResult out;
    out.homs = enumerate_homs(tmpl.p, b);
    const auto order = naming_order(tmpl.p);
    std::vector<std::string> domain;
    domain.reserve(out.homs.size());
    for (const auto& h : out.homs) domain.push_back(hom_name(b, order, h));

    std::vector<std::vector<Tuple>> relations(tmpl.target.size());
    for (std::size_t k = 0; k < tmpl.target.size(); ++k) {
        const auto& q = tmpl.q[k];
        const auto& eps = tmpl.epsilon[k];
        const std::size_t arity = eps.size();
        HomSolver solver(q, b);
        HomSolver::Fixed fixed(q.size());
        Tuple tuple;
        auto extend = [&](auto&& self) -> void {
            const std::size_t i = tuple.size();
            if (i == arity) {
                relations[k].push_back(tuple);
                return;
            }
            for (Index x = 0; x < out.homs.size(); ++x) {
                const auto& h = out.homs[x];
                auto saved = fixed;
                bool clash = false;
                for (Index p = 0; p < h.size() && !clash; ++p) {
                    auto& slot = fixed[eps[i][p]];
                    if (slot && *slot != h[p]) clash = true;
                    slot = h[p];
                }
                if (!clash && solver.exists(fixed)) {
                    tuple.push_back(x);
                    self(self);
                    tuple.pop_back();
                }
                fixed = std::move(saved);
            }
        };
        if (!out.homs.empty() || arity == 0) extend(extend);
    }
    out.structure = Structure(tmpl.target, std::move(domain), std::move(relations));
    return out;
}

inline Structure gamma_apply(const PultrTemplate& tmpl, const Structure& b) {
    return gamma_with_homs(tmpl, b).structure;
}

}  // namespace pultr
