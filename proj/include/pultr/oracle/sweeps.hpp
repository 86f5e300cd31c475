#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pultr/adjoint/compose.hpp"
#include "pultr/core/homomorphism.hpp"
#include "pultr/duals/dual.hpp"
#include "pultr/functors/template.hpp"
#include "pultr/oracle/checks.hpp"
#include "pultr/oracle/enumerate.hpp"
#include "pultr/oracle/fixtures.hpp"

// Exhaustive cross-checks between the general constructions and the closed
// forms in fixtures.hpp, shared by the command line and the acceptance run.
namespace pultr::oracle {

struct SweepReport {
    std::string name;
    bool passed = true;
    std::size_t checked = 0;
    std::optional<Structure> counterexample;
};

// computed(B) ≡ expected(B) for every B with at most n_max elements.
inline SweepReport equivalence_sweep(std::string name, const Signature& sig, std::size_t n_max,
                                     const Functor& computed, const Functor& expected) {
    SweepReport r{std::move(name), true, 0, std::nullopt};
    for_each_structure(sig, n_max, [&](const Structure& b) {
        ++r.checked;
        if (hom_equivalent(computed(b), expected(b))) return true;
        r.passed = false;
        r.counterexample = b;
        return false;
    });
    return r;
}

inline SweepReport arc_graph_fixture_sweep(std::size_t n_max) {
    const auto t = templates::arc_graph();
    return equivalence_sweep(
        "arc graph: edge-case Ω(B) ≡ δ_R(B)", stock::digraph(), n_max,
        [&](const Structure& b) { return omega_edge_apply(t, b); }, delta_r);
}

inline SweepReport oriented_path_fixture_sweep(std::size_t n_max) {
    const auto t = templates::oriented_path();
    return equivalence_sweep(
        "oriented path: vertex-case Ω(H) ≡ Ω'(H)", stock::digraph(), n_max,
        [&](const Structure& b) { return omega_vertex_apply(t, b); }, omega_prime);
}

inline SweepReport arc_structure_fixture_sweep(std::size_t n_max) {
    const auto t = templates::arc_structure();
    return equivalence_sweep(
        "arc structure: edge-case Ω(B) ≡ ω(B)", templates::arc_structure_signature(), n_max,
        [&](const Structure& b) { return omega_edge_apply(t, b); }, omega_arc_structure);
}

// Ω(V1) ≅ D(t) for the single-symbol templates built from the paths t_1..t_3
// and the oriented path term.
inline SweepReport omega_of_point_sweep() {
    SweepReport r{"Ω(V1) ≅ D(t) for single-symbol templates", true, 0, std::nullopt};
    std::vector<PultrTemplate> ts{
        templates::from_term(path_term(1), "v.1", "v.2"),
        templates::from_term(path_term(2), "v.1.1", "v.2"),
        templates::from_term(path_term(3), "v.1.1.1", "v.2"),
        templates::from_term(templates::oriented_path_term(), "v.1.2", "v.2.2"),
    };
    for (const auto& t : ts) {
        ++r.checked;
        if (!check_omega_v1_is_dual(t).passed) {
            r.passed = false;
            r.counterexample = stock::v1(t.target);
            break;
        }
    }
    return r;
}

}  // namespace pultr::oracle
