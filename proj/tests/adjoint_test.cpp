#include <gtest/gtest.h>

#include <set>

#include "pultr/adjoint/compose.hpp"
#include "pultr/adjoint/omega.hpp"
#include "pultr/core/homomorphism.hpp"
#include "pultr/core/stock.hpp"
#include "pultr/functors/gamma.hpp"
#include "pultr/oracle/enumerate.hpp"
#include "pultr/oracle/fixtures.hpp"

using namespace pultr;

namespace {

const Signature digraph = stock::digraph();

std::set<ElementMap> maps_of(const OmegaBuilder& b, const Term& t, std::uint64_t mask) {
    std::set<ElementMap> out;
    const auto& homs = b.homs_of(t);
    for (std::size_t j = 0; j < homs.size(); ++j)
        if (mask >> j & 1) out.insert(homs[j]);
    return out;
}

// The edge conditions read straight off their definition through cross().
bool is_edge_by_definition(const OmegaBuilder& b, const Signature& sigma, std::size_t k,
                           std::span<const OmegaVertex> us, std::optional<Index> witness) {
    const auto& index = b.index();
    for (const auto& t : index.of_symbol(sigma[k].name)) {
        auto maps = b.cross(t, us, witness);
        const auto& homs = b.homs_of(t);
        for (const auto& f : maps)
            if (!std::binary_search(homs.begin(), homs.end(), f)) return false;
        for (std::size_t i = 0; i < t.arity(); ++i) {
            auto p = Term::pr(i + 1, t);
            if (!index.contains(p)) continue;
            auto allowed = maps_of(b, p, us[i].entries[index.v_position(p)]);
            for (const auto& f : maps)
                if (!allowed.count(f)) return false;
        }
    }
    return true;
}

// Compares every candidate tuple of a built Ω(B) against the definition; for
// Š-tuples also checks that the recorded witness is the least one.
void expect_matches_definition(const PultrTemplate& tmpl, const Structure& b, OmegaCase kind) {
    OmegaBuilder builder(tmpl, b, kind);
    auto r = builder.build();
    const auto& sigma = tmpl.source;
    const std::size_t wsym = kind == OmegaCase::edge ? edge_case_symbol(tmpl) : sigma.size();
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        const auto arity = sigma[k].arity;
        Tuple tuple(arity, 0);
        std::size_t found = 0;
        while (!r.vertices.empty()) {
            std::vector<OmegaVertex> us;
            for (Index x : tuple) us.push_back(r.vertices[x]);
            std::optional<Index> least;
            if (k == wsym) {
                for (Index e = 0; e < b.size() && !least; ++e)
                    if (is_edge_by_definition(builder, sigma, k, us, e)) least = e;
            } else if (is_edge_by_definition(builder, sigma, k, us, std::nullopt)) {
                least = 0;
            }
            const auto& rel = r.structure.relation(k);
            auto it = std::lower_bound(rel.begin(), rel.end(), tuple);
            const bool present = it != rel.end() && *it == tuple;
            ASSERT_EQ(present, least.has_value());
            if (present && k == wsym) {
                ASSERT_EQ(r.witnesses[k][it - rel.begin()], *least);
            }
            found += present;
            std::size_t i = arity;
            while (i > 0 && ++tuple[i - 1] == r.vertices.size()) tuple[--i] = 0;
            if (i == 0) break;
        }
        EXPECT_EQ(found, r.structure.relation(k).size());
    }
}

PultrTemplate two_cycle_template() {
    auto p = stock::v1(digraph);
    auto q = templates::digraph_on({"0", "1"}, {{"0", "1"}, {"1", "0"}});
    return PultrTemplate{digraph, digraph, p, {q}, {{ElementMap{0}, ElementMap{1}}}, {}};
}

}  // namespace

TEST(Cases, Reports) {
    EXPECT_TRUE(admits_edge_case(templates::arc_graph()));
    EXPECT_FALSE(admits_vertex_case(templates::arc_graph()));
    EXPECT_TRUE(admits_vertex_case(templates::oriented_path()));
    EXPECT_FALSE(admits_edge_case(templates::oriented_path()));
    EXPECT_TRUE(admits_edge_case(templates::arc_structure()));
    EXPECT_TRUE(admits_composed_case(templates::arc_graph()));
    EXPECT_TRUE(admits_composed_case(templates::oriented_path()));
    auto cyc = two_cycle_template();
    auto report = admits_vertex_case(cyc);
    EXPECT_FALSE(report);
    EXPECT_NE(report.reason.find("not a tree"), std::string::npos);

    // Q is a tree, but ε_2 folds the two leaves of P together.
    auto p = templates::digraph_on({"0", "1", "2"}, {{"0", "1"}, {"2", "1"}});
    PultrTemplate bad{digraph, digraph, p, {p}, {{templates::map_of(p, p, {{"0", "0"}, {"1", "1"}, {"2", "2"}}),
                                                   templates::map_of(p, p, {{"0", "0"}, {"1", "1"}, {"2", "0"}})}}, {}};
    auto composed = admits_composed_case(bad);
    EXPECT_FALSE(composed);
    EXPECT_NE(composed.reason.find("injective"), std::string::npos);
}

TEST(Cases, DefaultTerms) {
    EXPECT_EQ(default_term(stock::v1(digraph)), Term::vertex());
    EXPECT_THROW(default_term(Structure(digraph, {"a", "b"}, {})), PreconditionFailed);
    auto q = templates::oriented_path_q();
    auto t = default_term(q);
    EXPECT_TRUE(detail::isomorphic(tree_of_term(t, digraph).structure, q));
    auto tmpl = templates::oriented_path();
    EXPECT_EQ(chosen_terms(tmpl).front(), templates::oriented_path_term());
}

TEST(Cross, OrientedPathGluesVertexChoices) {
    auto tmpl = templates::oriented_path();
    auto b = stock::order(2);
    OmegaBuilder builder(tmpl, b, OmegaCase::vertex);
    auto vs = builder.vertices();
    EXPECT_EQ(vs.size(), 32u);
    auto t1 = Term::edge("E", {Term::vertex(), Term::vertex()});
    auto s1 = Term::pr(1, t1);
    const auto s1_pos = builder.index().v_position(s1);
    for (std::size_t i = 0; i < vs.size(); i += 5)
        for (std::size_t j = 0; j < vs.size(); j += 3) {
            std::vector<OmegaVertex> uv{vs[i], vs[j]};
            // ⨉_{t_1}(U, V) = U_vertex × V_vertex as maps on the two ends of the edge.
            auto cross = builder.cross(t1, uv);
            ASSERT_EQ(cross.size(), 1u);
            const auto& vertex_homs = builder.homs_of(Term::vertex());
            auto u0 = vertex_homs[std::countr_zero(vs[i].entries[0])][0];
            auto v0 = vertex_homs[std::countr_zero(vs[j].entries[0])][0];
            EXPECT_EQ(cross[0], (ElementMap{u0, v0}));
            // The size of ⨉_{t_E} is |U_{s_1}| |V_{s_1}|.
            auto big = builder.cross(templates::oriented_path_term(), uv);
            EXPECT_EQ(big.size(), static_cast<std::size_t>(std::popcount(vs[i].entries[s1_pos]) *
                                                           std::popcount(vs[j].entries[s1_pos])));
        }
}

TEST(Cross, EmptyFactorAndWitnessRules) {
    auto tmpl = templates::arc_graph();
    auto b = stock::order(3);
    OmegaBuilder builder(tmpl, b, OmegaCase::edge);
    auto vs = builder.vertices();
    auto t2 = tmpl.terms[0].value();
    auto s1 = t2.children()[0];
    const auto pos = builder.index().v_position(s1);
    for (const auto& u : vs)
        for (const auto& v : vs) {
            std::vector<OmegaVertex> uv{u, v};
            for (Index e = 0; e < b.size(); ++e) {
                auto cross = builder.cross(t2, uv, e);
                // ⨉_{t_2}(U, V; e•) = U × {e•}.
                ASSERT_EQ(cross.size(), static_cast<std::size_t>(std::popcount(u.entries[pos])));
                for (const auto& f : cross) {
                    ASSERT_EQ(f.back(), e);
                }
            }
        }
    std::vector<OmegaVertex> uv{vs[0], vs[0]};
    EXPECT_THROW(builder.cross(t2, uv), PreconditionFailed);
    EXPECT_THROW(builder.cross(Term::vertex(), uv), MalformedTerm);
}

TEST(Omega, ArcGraphOfLoop) {
    auto r = omega_edge_build(templates::arc_graph(), stock::loop());
    ASSERT_EQ(r.structure.size(), 2u);
    // U_vertex = {∅}; U_{s_1} is ∅ or the map onto the loop.
    EXPECT_EQ(r.structure.domain(), (std::vector<std::string>{"{()}|{}", "{()}|{((v.1,v.2)=1)}"}));
    EXPECT_EQ(r.structure.relation(0), (std::vector<Tuple>{{0, 1}, {1, 1}}));
    EXPECT_EQ(r.witnesses[0], (std::vector<Index>{0, 0}));
}

TEST(Omega, EdgeSetsMatchTheDefinition) {
    for (const auto& b : oracle::enumerate_structures(digraph, 2)) {
        expect_matches_definition(templates::arc_graph(), b, OmegaCase::edge);
        expect_matches_definition(templates::oriented_path(), b, OmegaCase::vertex);
    }
    int n = 0;
    oracle::for_each_structure_of_size(templates::arc_structure_signature(), 2, [&](const Structure& b) {
        if (n++ % 97 == 0) expect_matches_definition(templates::arc_structure(), b, OmegaCase::edge);
        return true;
    });
    Signature r4{{"R", 4}};
    StructureBuilder sb(r4);
    sb.add_element("a");
    sb.add_element("b");
    sb.add_tuple(0, Tuple{0, 1, 1, 0});
    sb.add_tuple(0, Tuple{1, 1, 1, 1});
    expect_matches_definition(templates::oriented_path_4ary(), std::move(sb).build(), OmegaCase::vertex);
}

TEST(Omega, VertexCountsFollowTheProductFormula) {
    auto tmpl = templates::oriented_path();
    for (std::size_t n = 1; n <= 3; ++n) {
        StructureBuilder sb(digraph);
        for (std::size_t i = 0; i < n; ++i) sb.add_element(std::to_string(i));
        auto r = omega_vertex_apply(tmpl, std::move(sb).build());
        EXPECT_EQ(r.size(), n << (n * n));
    }
    EXPECT_EQ(omega_vertex_apply(tmpl, Structure(digraph, {}, {})).size(), 0u);
    EXPECT_EQ(omega_edge_apply(templates::arc_graph(), Structure(digraph, {}, {})).size(), 1u);
}

TEST(Omega, BudgetIsEnforced) {
    StructureBuilder sb(digraph);
    for (int i = 0; i < 5; ++i) sb.add_element(std::to_string(i));
    auto b = std::move(sb).build();
    EXPECT_THROW(omega_vertex_apply(templates::oriented_path(), b), BudgetExceeded);
    EXPECT_THROW(omega_vertex_apply(templates::oriented_path(), stock::order(2), {.budget = 16}), BudgetExceeded);
    EXPECT_THROW(omega_vertex_apply(templates::oriented_path(), stock::order(2), {.tuple_budget = 100}), BudgetExceeded);
}

TEST(Omega, WrongCaseIsRejected) {
    EXPECT_THROW(omega_vertex_apply(templates::arc_graph(), stock::loop()), PreconditionFailed);
    EXPECT_THROW(omega_edge_apply(templates::oriented_path(), stock::loop()), PreconditionFailed);
    EXPECT_THROW(omega_vertex_apply(two_cycle_template(), stock::loop()), PreconditionFailed);
}

TEST(Adjunction, VertexCaseOnSmallDigraphs) {
    auto tmpl = templates::oriented_path();
    auto as = oracle::enumerate_structures(digraph, 3);
    for (const auto& b : oracle::enumerate_structures(digraph, 2)) {
        auto omega = omega_vertex_apply(tmpl, b);
        for (std::size_t i = 0; i < as.size(); i += 2)
            ASSERT_EQ(hom_exists(gamma_apply(tmpl, as[i]), b), hom_exists(as[i], omega));
    }
}

TEST(Adjunction, EdgeCaseOnSmallDigraphs) {
    auto tmpl = templates::arc_graph();
    auto as = oracle::enumerate_structures(digraph, 3);
    for (const auto& b : oracle::enumerate_structures(digraph, 2)) {
        auto omega = omega_edge_apply(tmpl, b);
        for (const auto& a : as) ASSERT_EQ(hom_exists(gamma_apply(tmpl, a), b), hom_exists(a, omega));
    }
}

TEST(Adjunction, FourAryTarget) {
    auto tmpl = templates::oriented_path_4ary();
    Signature r4{{"R", 4}};
    std::vector<Structure> bs;
    for (int variant = 0; variant < 4; ++variant) {
        StructureBuilder sb(r4);
        sb.add_element("a");
        sb.add_element("b");
        if (variant & 1) sb.add_tuple(0, Tuple{0, 0, 1, 1});
        if (variant & 2) sb.add_tuple(0, Tuple{1, 0, 0, 1});
        bs.push_back(std::move(sb).build());
    }
    bs.push_back(stock::loop(r4));
    auto as = oracle::enumerate_structures(digraph, 3);
    for (const auto& b : bs) {
        auto omega = omega_vertex_apply(tmpl, b);
        for (const auto& a : as) ASSERT_EQ(hom_exists(gamma_apply(tmpl, a), b), hom_exists(a, omega));
    }
}

TEST(Adjunction, ArcStructureOnOneElement) {
    auto tmpl = templates::arc_structure();
    auto as = oracle::enumerate_structures(digraph, 3);
    for (const auto& b : oracle::enumerate_structures(templates::arc_structure_signature(), 1)) {
        auto omega = omega_edge_apply(tmpl, b);
        for (const auto& a : as) ASSERT_EQ(hom_exists(gamma_apply(tmpl, a), b), hom_exists(a, omega));
    }
}

TEST(Fixtures, OmegaMatchesClosedForms) {
    for (const auto& b : oracle::enumerate_structures(digraph, 2)) {
        EXPECT_TRUE(hom_equivalent(omega_edge_apply(templates::arc_graph(), b), oracle::delta_r(b)));
        EXPECT_TRUE(hom_equivalent(omega_vertex_apply(templates::oriented_path(), b), oracle::omega_prime(b)));
    }
}

TEST(Prune, A3KeepsEquivalenceAndShrinks) {
    auto tmpl = templates::oriented_path();
    for (const auto& b : oracle::enumerate_structures(digraph, 2)) {
        auto full = omega_vertex_apply(tmpl, b);
        auto pruned = omega_vertex_apply(tmpl, b, {.prune_a3 = true});
        EXPECT_EQ(pruned.size(), b.size() << b.size());
        EXPECT_TRUE(hom_equivalent(full, pruned));
        // Pruned vertices are exactly (a, A) of the closed form.
        EXPECT_TRUE(hom_equivalent(pruned, oracle::omega_prime(b)));
    }
    for (const auto& b : oracle::enumerate_structures(digraph, 2)) {
        auto full = omega_edge_apply(templates::arc_structure(), gamma_apply(templates::arc_structure(), b));
        auto pruned = omega_edge_apply(templates::arc_structure(), gamma_apply(templates::arc_structure(), b),
                                       {.prune_a3 = true});
        EXPECT_TRUE(hom_equivalent(full, pruned));
    }
}

TEST(Decompose, VertexTemplateAddsUnaryRelation) {
    auto d = decompose_template(templates::oriented_path());
    EXPECT_EQ(d.symbol, "S");
    EXPECT_EQ(d.first.target, (Signature{{"E", 2}, {"S", 1}}));
    for (const auto& b : oracle::enumerate_structures(digraph, 2)) {
        auto g1 = gamma_apply(d.first, b);
        EXPECT_EQ(g1.domain(), b.domain());
        EXPECT_EQ(g1.relation(0), b.relation(0));
        EXPECT_EQ(g1.relation(1).size(), b.size());
        EXPECT_EQ(gamma_apply(d.second, g1), gamma_apply(templates::oriented_path(), b));
    }
}

TEST(Decompose, ArcGraphSecondTemplate) {
    auto d = decompose_template(templates::arc_graph());
    ASSERT_EQ(d.second.q.size(), 1u);
    const auto& q = d.second.q[0];
    EXPECT_EQ(q.size(), 3u);
    EXPECT_TRUE(q.relation(0).empty());
    EXPECT_EQ(q.relation(1), (std::vector<Tuple>{{0, 1}, {1, 2}}));
    EXPECT_TRUE(is_tree(q));
    EXPECT_TRUE(admits_edge_case(d.second));
    EXPECT_TRUE(admits_vertex_case(d.first));
}

TEST(Decompose, FreshSymbolAvoidsClashes) {
    Signature s{{"S", 2}};
    EXPECT_EQ(fresh_symbol(s), "S1");
    EXPECT_EQ(fresh_symbol(Signature{{"S", 2}, {"S1", 2}}), "S2");
}

TEST(Composed, AgreesWithDirectConstructions) {
    for (const auto& b : oracle::enumerate_structures(digraph, 2)) {
        EXPECT_TRUE(hom_equivalent(omega_composed(templates::oriented_path(), b),
                                   omega_vertex_apply(templates::oriented_path(), b)));
        EXPECT_TRUE(hom_equivalent(omega_composed(templates::arc_graph(), b),
                                   omega_edge_apply(templates::arc_graph(), b)));
    }
}

TEST(Composed, HomIntoOmega) {
    auto arc = templates::arc_graph();
    EXPECT_FALSE(hom_into_omega(stock::path(3), arc, stock::order(2)));
    EXPECT_TRUE(hom_into_omega(stock::path(3), arc, stock::order(3)));
    EXPECT_TRUE(hom_into_omega(stock::v1(digraph), templates::oriented_path(), stock::order(1)));
    EXPECT_FALSE(hom_into_omega(stock::v1(digraph), templates::oriented_path(), Structure(digraph, {}, {})));
    EXPECT_TRUE(hom_into_omega(stock::path(3), arc, stock::order(3), OmegaChoice::composed));
}

TEST(Necessary, TreesStayTrees) {
    auto r = necessary_condition_check(templates::arc_graph(), 4);
    EXPECT_EQ(r.status, NecessaryCheck::Status::passed);
    EXPECT_GT(r.checked, 10u);
    auto bad = necessary_condition_check(two_cycle_template(), 3);
    ASSERT_EQ(bad.status, NecessaryCheck::Status::refuted);
    EXPECT_EQ(bad.counterexample->tuple_count(), 1u);
    auto tight = necessary_condition_check(templates::arc_graph(), 4, 3);
    EXPECT_EQ(tight.status, NecessaryCheck::Status::budget_exhausted);
}

TEST(Necessary, CoreOfStructures) {
    // A path ending in a loop collapses onto the loop; linear orders are cores.
    auto loopy = templates::digraph_on({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "c"}});
    auto core = core_of(loopy);
    EXPECT_EQ(core.size(), 1u);
    EXPECT_EQ(core_of(stock::order(3)).size(), 3u);
    auto two_paths = templates::digraph_on({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}});
    EXPECT_EQ(core_of(two_paths).size(), 2u);
}
