#include <gtest/gtest.h>

#include "pultr/core/homomorphism.hpp"
#include "pultr/core/stock.hpp"
#include "pultr/oracle/enumerate.hpp"

using namespace pultr;

namespace {

Structure digraph(std::vector<std::string> domain, std::vector<std::pair<std::string, std::string>> edges) {
    RawStructure raw{stock::digraph(), std::move(domain), {}};
    for (auto& [a, b] : edges) raw.tuples.push_back({"E", {a, b}});
    return build_structure(raw);
}

}  // namespace

TEST(Signature, RejectsReservedAndDuplicateSymbols) {
    EXPECT_THROW(Signature({{"V", 1}}), InvalidStructure);
    EXPECT_THROW(Signature({{"E", 2}, {"E", 1}}), InvalidStructure);
    EXPECT_THROW(Signature({{"E", 0}}), InvalidStructure);
    EXPECT_THROW(Signature({{"E_1", 2}}), InvalidStructure);
    EXPECT_NO_THROW(Signature({{"E1", 2}, {"F", 3}}));
}

TEST(Validate, ReportsEachViolation) {
    EXPECT_TRUE(validate({stock::digraph(), {"1"}, {}}).empty());
    RawStructure bad{stock::digraph(), {"a"}, {{"E", {"a", "b"}}}};
    auto v = validate(bad);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].tuple, (std::vector<std::string>{"a", "b"}));
    EXPECT_THROW(build_structure(bad), InvalidStructure);

    RawStructure worse{stock::digraph(), {"a", "a"}, {{"E", {"a"}}, {"F", {"a", "a"}}}};
    EXPECT_EQ(validate(worse).size(), 3u);

    Signature s{{"S", 3}};
    auto s1 = stock::s1(s, "S");
    EXPECT_EQ(s1.size(), 3u);
    EXPECT_EQ(s1.relation(0), (std::vector<Tuple>{{0, 1, 2}}));
}

TEST(IsHom, Basics) {
    auto p1 = stock::path(1);
    auto loop = stock::loop();
    auto point = stock::v1(stock::digraph());
    EXPECT_TRUE(is_hom(p1, p1, ElementMap{0, 1}));
    EXPECT_TRUE(is_hom(p1, loop, ElementMap{0, 0}));
    EXPECT_FALSE(is_hom(p1, point, ElementMap{0, 0}));
    EXPECT_THROW(is_hom(p1, stock::v1(Signature{{"F", 1}}), ElementMap{0, 0}), SignatureMismatch);
}

TEST(EdgeAction, ComposesAndMapsToLoop) {
    auto p1 = stock::path(1);
    auto loop = stock::loop();
    EXPECT_EQ(edge_action(p1, loop, ElementMap{0, 0}, "E"), (std::vector<std::size_t>{0}));
    auto p2 = stock::path(2);
    EXPECT_EQ(edge_action(p2, p2, ElementMap{0, 1, 2}, "E"), (std::vector<std::size_t>{0, 1}));
    EXPECT_THROW(edge_action(p2, p2, ElementMap{0, 1, 2}, "F"), SignatureMismatch);

    // (f∘g)^E = f^E ∘ g^E on a composable pair P2 -> P3 -> L4.
    auto p3 = stock::path(3);
    auto l4 = stock::order(4);
    ElementMap g{1, 2, 3}, f{0, 1, 2, 3};
    auto fg = compose(f, g);
    auto lhs = edge_action(p2, l4, fg, "E");
    auto ge = edge_action(p2, p3, g, "E");
    auto fe = edge_action(p3, l4, f, "E");
    for (std::size_t j = 0; j < lhs.size(); ++j) EXPECT_EQ(lhs[j], fe[ge[j]]);
}

TEST(HomExists, PaperExamples) {
    EXPECT_FALSE(hom_exists(stock::path(2), stock::order(2)));
    EXPECT_TRUE(hom_exists(stock::path(2), stock::order(3)));
    EXPECT_TRUE(hom_exists(stock::order(3), stock::order(3)));
}

TEST(EnumerateHoms, SmallCases) {
    auto l3 = stock::order(3);
    EXPECT_EQ(enumerate_homs(stock::v1(stock::digraph()), l3).size(), 3u);
    auto p1 = stock::path(1);
    EXPECT_EQ(enumerate_homs(p1, p1), (std::vector<ElementMap>{{0, 1}}));
    Structure empty(stock::digraph(), {}, {});
    EXPECT_TRUE(enumerate_homs(stock::v1(stock::digraph()), empty).empty());
    EXPECT_EQ(enumerate_homs(empty, p1), (std::vector<ElementMap>{ElementMap{}}));
}

TEST(HomEquivalent, Examples) {
    auto l2 = stock::order(2);
    EXPECT_TRUE(hom_equivalent(l2, l2));
    EXPECT_FALSE(hom_equivalent(l2, stock::loop()));
    auto padded = digraph({"0", "1", "2", "x"}, {{"0", "1"}, {"1", "2"}});
    EXPECT_TRUE(hom_equivalent(stock::path(2), padded));
}

TEST(DisjointUnion, Sizes) {
    EXPECT_EQ(disjoint_union(std::span<const Structure>{}).structure.size(), 0u);
    std::vector<Structure> v1s{stock::v1(stock::digraph()), stock::v1(stock::digraph())};
    auto u = disjoint_union(v1s);
    EXPECT_EQ(u.structure.size(), 2u);
    EXPECT_EQ(u.structure.tuple_count(), 0u);
    std::vector<Structure> p1s{stock::path(1), stock::path(1)};
    auto w = disjoint_union(p1s);
    EXPECT_EQ(w.structure.size(), 4u);
    EXPECT_EQ(w.structure.tuple_count(), 2u);
    EXPECT_EQ(w.injections[1], (ElementMap{2, 3}));
    EXPECT_EQ(w.structure.id(2), "1:0");
}

TEST(Stock, Shapes) {
    auto l2 = stock::by_name("L:2");
    EXPECT_EQ(l2.domain(), (std::vector<std::string>{"1", "2"}));
    EXPECT_EQ(l2.relation(0), (std::vector<Tuple>{{0, 1}}));
    EXPECT_EQ(stock::by_name("S1:E"), digraph({"1", "2"}, {{"1", "2"}}));
    EXPECT_EQ(stock::path(1).tuple_count(), 1u);
    EXPECT_THROW(stock::by_name("Q:1"), PreconditionFailed);
    EXPECT_THROW(stock::by_name("S1:F"), PreconditionFailed);
    EXPECT_THROW(stock::path(0), PreconditionFailed);
}

// The solver against every map, all digraph pairs with at most three vertices.
TEST(Solver, AgreesWithBruteForceOnSmallDigraphs) {
    auto all = oracle::enumerate_structures(stock::digraph(), 3);
    ASSERT_EQ(all.size(), 531u);
    std::size_t checked = 0;
    for (const auto& a : all)
        for (const auto& b : all) {
            ASSERT_EQ(hom_exists(a, b), oracle::brute_force_hom_exists(a, b));
            ++checked;
        }
    EXPECT_EQ(checked, 531u * 531u);
}

TEST(Solver, EnumerationMatchesBruteForce) {
    auto all = oracle::enumerate_structures(stock::digraph(), 3);
    for (std::size_t i = 0; i < all.size(); i += 7)
        for (std::size_t j = 0; j < all.size(); j += 5)
            ASSERT_EQ(enumerate_homs(all[i], all[j]), oracle::brute_force_homs(all[i], all[j]));
}

TEST(Solver, TernaryAndMixedSignatures) {
    Signature sig{{"R", 3}, {"U", 1}};
    auto all = oracle::enumerate_structures(sig, 1);
    std::vector<Structure> twos;
    oracle::for_each_structure_of_size(sig, 2, [&](const Structure& s) {
        if (twos.size() < 300) twos.push_back(s);
        return true;
    });
    all.insert(all.end(), twos.begin(), twos.end());
    for (const auto& a : all)
        for (const auto& b : all) {
            ASSERT_EQ(enumerate_homs(a, b), oracle::brute_force_homs(a, b));
        }
}

TEST(Solver, PreorderOnSmallDigraphs) {
    auto all = oracle::enumerate_structures(stock::digraph(), 2);
    for (const auto& a : all) EXPECT_TRUE(hom_exists(a, a));
    for (const auto& a : all)
        for (const auto& b : all)
            for (const auto& c : all)
                if (hom_exists(a, b) && hom_exists(b, c)) {
                    ASSERT_TRUE(hom_exists(a, c));
                }
}

TEST(Solver, FixedAssignments) {
    auto l3 = stock::order(3);
    auto p1 = stock::path(1);
    HomSolver solver(p1, l3);
    EXPECT_EQ(solver.all({std::nullopt, Index{1}}), (std::vector<ElementMap>{{0, 1}}));
    EXPECT_FALSE(solver.exists({Index{2}, std::nullopt}));
}

TEST(Enumerate, Counts) {
    EXPECT_EQ(oracle::enumerate_structures(stock::digraph(), 1).size(), 3u);
    std::size_t n2 = 0;
    oracle::for_each_structure_of_size(stock::digraph(), 2, [&](const Structure&) { return ++n2, true; });
    EXPECT_EQ(n2, 16u);
    EXPECT_EQ(oracle::enumerate_structures(Signature{{"R", 3}}, 0).size(), 1u);
}
