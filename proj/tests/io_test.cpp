#include <gtest/gtest.h>

#include "pultr/adjoint/compose.hpp"
#include "pultr/core/stock.hpp"
#include "pultr/duals/dual.hpp"
#include "pultr/functors/template.hpp"
#include "pultr/io/structure_io.hpp"
#include "pultr/io/template_io.hpp"
#include "pultr/oracle/enumerate.hpp"

using namespace pultr;
using namespace pultr::io;

namespace {

const char* const order2 =
    "signature E:2\n"
    "domain 1 2\n"
    "rel E\n"
    "1 2\n"
    "end\n";

template <class E>
std::pair<std::size_t, std::size_t> error_position(const std::string& text) {
    try {
        parse_structure(text);
    } catch (const E& e) {
        std::string what = e.what();
        auto colon = what.find(':');
        auto second = what.find(':', colon + 1);
        return {std::stoul(what.substr(0, colon)), std::stoul(what.substr(colon + 1, second - colon - 1))};
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return {0, 0};
}

}  // namespace

TEST(StructureFile, OrderTwoParsesToStock) {
    EXPECT_EQ(parse_structure(order2), stock::order(2));
    EXPECT_EQ(print_structure(stock::order(2)), order2);
}

TEST(StructureFile, CommentsAndSpacingAreIgnored) {
    const std::string text = "# two vertices\n\nsignature   E:2\ndomain 1 2 # ids\n rel E\n\t1   2\nend";
    EXPECT_EQ(parse_structure(text), stock::order(2));
}

TEST(StructureFile, MissingBlocksAreEmptyRelations) {
    auto s = parse_structure("signature E:2 F:3\ndomain a\n");
    EXPECT_EQ(s.tuple_count(), 0u);
    EXPECT_EQ(print_structure(s), "signature E:2 F:3\ndomain a\nrel E\nend\nrel F\nend\n");
}

TEST(StructureFile, EmptySignatureAndDomain) {
    auto s = parse_structure("signature\ndomain\n");
    EXPECT_EQ(s.size(), 0u);
    EXPECT_EQ(print_structure(s), "signature\ndomain\n");
}

TEST(StructureFile, RoundTripsEverySmallStructure) {
    const Signature sig{{"E", 2}, {"U", 1}};
    for (const auto& s : oracle::enumerate_structures(sig, 2)) {
        auto text = print_structure(s);
        EXPECT_EQ(parse_structure(text), s);
        EXPECT_EQ(print_structure(parse_structure(text)), text);
    }
}

TEST(StructureFile, RoundTripsGeneratedIds) {
    auto omega = omega_apply(templates::arc_graph(), stock::loop());
    auto text = print_structure(omega);
    EXPECT_EQ(parse_structure(text), omega);
}

TEST(StructureFile, SyntaxErrorsCarryPositions) {
    EXPECT_EQ(error_position<ParseError>("domain 1\n"), std::make_pair(1ul, 1ul));
    EXPECT_EQ(error_position<ParseError>("signature E2\ndomain 1\n"), std::make_pair(1ul, 11ul));
    EXPECT_EQ(error_position<ParseError>("signature E:x\n"), std::make_pair(1ul, 13ul));
    EXPECT_EQ(error_position<ParseError>("signature E:2\ndomain 1\nrel E\n1 1\n"), std::make_pair(4ul, 1ul));
    EXPECT_EQ(error_position<ParseError>("signature E:2\ndomain 1\nrel E\nend extra\n"), std::make_pair(4ul, 5ul));
    EXPECT_EQ(error_position<ParseError>("signature E:2\ndomain 1\nstray\n"), std::make_pair(3ul, 1ul));
    EXPECT_EQ(error_position<ParseError>("signature E:2\ndomain end\n"), std::make_pair(2ul, 8ul));
}

TEST(StructureFile, SemanticErrorsCarryPositions) {
    EXPECT_EQ(error_position<InvalidStructure>("signature E:2\ndomain 1 2 1\n"), std::make_pair(2ul, 12ul));
    EXPECT_EQ(error_position<InvalidStructure>("signature E:2\ndomain 1\nrel E\n1 1 1\nend\n"),
              std::make_pair(4ul, 1ul));
    EXPECT_EQ(error_position<InvalidStructure>("signature E:2\ndomain 1\nrel E\n1  7\nend\n"),
              std::make_pair(4ul, 4ul));
    EXPECT_EQ(error_position<InvalidStructure>("signature E:2\ndomain 1\nrel F\nend\n"), std::make_pair(3ul, 5ul));
    EXPECT_EQ(error_position<InvalidStructure>("signature E:2 E:3\ndomain\n"), std::make_pair(1ul, 1ul));
    EXPECT_EQ(error_position<InvalidStructure>("signature V:1\ndomain\n"), std::make_pair(1ul, 1ul));
}

TEST(StructureFile, UnwritableIdsAreRejected) {
    EXPECT_THROW(print_structure(Structure(stock::digraph(), {"a b"}, {})), InvalidStructure);
    EXPECT_THROW(print_structure(Structure(stock::digraph(), {"end"}, {})), InvalidStructure);
    EXPECT_THROW(print_structure(Structure(stock::digraph(), {"x#"}, {})), InvalidStructure);
}

TEST(TemplateFile, StockTemplatesRoundTrip) {
    for (const auto& t : {templates::arc_graph(), templates::oriented_path(), templates::oriented_path_4ary(),
                          templates::arc_structure()}) {
        auto text = print_template(t);
        auto back = parse_template(text);
        EXPECT_EQ(print_template(back), text);
        EXPECT_EQ(back.p, t.p);
        EXPECT_EQ(back.q, t.q);
        EXPECT_EQ(back.epsilon, t.epsilon);
        EXPECT_EQ(back.terms, t.terms);
    }
}

TEST(TemplateFile, ArcGraphTranscription) {
    const std::string text =
        "source E:2\n"
        "target E:2\n"
        "P\n"
        "domain 0 1\n"
        "rel E\n0 1\nend\n"
        "Q E\n"
        "domain 0 1 2\n"
        "rel E\n0 1\n1 2\nend\n"
        "epsilon E 1\n0 0\n1 1\nend\n"
        "epsilon E 2\n0 1\n1 2\nend\n";
    auto t = parse_template(text);
    EXPECT_TRUE(admits_edge_case(t));
    EXPECT_TRUE(t.terms.empty());
    EXPECT_EQ(gamma_apply(t, stock::path(2)), gamma_apply(templates::arc_graph(), stock::path(2)));
}

TEST(TemplateFile, TermLinesAreChecked) {
    auto base = print_template(templates::from_term(path_term(2), "v.1.1", "v.2"));
    EXPECT_NO_THROW(parse_template(base));
    auto wrong = base.substr(0, base.find("term ")) + "term R edge_E(vertex, vertex)\n";
    EXPECT_THROW(parse_template(wrong), InvalidTemplate);
    auto broken = base.substr(0, base.find("term ")) + "term R edge_E(vertex,\n";
    try {
        parse_template(broken);
        ADD_FAILURE();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.column(), 22u);
    }
}

TEST(TemplateFile, BadEpsilonBlocks) {
    const std::string head =
        "source E:2\ntarget E:2\nP\ndomain 0 1\nrel E\n0 1\nend\n"
        "Q E\ndomain 0 1 2\nrel E\n0 1\n1 2\nend\n";
    const std::string tail = "epsilon E 2\n0 1\n1 2\nend\n";
    // Not a homomorphism.
    EXPECT_THROW(parse_template(head + "epsilon E 1\n0 1\n1 0\nend\n" + tail), InvalidTemplate);
    // Incomplete map.
    EXPECT_THROW(parse_template(head + "epsilon E 1\n0 0\nend\n" + tail), InvalidTemplate);
    // Unknown target element.
    EXPECT_THROW(parse_template(head + "epsilon E 1\n0 0\n1 9\nend\n" + tail), InvalidTemplate);
    // Index out of range and missing block.
    EXPECT_THROW(parse_template(head + "epsilon E 3\n0 0\n1 1\nend\n" + tail), InvalidTemplate);
    EXPECT_THROW(parse_template(head + tail), InvalidTemplate);
    // Missing 'end'.
    EXPECT_THROW(parse_template(head + "epsilon E 1\n0 0\n1 1\n" + tail), ParseError);
}
