// Arc graphs and their right adjoint on a small digraph.
//
//   arc_graph_demo            prints the steps for the digraph below
//   arc_graph_demo FILE       uses a structure file instead

#include <fstream>
#include <iostream>
#include <sstream>

#include "pultr/pultr.hpp"

using namespace pultr;

int main(int argc, char** argv) {
    Structure g = templates::digraph_on({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"b", "d"}});
    if (argc > 1) {
        std::ifstream in(argv[1]);
        std::stringstream text;
        text << in.rdbuf();
        try {
            g = io::parse_structure(text.str());
        } catch (const Error& e) {
            std::cerr << argv[1] << ": " << e.what() << "\n";
            return 2;
        }
    }
    const auto arc = templates::arc_graph();

    const auto line = gamma_apply(arc, g);
    std::cout << "# arc graph of the input\n" << io::print_structure(line);

    // Λ replaces each vertex of the arc graph by an edge; it maps back into g.
    const auto gadget = lambda_apply(arc, line);
    std::cout << "# Λ(arc graph) -> input: " << (hom_exists(gadget, g) ? "yes" : "no") << "\n";

    // The arc graph maps into L_k iff g maps into Ω(L_k).
    for (std::size_t k = 1; k <= 3; ++k) {
        const auto target = stock::order(k);
        const auto omega = omega_edge_apply(arc, target);
        std::cout << "# k = " << k << ": arc graph -> L_k " << (hom_exists(line, target) ? "yes" : "no")
                  << ", input -> Ω(L_k) " << (hom_exists(g, omega) ? "yes" : "no") << " (|Ω(L_k)| = "
                  << omega.size() << ")\n";
    }
}
