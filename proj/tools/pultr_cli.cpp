// pultr: command line front end for the structure, term and template tools.
//
// Exit codes: 0 success or the property holds, 1 the property fails, 2 usage
// or syntax error, 3 budget exceeded, 4 input parsed but is semantically
// invalid (bad structure, template or term, or a construction's hypotheses
// do not hold).

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pultr/pultr.hpp"
#include "pultr/oracle/sweeps.hpp"

namespace {

using namespace pultr;

enum Exit { ok = 0, fails = 1, usage = 2, budget = 3, invalid = 4 };

// Raised for unreadable files; reported like a usage error.
struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Errors from reading a file, with the file name in front of "line:col: ...".
struct FileSyntaxError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FileInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write '" + path + "'");
    out << text;
}

template <class F>
auto with_file(const std::string& path, F&& f) {
    const auto text = read_file(path);
    try {
        return f(text);
    } catch (const ParseError& e) {
        throw FileSyntaxError(path + ":" + e.what());
    } catch (const Error& e) {
        throw FileInvalid(path + ": " + e.what());
    }
}

Structure load_structure(const std::string& path) {
    return with_file(path, [](const std::string& text) { return io::parse_structure(text); });
}

PultrTemplate load_template(const std::string& path) {
    return with_file(path, [](const std::string& text) { return io::parse_template(text); });
}

// A term given inline, or read from a file when written as @path.
Term load_term(const std::string& arg) {
    if (arg.starts_with("@"))
        return with_file(arg.substr(1), [](const std::string& text) { return io::parse_term(text); });
    return io::parse_term(arg);
}

std::optional<Signature> parse_signature_option(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::string line = "signature ";
    for (char c : text) line += c == ',' ? ' ' : c;
    return io::parse_structure(line + "\ndomain\n").signature();
}

std::string render_map(const Structure& a, const Structure& b, const ElementMap& f) {
    std::string out;
    for (Index x = 0; x < a.size(); ++x) out += (x ? " " : "") + a.id(x) + "->" + b.id(f[x]);
    return out;
}

// --budget, else PULTR_BUDGET, else the library default.
std::optional<std::uint64_t> budget_from(const std::optional<std::uint64_t>& flag) {
    if (flag) return flag;
    if (const char* env = std::getenv("PULTR_BUDGET"); env && *env) {
        try {
            std::size_t used = 0;
            auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw CLI::ValidationError("PULTR_BUDGET", "must be a non-negative integer");
    }
    return std::nullopt;
}

Root parse_root(const Structure& a, const std::string& text) {
    if (auto x = a.find(text)) return Root::at_vertex(*x);
    // SYM(a,b,...)
    auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')')
        throw PreconditionFailed("root '" + text + "' is neither an element nor SYMBOL(a,...)");
    auto k = a.signature().index_of(text.substr(0, open));
    Tuple t;
    std::string inner = text.substr(open + 1, text.size() - open - 2);
    std::size_t start = 0;
    while (true) {
        auto comma = inner.find(',', start);
        t.push_back(a.index_of(inner.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return Root::at_edge(k, std::move(t));
}

void report_counterexample(const std::string& dir, const std::string& name, const Structure& s) {
    const std::string path = dir + "/" + name;
    write_file(path, io::print_structure(s));
    std::cerr << "counterexample written to " << path << "\n";
}

int print_sweep(const oracle::SweepReport& r, const std::string& dir, const std::string& file) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.checked << " checked)\n";
    if (!r.passed && r.counterexample) report_counterexample(dir, file, *r.counterexample);
    return r.passed ? ok : fails;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite relational structures, Pultr functors, tree duals and right adjoints"};
    app.require_subcommand(1);

    std::string a_path, b_path, tmpl_path, root_text, signature_text, case_name = "auto", out_dir = ".";
    std::vector<std::string> term_args;
    std::optional<std::uint64_t> budget_flag;
    bool monotone = false, prune = false;
    std::size_t a_max = 3, b_max = 2;
    std::string which = "both";

    auto* hom = app.add_subcommand("hom", "Print a homomorphism A -> B; exit 1 if none exists");
    hom->add_option("A", a_path)->required();
    hom->add_option("B", b_path)->required();

    auto* homs = app.add_subcommand("homs", "List every homomorphism A -> B");
    homs->add_option("A", a_path)->required();
    homs->add_option("B", b_path)->required();

    auto* equiv = app.add_subcommand("equiv", "Exit 0 iff A and B are homomorphically equivalent");
    equiv->add_option("A", a_path)->required();
    equiv->add_option("B", b_path)->required();

    auto* is_tree_cmd = app.add_subcommand("is-tree", "Exit 0 iff A is a tree");
    is_tree_cmd->add_option("A", a_path)->required();

    auto* term_cmd = app.add_subcommand("term", "Print the term of a tree rooted at an element or tuple");
    term_cmd->add_option("A", a_path)->required();
    term_cmd->add_option("--root", root_text, "element id, or SYMBOL(a,b,...) for a tuple")->required();

    auto* tree_cmd = app.add_subcommand("tree", "Print the rooted tree of a term");
    tree_cmd->add_option("TERM", term_args, "term text, or @file")->required()->expected(1);
    tree_cmd->add_option("--signature", signature_text, "e.g. E:2,F:3; default: the symbols of the term");

    auto* lambda_cmd = app.add_subcommand("lambda", "Print Λ(A) for a template");
    lambda_cmd->add_option("TMPL", tmpl_path)->required();
    lambda_cmd->add_option("A", a_path)->required();

    auto* gamma_cmd = app.add_subcommand("gamma", "Print Γ(B) for a template");
    gamma_cmd->add_option("TMPL", tmpl_path)->required();
    gamma_cmd->add_option("B", b_path)->required();

    auto* dual_cmd = app.add_subcommand("dual", "Print the dual of one or more tree terms");
    dual_cmd->add_option("TERM", term_args, "term text, or @file")->required();
    dual_cmd->add_option("--signature", signature_text, "e.g. E:2,F:3; default: the symbols of the terms");
    dual_cmd->add_flag("--monotone", monotone, "keep only vertices closed under root-preserving maps");
    dual_cmd->add_option("--budget", budget_flag, "largest tuple count to enumerate");

    auto* omega_cmd = app.add_subcommand("omega", "Print the right adjoint Ω(B) for a template");
    omega_cmd->add_option("TMPL", tmpl_path)->required();
    omega_cmd->add_option("B", b_path)->required();
    omega_cmd->add_option("--case", case_name)->check(CLI::IsMember({"auto", "vertex", "edge", "composed"}));
    omega_cmd->add_flag("--prune-a3", prune, "drop vertices that are not closed under root-preserving maps");
    omega_cmd->add_option("--budget", budget_flag, "largest vertex count to enumerate");

    auto* verify = app.add_subcommand("verify", "Exhaustive checks on small structures");
    verify->require_subcommand(1);
    verify->add_option("--out", out_dir, "directory for counterexample files");

    auto* v_adj = verify->add_subcommand("adjunction", "Λ(A) -> B iff A -> Γ(B), and Γ(A) -> B iff A -> Ω(B)");
    v_adj->add_option("TMPL", tmpl_path)->required();
    v_adj->add_option("--a-max", a_max, "largest A");
    v_adj->add_option("--b-max", b_max, "largest B");
    v_adj->add_option("--pair", which)->check(CLI::IsMember({"lambda", "omega", "both"}));
    v_adj->add_option("--budget", budget_flag, "Ω vertex budget; pairs over it are skipped");

    auto* v_dual = verify->add_subcommand("duality", "Exactly one of T(t) -> A and A -> D(t), for every small A");
    v_dual->add_option("TERM", term_args, "term text, or @file")->required()->expected(1);
    v_dual->add_option("--a-max", a_max, "largest A");
    v_dual->add_option("--signature", signature_text, "e.g. E:2,F:3; default: the symbols of the term");
    v_dual->add_option("--budget", budget_flag, "largest tuple count to enumerate");

    auto* v_fix = verify->add_subcommand("fixtures", "Compare Ω with its closed forms on small structures");
    v_fix->add_option("--b-max", b_max, "largest B for the digraph templates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        const auto budget_value = budget_from(budget_flag);
        if (*hom) {
            auto a = load_structure(a_path), b = load_structure(b_path);
            require_same_signature(a, b);
            auto f = find_hom(a, b);
            if (!f) return fails;
            std::cout << render_map(a, b, *f) << "\n";
            return ok;
        }
        if (*homs) {
            auto a = load_structure(a_path), b = load_structure(b_path);
            require_same_signature(a, b);
            HomSolver(a, b).for_each([&](const ElementMap& f) {
                std::cout << render_map(a, b, f) << "\n";
                return true;
            });
            return ok;
        }
        if (*equiv) {
            auto a = load_structure(a_path), b = load_structure(b_path);
            require_same_signature(a, b);
            return hom_equivalent(a, b) ? ok : fails;
        }
        if (*is_tree_cmd) return is_tree(load_structure(a_path)) ? ok : fails;
        if (*term_cmd) {
            auto a = load_structure(a_path);
            std::cout << io::print_term(term_of_tree(a, parse_root(a, root_text)).term) << "\n";
            return ok;
        }
        if (*tree_cmd) {
            auto t = load_term(term_args.front());
            auto sig = parse_signature_option(signature_text).value_or(signature_of(std::span<const Term>(&t, 1)));
            std::cout << io::print_structure(tree_of_term(t, sig).structure);
            return ok;
        }
        if (*lambda_cmd) {
            std::cout << io::print_structure(lambda_apply(load_template(tmpl_path), load_structure(a_path)));
            return ok;
        }
        if (*gamma_cmd) {
            std::cout << io::print_structure(gamma_apply(load_template(tmpl_path), load_structure(b_path)));
            return ok;
        }
        if (*dual_cmd) {
            std::vector<Term> terms;
            for (const auto& arg : term_args) terms.push_back(load_term(arg));
            DualOptions opt;
            opt.monotone = monotone;
            if (budget_value) opt.budget = *budget_value;
            auto sig = parse_signature_option(signature_text).value_or(signature_of(terms));
            std::cout << io::print_structure(dual_of_forest(terms, sig, opt));
            return ok;
        }
        if (*omega_cmd) {
            OmegaOptions opt;
            opt.prune_a3 = prune;
            if (budget_value) opt.budget = *budget_value;
            const auto t = load_template(tmpl_path);
            const auto b = load_structure(b_path);
            if (case_name == "auto")
                case_name = admits_vertex_case(t) ? "vertex" : admits_edge_case(t) ? "edge" : "composed";
            if (case_name == "composed") {
                std::cerr << "# case composed\n";
                std::cout << io::print_structure(omega_composed(t, b, opt));
                return ok;
            }
            // The terms and witnesses behind the result go to stderr.
            const auto r = case_name == "vertex" ? omega_vertex_build(t, b, opt) : omega_edge_build(t, b, opt);
            std::cerr << "# case " << case_name << "\n";
            for (std::size_t k = 0; k < r.terms.size(); ++k)
                std::cerr << "# term " << t.target[k].name << " " << io::print_term(r.terms[k]) << "\n";
            for (std::size_t k = 0; k < r.witnesses.size(); ++k)
                for (std::size_t j = 0; j < r.witnesses[k].size(); ++j)
                    std::cerr << "# witness " << r.structure.signature()[k].name << " "
                              << render_tuple(ids_of(r.structure, r.structure.relation(k)[j])) << " "
                              << b.id(r.witnesses[k][j]) << "\n";
            std::cout << io::print_structure(r.structure);
            return ok;
        }
        if (*v_adj) {
            const auto t = load_template(tmpl_path);
            int result = ok;
            bool skipped = false;
            auto run = [&](const std::string& label, const oracle::Functor& left, const oracle::Functor& right,
                           const Signature& a_sig, const Signature& b_sig) {
                auto as = oracle::enumerate_structures(a_sig, a_max);
                auto bs = oracle::enumerate_structures(b_sig, b_max);
                auto r = oracle::check_adjunction(left, right, as, bs);
                std::cout << (r.passed ? "PASS " : "FAIL ") << label << " (" << r.checked << " pairs checked, "
                          << r.skipped << " skipped)\n";
                skipped |= r.skipped > 0;
                if (!r.passed) {
                    report_counterexample(out_dir, "counterexample_A.txt", r.counterexample->first);
                    report_counterexample(out_dir, "counterexample_B.txt", r.counterexample->second);
                    result = fails;
                }
            };
            if (which != "omega")
                run(
                    "Λ(A) -> B iff A -> Γ(B)", [&](const Structure& a) { return lambda_apply(t, a); },
                    [&](const Structure& b) { return gamma_apply(t, b); }, t.target, t.source);
            if (which != "lambda") {
                OmegaOptions opt;
                if (budget_value) opt.budget = *budget_value;
                run(
                    "Γ(A) -> B iff A -> Ω(B)", [&](const Structure& a) { return gamma_apply(t, a); },
                    [&](const Structure& b) { return omega_apply(t, b, OmegaChoice::automatic, opt); }, t.source,
                    t.target);
            }
            if (result == ok && skipped) return budget;
            return result;
        }
        if (*v_dual) {
            auto t = load_term(term_args.front());
            auto sig = parse_signature_option(signature_text).value_or(signature_of(std::span<const Term>(&t, 1)));
            DualOptions opt;
            if (budget_value) opt.budget = *budget_value;
            auto d = dual_of_term(t, sig, opt);
            auto r = oracle::check_duality_pair(tree_of_term(t, sig).structure, d,
                                                oracle::enumerate_structures(sig, a_max));
            std::cout << (r.passed ? "PASS" : "FAIL: " + r.reason) << " (" << r.checked << " structures checked)\n";
            if (r.counterexample) report_counterexample(out_dir, "counterexample_A.txt", *r.counterexample);
            return r.passed ? ok : fails;
        }
        if (*v_fix) {
            int result = ok;
            auto fold = [&](int code) { result = std::max(result, code); };
            fold(print_sweep(oracle::arc_graph_fixture_sweep(b_max), out_dir, "counterexample_arc_graph.txt"));
            fold(print_sweep(oracle::oriented_path_fixture_sweep(b_max), out_dir, "counterexample_oriented_path.txt"));
            fold(print_sweep(oracle::arc_structure_fixture_sweep(std::min<std::size_t>(b_max, 2)), out_dir,
                             "counterexample_arc_structure.txt"));
            fold(print_sweep(oracle::omega_of_point_sweep(), out_dir, "counterexample_point.txt"));
            return result;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const FileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const FileSyntaxError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return usage;
    } catch (const ParseError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return usage;
    } catch (const FileInvalid& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return invalid;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return budget;
    } catch (const Error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return invalid;
    }
    return usage;
}
